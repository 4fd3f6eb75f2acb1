"""Class members from Schwarz functions, and the reverse membership check.

A member f of S_p(A, B, beta) is tied to a Schwarz function phi by

    z f'(z) - p f(z) = [M f(z) - B z f'(z)] phi(z),     M = pB + (A-B)(p-beta).

Going forward (phi -> f) is a triangular recurrence on the Taylor
coefficients; going backward (f -> phi) evaluates q = z f'/f on a grid and
inverts the Moebius map, phi = (q - p) / (M - B q).
"""
from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .bounds import aouf_bound, theorem1_bound
from .errors import DegenerateDenominator, TruncationWarning
from .params import ClassParams, clunie_factor
from .series import TruncatedSeries, divide, evaluate, mul, tail_estimate, z_derivative

ZERO_MODULUS_CAP = 1 - 1e-9
SWEEP_ZERO_RADIUS = 0.95
SWEEP_MAX_ZEROS = 4
SWEEP_GUARD_TERMS = 8


@dataclass(frozen=True)
class SchwarzSpec:
    """phi(z) = u * z * prod_i (z - a_i) / (1 - conj(a_i) z)."""

    zeros: tuple[complex, ...] = ()
    unimodular_factor: complex = 1.0

    def __post_init__(self):
        zs = tuple(complex(a) for a in self.zeros)
        object.__setattr__(self, "zeros", zs)
        object.__setattr__(self, "unimodular_factor", complex(self.unimodular_factor))
        for a in zs:
            if abs(a) > ZERO_MODULUS_CAP:
                raise ValueError(f"Blaschke zero {a} is not inside the disk")
        if abs(abs(self.unimodular_factor) - 1) > 1e-12:
            raise ValueError("unimodular_factor must have modulus 1")

    @classmethod
    def monomial(cls, k: int, delta: complex = 1.0) -> "SchwarzSpec":
        """phi(z) = delta z^k."""
        if k < 1:
            raise ValueError("phi(0) = 0 needs k >= 1")
        return cls((0j,) * (k - 1), delta)

    def taylor(self, order: int) -> TruncatedSeries:
        """Coefficients of z^0 .. z^(order-1); the z^0 term is 0."""
        out = TruncatedSeries.of([0, self.unimodular_factor], order=order)
        m = np.arange(1, order)
        for a in self.zeros:
            # (z - a) / (1 - conj(a) z) = -a + sum_{k>=1} conj(a)^(k-1) (1 - |a|^2) z^k
            factor = np.empty(order, complex)
            factor[0] = -a
            factor[1:] = np.conj(a) ** (m - 1) * (1 - abs(a) ** 2)
            out = mul(out, TruncatedSeries(0, factor, order))
        return out

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = self.unimodular_factor * z
        for a in self.zeros:
            out = out * (z - a) / (1 - np.conj(a) * z)
        return out

    def as_dict(self) -> dict:
        return {
            "zeros": [[a.real, a.imag] for a in self.zeros],
            "unimodular_factor": [self.unimodular_factor.real, self.unimodular_factor.imag],
        }


@dataclass(frozen=True)
class SampleGrid:
    radii: tuple[float, ...] = (0.3, 0.6, 0.9, 0.99)
    angles: int = 256

    def __post_init__(self):
        if any(not 0 < r < 1 for r in self.radii):
            raise ValueError("sample radii must lie strictly inside the unit disk")

    def points(self, r: float) -> np.ndarray:
        return r * np.exp(2j * np.pi * np.arange(self.angles) / self.angles)


DEFAULT_GRID = SampleGrid()


@dataclass(frozen=True)
class MembershipReport:
    max_ratio: float
    radii: tuple[float, ...]
    excluded_radii: tuple[float, ...]
    angles: int
    tolerance: float
    order: int
    tail_estimates: dict = field(default_factory=dict)
    rounding_estimates: dict = field(default_factory=dict)
    ill_conditioned_radii: tuple[float, ...] = ()

    @property
    def verdict(self) -> bool:
        return self.max_ratio <= 1 + self.tolerance

    def as_dict(self) -> dict:
        return {
            "max_ratio": self.max_ratio,
            "verdict": self.verdict,
            "radii": list(self.radii),
            "excluded_radii": list(self.excluded_radii),
            "angles": self.angles,
            "tolerance": self.tolerance,
            "order": self.order,
            "tail_estimates": {str(r): _finite(t) for r, t in self.tail_estimates.items()},
            "rounding_estimates": {str(r): _finite(t) for r, t in self.rounding_estimates.items()},
            "ill_conditioned_radii": list(self.ill_conditioned_radii),
        }


def _finite(x: float) -> float | None:
    return x if math.isfinite(x) else None


@dataclass(frozen=True)
class RecoveredSchwarz:
    """phi recovered on the resolved sample circles, one array per radius.

    Error estimates are on the scale of phi.  ``ill_conditioned_radii`` lists
    the excluded radii whose rounding error alone is too large, which a
    longer truncation cannot fix.
    """

    points: dict
    values: dict
    excluded_radii: tuple[float, ...]
    tail_estimates: dict
    order: int
    rounding_estimates: dict = field(default_factory=dict)
    ill_conditioned_radii: tuple[float, ...] = ()


def rounding_estimate(f: TruncatedSeries, z: np.ndarray, qz: np.ndarray) -> np.ndarray:
    """Pointwise size of the error in q = z f'/f caused by rounding in the coefficients.

    Coefficients carry relative error about eps * sqrt(N); that perturbs f by
    u * sum |a_k| r^k and z f' by u * sum k |a_k| r^k.  Large when f is tiny
    on part of the circle compared with its coefficient mass, which no
    truncation order can repair.
    """
    r = float(np.abs(z[0]))
    powers = f.offset + np.arange(len(f.coeffs))
    w = np.abs(f.coeffs) * r**powers
    u = np.finfo(float).eps * math.sqrt(len(f.coeffs))
    fz = np.abs(evaluate(f, z))
    with np.errstate(divide="ignore", invalid="ignore"):
        dq = u * (np.dot(powers, w) + np.abs(qz) * w.sum()) / fz
    return np.nan_to_num(dq, nan=math.inf)


def recover_schwarz(
    f: TruncatedSeries,
    params: ClassParams,
    grid: SampleGrid = DEFAULT_GRID,
    tail_tol: float = 1e-6,
) -> RecoveredSchwarz:
    p = params.p
    if f.offset != p or abs(f.coeffs[0] - 1) > 1e-12:
        raise ValueError(f"expected f = z^{p} + ..., got offset {f.offset}, leading {f.coeffs[0]}")
    q = divide(z_derivative(f), f)
    points, values, tails, rounding = {}, {}, {}, {}
    excluded, ill = [], []
    for r in grid.radii:
        tail_q = tail_estimate(q, r)
        if tail_q > tail_tol:
            tails[r] = tail_q
            excluded.append(r)
            warnings.warn(
                f"radius {r} dropped: series tail estimate {tail_q:.3g} exceeds {tail_tol:g} "
                f"at truncation order {f.order}",
                TruncationWarning,
                stacklevel=2,
            )
            continue
        z = grid.points(r)
        qz = evaluate(q, z)
        den = params.M - params.B * qz
        if np.min(np.abs(den)) < 1e-12:
            raise DegenerateDenominator(
                f"M - B q(z) vanishes near radius {r}: not a class member or radius too large"
            )
        # d phi / d q = (M - B p) / (M - B q)^2
        gain = abs(params.M - params.B * p) / np.abs(den) ** 2
        tails[r] = float(tail_q * np.max(gain))
        rounding[r] = float(np.max(rounding_estimate(f, z, qz) * gain))
        if rounding[r] > tail_tol:
            excluded.append(r)
            ill.append(r)
            warnings.warn(
                f"radius {r} dropped: rounding in the coefficients may move phi by {rounding[r]:.3g}, "
                f"above {tail_tol:g}",
                TruncationWarning,
                stacklevel=2,
            )
            continue
        if tails[r] + rounding[r] > tail_tol:
            excluded.append(r)
            warnings.warn(
                f"radius {r} dropped: truncation error in phi estimated at {tails[r]:.3g} "
                f"at order {f.order}",
                TruncationWarning,
                stacklevel=2,
            )
            continue
        points[r] = z
        values[r] = (qz - p) / den
    return RecoveredSchwarz(points, values, tuple(excluded), tails, f.order, rounding, tuple(ill))


def schwarz_from_function(
    f: TruncatedSeries,
    params: ClassParams,
    grid: SampleGrid = DEFAULT_GRID,
    tolerance: float = 1e-6,
    tail_tol: float = 1e-6,
) -> MembershipReport:
    """Check |phi(z)| <= |z| on the grid for the phi induced by f."""
    rec = recover_schwarz(f, params, grid, tail_tol)
    if not rec.values:
        raise ValueError("no sample radius resolved; raise the truncation order")
    ratio = max(float(np.max(np.abs(rec.values[r]) / r)) for r in rec.values)
    return MembershipReport(
        max_ratio=ratio,
        radii=tuple(rec.values),
        excluded_radii=rec.excluded_radii,
        angles=grid.angles,
        tolerance=tolerance,
        order=rec.order,
        tail_estimates=rec.tail_estimates,
        rounding_estimates=rec.rounding_estimates,
        ill_conditioned_radii=rec.ill_conditioned_radii,
    )


def certify_membership(
    build: Callable[[int], TruncatedSeries],
    params: ClassParams,
    grid: SampleGrid = DEFAULT_GRID,
    tolerance: float = 1e-6,
    tail_tol: float = 1e-6,
    start_order: int = 256,
    max_order: int = 16384,
) -> MembershipReport:
    """Membership check, doubling the truncation order until every radius resolves.

    Radii lost to rounding rather than truncation stop the doubling, since a
    longer series only makes them worse.
    """
    order = start_order
    while True:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore" if order < max_order else "default", TruncationWarning)
            report = schwarz_from_function(build(order), params, grid, tolerance, tail_tol)
        if set(report.excluded_radii) <= set(report.ill_conditioned_radii) or order >= max_order:
            return report
        order *= 2


def build_function_from_schwarz(spec: SchwarzSpec, params: ClassParams, order: int) -> TruncatedSeries:
    """The member f = z^p + ... whose Schwarz function is ``spec``.

    Solves k a_{p+k} = sum_{m=1}^{k} phi_m d_{k-m} with d_0 = c and
    d_j = [A(p-beta) - B(j+p-beta)] a_{p+j}.
    """
    p = params.p
    if order < p + 2:
        raise ValueError(f"order must be at least p + 2 = {p + 2}")
    N = order - p
    phi = spec.taylor(N).coeffs
    a = np.zeros(N, complex)
    d = np.zeros(N, complex)
    a[0] = 1.0
    d[0] = params.c
    t = np.array([clunie_factor(params, j + 1) for j in range(N)])
    for k in range(1, N):
        a[k] = np.dot(phi[1 : k + 1], d[k - 1 :: -1]) / k
        d[k] = t[k] * a[k]
    return TruncatedSeries(p, a, order)


def random_schwarz_spec(
    rng: np.random.Generator,
    max_zeros: int = SWEEP_MAX_ZEROS,
    radius: float = SWEEP_ZERO_RADIUS,
) -> SchwarzSpec:
    """Blaschke data: 0..max_zeros zeros uniform on |a| <= radius, uniform rotation."""
    count = int(rng.integers(0, max_zeros + 1))
    rho = radius * np.sqrt(rng.random(count))
    theta = 2 * np.pi * rng.random(count)
    u = np.exp(2j * np.pi * rng.random())
    return SchwarzSpec(tuple(rho * np.exp(1j * theta)), u)


def member_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream per sweep index, so results ignore worker count."""
    return np.random.default_rng([seed, index])


@dataclass(frozen=True)
class Violation:
    index: int
    n: int
    modulus: float
    bound: float
    spec: SchwarzSpec

    @property
    def ratio(self) -> float:
        return self.modulus / self.bound if self.bound > 0 else math.inf

    def as_dict(self) -> dict:
        return {
            "index": self.index,
            "n": self.n,
            "modulus": self.modulus,
            "bound": self.bound,
            "ratio": self.ratio,
            "schwarz": self.spec.as_dict(),
        }


def _check_members(
    specs: Sequence[tuple[int, SchwarzSpec]],
    params: ClassParams,
    bounds: np.ndarray,
    max_n: int,
    rtol: float,
) -> list[Violation]:
    p = params.p
    found = []
    for index, spec in specs:
        f = build_function_from_schwarz(spec, params, max_n + 1 + SWEEP_GUARD_TERMS)
        mods = np.abs(f.coeffs[1 : max_n - p + 1])
        for i in np.flatnonzero(mods > bounds * (1 + rtol)):
            found.append(Violation(index, p + 1 + int(i), float(mods[i]), float(bounds[i]), spec))
    return found


def _sweep(
    params: ClassParams,
    specs: Callable[[int], SchwarzSpec],
    count: int,
    max_n: int,
    bound: Callable[[ClassParams, int], float],
    rtol: float,
    workers: int,
) -> list[Violation]:
    if max_n - params.p > 32:
        raise ValueError("sweeps support max_n - p <= 32")
    if max_n < params.p + 1 or count <= 0:
        return []
    bounds = np.array([bound(params, n) for n in range(params.p + 1, max_n + 1)])
    workers = max(1, workers)
    chunk = max(1, -(-count // (4 * workers)))
    ranges = [range(s, min(s + chunk, count)) for s in range(0, count, chunk)]

    def run(rg: range) -> list[Violation]:
        return _check_members([(i, specs(i)) for i in rg], params, bounds, max_n, rtol)

    if workers == 1:
        parts = map(run, ranges)
    else:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(run, ranges))
    return [v for part in parts for v in part]


def random_member_sweep(
    params: ClassParams,
    count: int,
    max_n: int,
    seed: int,
    rtol: float = 1e-9,
    workers: int = 1,
) -> list[Violation]:
    """Random members checked against the valid coefficient bound; expect no hits."""
    return _sweep(
        params,
        lambda i: random_schwarz_spec(member_rng(seed, i)),
        count,
        max_n,
        theorem1_bound,
        rtol,
        workers,
    )


def aouf_member_sweep(
    params: ClassParams,
    count: int,
    max_n: int,
    seed: int,
    rtol: float = 1e-9,
    workers: int = 1,
) -> list[Violation]:
    """Members checked against the earlier product bound.

    The monomials phi = z^k, k = 1..max_n-p, come first (indices 0..max_n-p-1),
    followed by ``count`` random members.
    """
    K = max(0, max_n - params.p)

    def spec(i: int) -> SchwarzSpec:
        if i < K:
            return SchwarzSpec.monomial(i + 1)
        return random_schwarz_spec(member_rng(seed, i - K))

    return _sweep(params, spec, K + count, max_n, aouf_bound, rtol, workers)
