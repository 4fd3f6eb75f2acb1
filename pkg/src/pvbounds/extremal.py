"""Taylor expansions of the two extremal families and attainment checks.

Global family:  z^p (1 + B delta z)^(c/B),  or z^p exp(A(p-beta) delta z) when B = 0.
Per-n family:   z^p (1 + B delta z^g)^(c/(g B)),  or z^p exp(A(p-beta) delta z^g / g).

As printed, the per-n family uses the gap g = n - 1, which puts its first
nontrivial coefficient at z^(p+n-1).  That is z^n only for p = 1.  The gap
g = n - p always lands on z^n with modulus c/(n-p).  ``ExtremalSpec.gap``
selects the gap explicitly; ``None`` means the printed n - 1.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, replace

from .bounds import BoundReport, bound_report
from .errors import CaseMismatch
from .params import CaseLabel, ClassParams
from .series import (
    TruncatedSeries,
    exp_series,
    pow_binomial,
    shift,
    substitute_power,
    truncate,
)


class Family(str, enum.Enum):
    GLOBAL = "global"
    PER_N = "per-n"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class ExtremalSpec:
    params: ClassParams
    family: Family = Family.GLOBAL
    n: int | None = None
    delta: complex = 1.0
    gap: int | None = None

    def __post_init__(self):
        if abs(abs(self.delta) - 1) > 1e-12:
            raise ValueError(f"|delta| must be 1, got {abs(self.delta)}")
        if self.family is Family.PER_N:
            if self.n is None or self.n < self.params.p + 1:
                raise ValueError("per-n family needs a target n >= p + 1")
            if self.gap is not None and self.gap < 1:
                raise ValueError("gap must be a positive integer")

    @property
    def effective_gap(self) -> int:
        if self.family is Family.GLOBAL:
            return 1
        return self.n - 1 if self.gap is None else self.gap

    @property
    def first_index(self) -> int:
        """Power of z carrying the first nontrivial coefficient."""
        return self.params.p + self.effective_gap


def delta_from_turns(t: float) -> complex:
    return cmath.exp(2j * math.pi * t)


def _lacunary(params: ClassParams, delta: complex, gap: int, order: int) -> TruncatedSeries:
    p = params.p
    if order <= p:
        raise ValueError(f"order must exceed p = {p}")
    terms = -(-(order - p) // gap)  # ceil
    if params.B == 0.0:
        inner = exp_series(params.A * (p - params.beta) * delta / gap, terms)
    else:
        inner = pow_binomial(params.B * delta, params.c / (gap * params.B), terms)
    return truncate(shift(substitute_power(inner, gap), p), order)


def expand_global(spec: ExtremalSpec, order: int) -> TruncatedSeries:
    """Global extremal function with powers z^p .. z^(order-1) known."""
    if spec.family is not Family.GLOBAL:
        raise ValueError("expand_global needs a Global spec")
    return _lacunary(spec.params, spec.delta, 1, order)


def expand_per_n(spec: ExtremalSpec, order: int) -> TruncatedSeries:
    if spec.family is not Family.PER_N:
        raise ValueError("expand_per_n needs a PerN spec")
    return _lacunary(spec.params, spec.delta, spec.effective_gap, order)


def expand(spec: ExtremalSpec, order: int) -> TruncatedSeries:
    if spec.family is Family.GLOBAL:
        return expand_global(spec, order)
    return expand_per_n(spec, order)


def witness_spec(spec: ExtremalSpec) -> ExtremalSpec:
    """The ExtremalSpec actually used to witness a per-n bound.

    When the printed gap misses z^n (p > 1) and no gap was chosen, switch to
    gap n - p.  The switch is reported by :func:`attainment_report`.
    """
    if spec.family is Family.PER_N and spec.gap is None and spec.first_index != spec.n:
        return replace(spec, gap=spec.n - spec.params.p)
    return spec


_WITNESSES = {
    Family.GLOBAL: (CaseLabel.FIRST_COEFFICIENT, CaseLabel.POSITIVE_TERMS),
    Family.PER_N: (CaseLabel.FIRST_COEFFICIENT, CaseLabel.NON_POSITIVE_TERMS),
}


def attainment_report(spec: ExtremalSpec, n: int, rtol: float = 1e-9) -> BoundReport:
    report = bound_report(spec.params, n)
    if report.case not in _WITNESSES[spec.family]:
        raise CaseMismatch(f"{spec.family} family does not witness {report.case} at n={n}")
    if spec.family is Family.PER_N and spec.n != n:
        raise CaseMismatch(f"per-n spec targets n={spec.n}, asked about n={n}")

    used = witness_spec(spec)
    mismatch = used is not spec
    modulus = abs(expand(used, n + 1).coeff(n))
    bound = report.theorem1_bound
    attained = math.isclose(modulus, bound, rel_tol=rtol, abs_tol=0.0)
    return replace(
        report,
        attained=attained,
        extremal_modulus=modulus,
        printed_index_mismatch=mismatch,
    )
