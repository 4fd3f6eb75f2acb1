"""Truncated complex power series.

A :class:`TruncatedSeries` stores the coefficients of ``z**offset`` up to (but
not including) ``z**order``.  Powers at or above ``order`` are *unknown*, not
zero, and every operation propagates the smallest order its inputs justify.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.signal import lfilter

from .errors import DivisionByZeroLeadingCoefficient

__all__ = [
    "TruncatedSeries",
    "add",
    "mul",
    "differentiate",
    "z_derivative",
    "divide",
    "pow_binomial",
    "exp_series",
    "substitute_power",
    "shift",
    "truncate",
    "scale",
    "evaluate",
    "tail_estimate",
]


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    offset: int
    coeffs: np.ndarray
    order: int

    def __post_init__(self):
        if self.offset < 0:
            raise ValueError(f"offset must be nonnegative, got {self.offset}")
        c = np.array(self.coeffs, dtype=complex).ravel()
        if len(c) < 1 or len(c) != self.order - self.offset:
            raise ValueError(
                f"need len(coeffs) == order - offset >= 1, got len={len(c)}, "
                f"offset={self.offset}, order={self.order}"
            )
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def of(cls, coeffs: Sequence[complex], offset: int = 0, order: int | None = None):
        """Series from explicit coefficients; ``order`` pads with known zeros."""
        c = np.asarray(coeffs, dtype=complex)
        if order is None:
            order = offset + len(c)
        if order - offset < len(c):
            c = c[: order - offset]
        else:
            c = np.concatenate([c, np.zeros(order - offset - len(c), complex)])
        return cls(offset, c, order)

    def __len__(self) -> int:
        return len(self.coeffs)

    def coeff(self, power: int) -> complex:
        """Coefficient of ``z**power``; raises for powers that are not known."""
        if power >= self.order:
            raise IndexError(f"z^{power} is beyond the truncation order {self.order}")
        if power < self.offset:
            return 0j
        return complex(self.coeffs[power - self.offset])

    def dense(self, start: int = 0) -> np.ndarray:
        """Coefficients of z^start .. z^(order-1) as one array."""
        if start > self.offset:
            return self.coeffs[start - self.offset :].copy()
        return np.concatenate([np.zeros(self.offset - start, complex), self.coeffs])

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, scale(other, -1))

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return mul(self, other)
        return scale(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return divide(self, other)
        return scale(self, 1 / other)

    def __call__(self, z):
        return evaluate(self, z)

    def __repr__(self) -> str:
        shown = ", ".join(f"{c:.6g}" for c in self.coeffs[:6])
        more = ", ..." if len(self.coeffs) > 6 else ""
        return f"TruncatedSeries(offset={self.offset}, order={self.order}, coeffs=[{shown}{more}])"


def add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    lo = min(a.offset, b.offset)
    hi = min(a.order, b.order)
    if hi <= lo:
        raise ValueError("operands share no known coefficient range")
    out = a.dense(lo)[: hi - lo] + b.dense(lo)[: hi - lo]
    return TruncatedSeries(lo, out, hi)


def mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    offset = a.offset + b.offset
    order = min(a.order + b.offset, b.order + a.offset)
    out = np.convolve(a.coeffs, b.coeffs)[: order - offset]
    return TruncatedSeries(offset, out, order)


def scale(a: TruncatedSeries, s: complex) -> TruncatedSeries:
    return TruncatedSeries(a.offset, a.coeffs * s, a.order)


def shift(a: TruncatedSeries, k: int) -> TruncatedSeries:
    """Multiply by z**k."""
    return TruncatedSeries(a.offset + k, a.coeffs, a.order + k)


def truncate(a: TruncatedSeries, order: int) -> TruncatedSeries:
    """Forget every power at or above ``order``."""
    if order > a.order:
        raise ValueError(f"cannot raise the truncation order from {a.order} to {order}")
    return TruncatedSeries(a.offset, a.coeffs[: order - a.offset], order)


def differentiate(a: TruncatedSeries) -> TruncatedSeries:
    powers = np.arange(a.offset, a.order)
    d = a.coeffs * powers
    if a.offset >= 1:
        return TruncatedSeries(a.offset - 1, d, a.order - 1)
    if a.order < 2:
        raise ValueError("derivative of a series known only at z^0 has no known terms")
    return TruncatedSeries(0, d[1:], a.order - 1)


def z_derivative(a: TruncatedSeries) -> TruncatedSeries:
    """z * a'(z), which keeps offset and order."""
    return TruncatedSeries(a.offset, a.coeffs * np.arange(a.offset, a.order), a.order)


def divide(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    if abs(b.coeffs[0]) == 0:
        raise DivisionByZeroLeadingCoefficient(
            "divisor has a zero leading coefficient; the input function is degenerate"
        )
    offset = a.offset - b.offset
    if offset < 0:
        raise ValueError("quotient would have negative powers of z")
    n = min(len(a), len(b))
    impulse = np.zeros(n, complex)
    impulse[0] = 1.0
    # lfilter runs the triangular recurrence b0*c_m = a_m - sum_{j>=1} b_j c_{m-j}
    out = lfilter(a.coeffs[:n], b.coeffs[:n], impulse)
    return TruncatedSeries(offset, out, offset + n)


def pow_binomial(B_times_delta: complex, lam: complex, order: int) -> TruncatedSeries:
    """(1 + x z)**lam on the branch equal to 1 at z = 0, with ``order`` known terms.

    Uses c_m = c_{m-1} (lam - m + 1) x / m, so integer exponents terminate.
    """
    m = np.arange(1, order)
    steps = (lam - m + 1) * complex(B_times_delta) / m
    return TruncatedSeries(0, np.concatenate([[1.0], np.cumprod(steps)]), order)


def exp_series(a: complex, order: int) -> TruncatedSeries:
    m = np.arange(1, order)
    return TruncatedSeries(0, np.concatenate([[1.0], np.cumprod(complex(a) / m)]), order)


def substitute_power(a: TruncatedSeries, m: int) -> TruncatedSeries:
    """a(z**m)."""
    if m < 1:
        raise ValueError("substitution power must be positive")
    out = np.zeros(m * (a.order - a.offset), complex)
    out[::m] = a.coeffs
    return TruncatedSeries(m * a.offset, out, m * a.order)


def evaluate(a: TruncatedSeries, z):
    """Sum of the known terms at z (scalar or array)."""
    z = np.asarray(z, dtype=complex)
    return np.polyval(a.coeffs[::-1], z) * z**a.offset


def tail_estimate(a: TruncatedSeries, r: float) -> float:
    """Heuristic size of the omitted tail at radius r.

    Takes the largest coefficient in the last quarter of the known range as
    the scale of every omitted one and sums the geometric remainder
    r**order / (1 - r).  A quarter, not a fixed window, so lacunary series
    cannot hide behind a run of zeros.
    """
    if r >= 1:
        return math.inf
    w = max(1, len(a) // 4)
    scale_ = float(np.max(np.abs(a.coeffs[-w:])))
    return scale_ * r**a.order / (1 - r)
