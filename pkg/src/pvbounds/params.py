"""Class parameters (A, B, beta, p) and the per-coefficient case split.

Throughout, ``c = (A - B)(p - beta)`` and the k-th Clunie factor is

    t_k = A(p - beta) - B(p - beta + k - 1) = c - B(k - 1),

so the signed summand is ``W_k = t_k**2 - (k - 1)**2 = g(k) * h(k)`` with
``g(k) = c - (1 + B)(k - 1)`` (non-increasing) and
``h(k) = c + (1 - B)(k - 1)`` (positive).  The sign of W_k is the sign of g(k).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import InvalidParameters

B_ZERO_SNAP = 1e-14


class CaseLabel(str, enum.Enum):
    FIRST_COEFFICIENT = "FirstCoefficient"
    NON_POSITIVE_TERMS = "NonPositiveTerms"
    POSITIVE_TERMS = "PositiveTerms"
    # W_k changes sign on 2 <= k <= n - p: no closed-form sharp bound is known.
    MIXED_TERMS = "MixedTerms"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class ClassParams:
    A: float
    B: float
    beta: float
    p: int

    @property
    def c(self) -> float:
        return (self.A - self.B) * (self.p - self.beta)

    @property
    def M(self) -> float:
        """Numerator constant pB + (A - B)(p - beta) of the target Moebius map."""
        return self.p * self.B + self.c

    def as_dict(self) -> dict:
        return {"A": self.A, "B": self.B, "beta": self.beta, "p": self.p}


def new_params(A: float, B: float, beta: float, p: int) -> ClassParams:
    A, B, beta = float(A), float(B), float(beta)
    if isinstance(p, float) and p.is_integer():
        p = int(p)
    if not isinstance(p, int) or isinstance(p, bool) or p < 1:
        raise InvalidParameters(f"p must be a positive integer, got {p!r}")
    if not all(math.isfinite(v) for v in (A, B, beta)):
        raise InvalidParameters("A, B and beta must be finite")
    if abs(B) < B_ZERO_SNAP:
        B = 0.0
    if not B >= -1:
        raise InvalidParameters(f"need B >= -1, got B={B}")
    if not A <= 1:
        raise InvalidParameters(f"need A <= 1, got A={A}")
    if not B < A:
        raise InvalidParameters(f"need B < A, got A={A}, B={B}")
    if not 0 <= beta < 1:
        raise InvalidParameters(f"need 0 <= beta < 1, got beta={beta}")
    return ClassParams(A, B, beta, p)


def clunie_factor(params: ClassParams, k: int) -> float:
    """t_k = A(p - beta) - B(p - beta + k - 1)."""
    P = params.p - params.beta
    return params.A * P - params.B * (P + k - 1)


def sign_gap(params: ClassParams, k: int) -> float:
    """g(k) = t_k - (k - 1); W_k has the sign of this quantity."""
    return clunie_factor(params, k) - (k - 1)


def summand_W(params: ClassParams, k: int) -> float:
    if k < 2:
        raise ValueError(f"W is defined for k >= 2, got k={k}")
    P = params.p - params.beta
    return (params.A * P - params.B * (k + params.p - params.beta - 1)) ** 2 - (k - 1) ** 2


def per_n_case2_holds(params: ClassParams, n: int) -> bool:
    """A(p-beta) - B(n-beta-1) <= n-p-1, the single-index form of the case-2 test."""
    P = params.p - params.beta
    return params.A * P - params.B * (n - params.beta - 1) <= n - params.p - 1


def one_shot_case2_holds(params: ClassParams) -> bool:
    """A(p-beta) - B(p-beta+1) <= 1, i.e. W_k <= 0 for every k >= 2."""
    P = params.p - params.beta
    return params.A * P - params.B * (P + 1) <= 1


def classify_case(params: ClassParams, n: int) -> CaseLabel:
    p = params.p
    if n < p + 1:
        raise ValueError(f"need n >= p + 1 = {p + 1}, got n={n}")
    if n == p + 1:
        return CaseLabel.FIRST_COEFFICIENT
    if not per_n_case2_holds(params, n):
        return CaseLabel.POSITIVE_TERMS
    if one_shot_case2_holds(params):
        return CaseLabel.NON_POSITIVE_TERMS
    return CaseLabel.MIXED_TERMS
