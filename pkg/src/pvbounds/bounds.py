"""Closed-form coefficient bounds for the class S_p(A, B, beta).

Three bounds are available for every (params, n):

* :func:`theorem1_bound` -- the corrected sharp bound (three cases); in the
  mixed-sign regime it falls back to the Clunie envelope and is not sharp.
* :func:`aouf_bound` -- the earlier product bound with absolute values, kept
  verbatim because it is the claim under test.
* :func:`clunie_envelope` -- the recurrence with negative summands dropped,
  valid in every regime.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .errors import PreconditionViolated
from .params import CaseLabel, ClassParams, classify_case, clunie_factor, summand_W

MAX_PRODUCT_LENGTH = 64


class Provenance:
    THEOREM1 = "theorem1"
    ENVELOPE = "envelope"


@dataclass(frozen=True)
class BoundReport:
    n: int
    case: CaseLabel
    theorem1_bound: float
    aouf_bound: float
    envelope_bound: float
    sharp: bool
    provenance: str = Provenance.THEOREM1
    attained: bool | None = None
    extremal_modulus: float | None = None
    printed_index_mismatch: bool = False

    @property
    def gap(self) -> float:
        """How far the earlier product bound falls below the valid bound."""
        return self.theorem1_bound - self.aouf_bound

    def as_dict(self) -> dict:
        d = asdict(self)
        d["case"] = str(self.case)
        d["gap"] = self.gap
        return d


def _check_n(params: ClassParams, n: int) -> None:
    if n < params.p + 1:
        raise ValueError(f"need n >= p + 1 = {params.p + 1}, got n={n}")
    if n - params.p > MAX_PRODUCT_LENGTH:
        raise ValueError(f"n - p = {n - params.p} exceeds the supported {MAX_PRODUCT_LENGTH}")


def positive_product(params: ClassParams, n: int) -> float:
    """prod_{j=1}^{n-p} t_j / j without absolute values."""
    num = 1.0
    den = 1.0
    for j in range(1, n - params.p + 1):
        num *= clunie_factor(params, j)
        den *= j
    return num / den


def theorem1_bound(params: ClassParams, n: int) -> float:
    _check_n(params, n)
    case = classify_case(params, n)
    if case is CaseLabel.FIRST_COEFFICIENT:
        return params.c
    if case is CaseLabel.NON_POSITIVE_TERMS:
        return params.c / (n - params.p)
    if case is CaseLabel.POSITIVE_TERMS:
        return positive_product(params, n)
    return clunie_envelope(params, n)


def printed_theorem1_bound(params: ClassParams, n: int) -> float:
    """The sharp bound read literally: the single-index test alone selects case 2.

    Differs from :func:`theorem1_bound` only on MixedTerms, where it returns
    c / (n - p).  That value is *not* a valid bound there; it is kept so the
    counterexample can be exhibited.
    """
    if classify_case(params, n) is CaseLabel.MIXED_TERMS:
        return params.c / (n - params.p)
    return theorem1_bound(params, n)


def aouf_bound(params: ClassParams, n: int) -> float:
    _check_n(params, n)
    P = params.p - params.beta
    num = 1.0
    den = 1.0
    for j in range(n - params.p):
        num *= abs((params.B - params.A) * P + params.B * j)
        den *= j + 1
    return num / den


def clunie_envelope(params: ClassParams, n: int) -> float:
    _check_n(params, n)
    c = params.c
    env = [c]  # env[i] bounds |a_{p+1+i}|
    for m in range(2, n - params.p + 1):
        s = c * c
        for k in range(2, m + 1):
            w = summand_W(params, k)
            if w > 0:
                s += w * env[k - 2] ** 2
        env.append(math.sqrt(s) / m)
    return env[n - params.p - 1]


def bound_report(params: ClassParams, n: int) -> BoundReport:
    case = classify_case(params, n)
    mixed = case is CaseLabel.MIXED_TERMS
    return BoundReport(
        n=n,
        case=case,
        theorem1_bound=theorem1_bound(params, n),
        aouf_bound=aouf_bound(params, n),
        envelope_bound=clunie_envelope(params, n),
        sharp=not mixed,
        provenance=Provenance.ENVELOPE if mixed else Provenance.THEOREM1,
    )


def induction_identity_residual(params: ClassParams, m: int) -> float:
    """LHS - RHS of the squared-product identity closing the case-3 induction.

    LHS = prod_{j<=m-p} t_j^2 / j^2; RHS = (c^2 + sum_{k=2}^{m-p} W_k prod_{j<k} t_j^2/j^2) / (m-p)^2.
    """
    if classify_case(params, m) is not CaseLabel.POSITIVE_TERMS:
        raise PreconditionViolated(
            f"identity is stated for A(p-beta) - B(m-beta-1) > m-p-1; fails at m={m}"
        )
    N = m - params.p
    sq = [1.0]  # sq[i] = prod_{j=1}^{i} t_j^2 / j^2
    for j in range(1, N + 1):
        sq.append(sq[-1] * (clunie_factor(params, j) / j) ** 2)
    rhs = params.c**2 + sum(summand_W(params, k) * sq[k - 1] for k in range(2, N + 1))
    return sq[N] - rhs / N**2
