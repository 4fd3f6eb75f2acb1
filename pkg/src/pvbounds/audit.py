"""Reproduction of the W table and the end-to-end falsification of the product bound."""
from __future__ import annotations

from dataclasses import dataclass

from .bounds import aouf_bound, theorem1_bound
from .errors import NotAFalsificationRegime
from .extremal import ExtremalSpec, Family, expand_per_n, witness_spec
from .params import CaseLabel, ClassParams, classify_case, new_params, summand_W
from .verify import MembershipReport, SampleGrid, DEFAULT_GRID, certify_membership

# (k, p, A, B, beta, printed W)
TABLE1 = (
    (2, 1, 0.8, 0.5, 0.0, -0.96),
    (2, 1, -0.5, -0.8, 0.0, 0.21),
    (3, 2, 0.5, 0.4, 0.5, -3.5775),
    (3, 2, -0.1, -0.7, 0.5, 1.29),
)


@dataclass(frozen=True)
class AuditRow:
    k: int
    p: int
    A: float
    B: float
    beta: float
    W: float


def reproduce_table1() -> list[AuditRow]:
    rows = []
    for k, p, A, B, beta, _ in TABLE1:
        W = summand_W(new_params(A, B, beta, p), k)
        rows.append(AuditRow(k, p, A, B, beta, W))
    return rows


@dataclass(frozen=True)
class FalsificationReport:
    params: ClassParams
    n: int
    case: CaseLabel
    aouf_bound: float
    theorem1_bound: float
    witness_modulus: float
    witness_gap: int
    membership: MembershipReport
    rtol: float = 1e-9

    @property
    def violated(self) -> bool:
        return self.membership.verdict and self.witness_modulus > self.aouf_bound * (1 + self.rtol)

    def as_dict(self) -> dict:
        return {
            "params": self.params.as_dict(),
            "n": self.n,
            "case": str(self.case),
            "aouf": self.aouf_bound,
            "theorem1": self.theorem1_bound,
            "witness_modulus": self.witness_modulus,
            "witness_gap": self.witness_gap,
            "membership": self.membership.as_dict(),
            "violated": self.violated,
        }


def aouf_falsification_report(
    params: ClassParams,
    n: int,
    grid: SampleGrid = DEFAULT_GRID,
    rtol: float = 1e-9,
) -> FalsificationReport:
    """Per-n extremal member at index n, its membership check, and the verdict."""
    case = classify_case(params, n)
    if case in (CaseLabel.POSITIVE_TERMS, CaseLabel.FIRST_COEFFICIENT):
        raise NotAFalsificationRegime(
            f"{case} at n={n}: the product bound coincides with the valid bound there"
        )
    spec = witness_spec(ExtremalSpec(params, Family.PER_N, n=n))
    modulus = abs(expand_per_n(spec, n + 1).coeff(n))
    membership = certify_membership(lambda order: expand_per_n(spec, order), params, grid)
    return FalsificationReport(
        params=params,
        n=n,
        case=case,
        aouf_bound=aouf_bound(params, n),
        theorem1_bound=theorem1_bound(params, n),
        witness_modulus=modulus,
        witness_gap=spec.effective_gap,
        membership=membership,
        rtol=rtol,
    )
