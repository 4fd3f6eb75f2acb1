"""Sharp coefficient bounds for the p-valent starlike class S_p(A, B, beta)."""
from .bounds import (
    BoundReport,
    aouf_bound,
    bound_report,
    clunie_envelope,
    induction_identity_residual,
    theorem1_bound,
)
from .params import CaseLabel, ClassParams, classify_case, new_params, summand_W

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "CaseLabel",
    "ClassParams",
    "aouf_bound",
    "bound_report",
    "classify_case",
    "clunie_envelope",
    "induction_identity_residual",
    "new_params",
    "summand_W",
    "theorem1_bound",
]
