"""Robustness-based incompatibility: the generalized-noise semidefinite program."""

from .eta import (
    DualCertificate,
    DualReport,
    PrimalReport,
    SdpSolution,
    check_dual_feasible,
    check_primal_feasible,
    dual_certificate_rank1_uniform,
    eta_g_solve,
    sdp_problem_dict,
    universal_lower_bound,
)

__all__ = [
    "DualCertificate",
    "DualReport",
    "PrimalReport",
    "SdpSolution",
    "check_dual_feasible",
    "check_primal_feasible",
    "dual_certificate_rank1_uniform",
    "eta_g_solve",
    "sdp_problem_dict",
    "universal_lower_bound",
]
