"""Commutation-based incompatibility measures for quantum measurements."""

from . import bounds, fixtures, incompat, linalg, povm, robustness, serialize
from .errors import (
    DimensionMismatch,
    DomainError,
    NotHermitian,
    NotMaximalPair,
    NotRank1,
    NotRank1Projective,
    SizeCapExceeded,
    SolverDidNotConverge,
)
from .incompat import (
    IncompatibilityResult,
    MaximalityCertificate,
    certify_maximal,
    direct_sum,
    max_upsilon,
    tensor_product,
    trivial_extension,
    upsilon,
    upsilon_rank1,
)
from .povm import (
    KrausChannel,
    MeasurementClass,
    OverlapTable,
    Povm,
    Rank1Form,
    StochasticMap,
    ValidationReport,
    classify,
    mub_pair,
    overlap_table,
    post_process,
    pre_process,
    rank1_decompose,
    validate,
)
from .robustness import SdpSolution, dual_certificate_rank1_uniform, eta_g_solve

__version__ = "0.1.0"

__all__ = [
    "DimensionMismatch",
    "DomainError",
    "IncompatibilityResult",
    "KrausChannel",
    "MaximalityCertificate",
    "MeasurementClass",
    "NotHermitian",
    "NotMaximalPair",
    "NotRank1",
    "NotRank1Projective",
    "OverlapTable",
    "Povm",
    "Rank1Form",
    "SdpSolution",
    "SizeCapExceeded",
    "SolverDidNotConverge",
    "StochasticMap",
    "ValidationReport",
    "bounds",
    "certify_maximal",
    "classify",
    "direct_sum",
    "dual_certificate_rank1_uniform",
    "eta_g_solve",
    "fixtures",
    "incompat",
    "linalg",
    "max_upsilon",
    "mub_pair",
    "overlap_table",
    "post_process",
    "povm",
    "pre_process",
    "rank1_decompose",
    "robustness",
    "serialize",
    "tensor_product",
    "trivial_extension",
    "upsilon",
    "upsilon_rank1",
    "validate",
]
