"""Commutation-based incompatibility of measurement pairs.

The measure of a pair (E, F) on the same space is the sum over all
operator pairs of the Schatten p-norm of their commutator. It vanishes
exactly on commuting pairs, is unitarily invariant, never increases
under classical post-processing, and in a fixed dimension d is maximized
precisely by rank-1 pairs with all eigenvector overlaps 1/sqrt(d).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg, povm as povm_mod
from .errors import DimensionMismatch, DomainError
from .povm import Povm, Rank1Form, overlap_table

CERT_TOL_DEFAULT = 1e-7

METHOD_DENSE = "dense"
METHOD_RANK1 = "rank1-fast-path"


@dataclass(frozen=True)
class IncompatibilityResult:
    """Value of the measure together with the per-pair norm terms."""

    value: float
    p: float
    per_pair_terms: np.ndarray  # shape (n_E, n_F)
    method: str


def upsilon(e: Povm, f: Povm, p: float) -> IncompatibilityResult:
    """Incompatibility of a measurement pair: sum of commutator p-norms.

    Parameters
    ----------
    e, f : Povm
        Measurements acting on the same dimension.
    p : float
        Schatten exponent in [1, inf]; use ``math.inf`` for the sup norm.

    Returns
    -------
    IncompatibilityResult
        Nonnegative value, zero exactly when every pair of operators
        commutes (within floating point), with the n_E x n_F matrix of
        individual commutator norms.
    """
    if e.dim != f.dim:
        raise DimensionMismatch("measurements must act on the same dimension")
    linalg.validate_exponent(p)
    terms = np.empty((e.n_outcomes, f.n_outcomes))
    for a, ea in enumerate(e.operators):
        for b, fb in enumerate(f.operators):
            terms[a, b] = linalg.schatten_norm(linalg.commutator(ea, fb), p)
    return IncompatibilityResult(value=float(terms.sum()), p=float(p), per_pair_terms=terms, method=METHOD_DENSE)


def upsilon_rank1(e: Povm, f: Povm, p: float) -> IncompatibilityResult:
    """Fast path for rank-1 pairs via the closed-form commutator norms.

    Each term equals weight_a * weight_b * h_p(c_ab) where c_ab is the
    eigenvector overlap; agrees with the dense path to ~1e-9.
    """
    if e.dim != f.dim:
        raise DimensionMismatch("measurements must act on the same dimension")
    table = overlap_table(e, f)
    hp = linalg.two_pow_inv(p) * table.c * np.sqrt(np.clip(1.0 - table.c**2, 0.0, None))
    terms = np.outer(table.weights_e, table.weights_f) * hp
    return IncompatibilityResult(value=float(terms.sum()), p=float(p), per_pair_terms=terms, method=METHOD_RANK1)


def max_upsilon(d: int, p: float) -> float:
    """Largest incompatibility achievable in dimension d: 2**(1/p) * d * sqrt(d-1)."""
    if d < 2:
        raise DomainError("the maximal value is defined for dimension >= 2")
    return linalg.two_pow_inv(p) * d * math.sqrt(d - 1.0)


@dataclass(frozen=True)
class MaximalityCertificate:
    """Exact-structure certificate for maximally incompatible pairs.

    ``is_maximal`` requires every operator of both measurements to be
    rank-1 and every eigenvector overlap to equal 1/sqrt(d) within
    ``cert_tol``. ``upsilon_gap`` records |measured value - maximal value|
    as a consistency check when the certificate holds.
    """

    is_maximal: bool
    max_value: float
    rank1_ok: bool
    overlap_deviation: float
    cert_tol: float
    upsilon_value: float | None = None
    upsilon_gap: float | None = None


def certify_maximal(e: Povm, f: Povm, p: float, cert_tol: float = CERT_TOL_DEFAULT) -> MaximalityCertificate:
    """Certify that a pair attains the dimension-d maximal incompatibility.

    Near-rank-1 inputs are reported non-maximal rather than fuzzily
    accepted; the characterization is exact.
    """
    if e.dim != f.dim:
        raise DimensionMismatch("measurements must act on the same dimension")
    d = e.dim
    target = max_upsilon(d, p)
    rank1_ok = all(povm_mod.operator_rank(op) == 1 for op in e.operators) and all(
        povm_mod.operator_rank(op) == 1 for op in f.operators
    )
    if not rank1_ok:
        return MaximalityCertificate(
            is_maximal=False,
            max_value=target,
            rank1_ok=False,
            overlap_deviation=math.inf,
            cert_tol=cert_tol,
        )
    table = overlap_table(e, f)
    deviation = float(np.max(np.abs(table.c - 1.0 / math.sqrt(d))))
    is_maximal = deviation <= cert_tol
    value = upsilon_rank1(e, f, p).value
    return MaximalityCertificate(
        is_maximal=is_maximal,
        max_value=target,
        rank1_ok=True,
        overlap_deviation=deviation,
        cert_tol=cert_tol,
        upsilon_value=value,
        upsilon_gap=abs(value - target),
    )


def trivial_extension(e: Povm, f: Povm, d2: int, p: float) -> IncompatibilityResult:
    """Evaluate the pair extended by a d2-dimensional ancilla identity.

    The value scales by the factor d2**(1/p) relative to the original pair
    (with d2**(1/inf) = 1); the dense evaluation here is compared against
    that closed form in the test suite.
    """
    e2 = povm_mod.trivial_extend(e, d2)
    f2 = povm_mod.trivial_extend(f, d2)
    return upsilon(e2, f2, p)


def direct_sum(e1: Povm, f1: Povm, e2: Povm, f2: Povm, p: float) -> IncompatibilityResult:
    """Evaluate the block-diagonal composition of two pairs; additive in the values."""
    return upsilon(povm_mod.direct_sum_povm(e1, e2), povm_mod.direct_sum_povm(f1, f2), p)


def tensor_product(e1: Povm, f1: Povm, e2: Povm, f2: Povm, p: float) -> IncompatibilityResult:
    """Evaluate the tensor-product composition of two pairs (dense)."""
    return upsilon(povm_mod.tensor_povm(e1, e2), povm_mod.tensor_povm(f1, f2), p)


def tensor_product_rank1_formula(e1: Povm, f1: Povm, e2: Povm, f2: Povm, p: float) -> float:
    """Closed form for the tensor composition of two rank-1 projective pairs.

    2**(1/p) * sum over all index pairs of c*cbar*sqrt(1 - (c*cbar)^2),
    where c and cbar are the overlap tables of the two factors.
    """
    c1 = overlap_table(e1, f1).c
    c2 = overlap_table(e2, f2).c
    prod = np.multiply.outer(c1, c2)
    return float(linalg.two_pow_inv(p) * np.sum(prod * np.sqrt(np.clip(1.0 - prod**2, 0.0, None))))


def search_preprocessing_increase(
    n_samples: int, seed, p: float = 1.0
) -> tuple[float, dict | None]:
    """Search for qubit pairs whose incompatibility grows under unital pre-processing.

    Samples random rank-1 qubit pairs and random unital qubit channels and
    returns the largest ratio value_after / value_before found, with the
    witnessing sample description. No example is known; a ratio above 1
    would be a genuine discovery, so callers must not treat ratios <= 1 as
    a proof of impossibility.
    """
    rng = np.random.default_rng(seed)
    best_ratio = 0.0
    witness = None
    for k in range(n_samples):
        e = povm_mod.random_rank1_povm(2, 2, rng)
        f = povm_mod.random_rank1_povm(2, 2, rng)
        before = upsilon(e, f, p).value
        if before <= 1e-9:
            continue
        channel = povm_mod.random_unital_qubit_channel(rng)
        after = upsilon(povm_mod.pre_process(e, channel), povm_mod.pre_process(f, channel), p).value
        ratio = after / before
        if ratio > best_ratio:
            best_ratio = ratio
            witness = {"sample_index": k, "before": before, "after": after}
    return best_ratio, witness
