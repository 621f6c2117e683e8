"""Dense complex linear algebra primitives.

Hermitian eigendecompositions, Schatten p-norms, spectral positive and
negative parts, commutators, and closed-form spectra for rank-1 operators.
All functions are pure and operate on plain ``numpy`` arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, DomainError, NotHermitian

# Absolute tolerances used throughout (double precision, dimensions <= ~64).
HERMITICITY_TOL = 1e-9
EIG_ZERO_TOL = 1e-10
RECONSTRUCTION_TOL_PER_DIM = 1e-9


def as_complex_matrix(a) -> np.ndarray:
    """Coerce input to a 2-D complex128 array with finite entries."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise DomainError(f"expected a 2-D matrix, got ndim={m.ndim}")
    if m.shape[0] < 1 or m.shape[1] < 1:
        raise DomainError(f"matrix dimensions must be >= 1, got {m.shape}")
    if not np.all(np.isfinite(m.view(np.float64))):
        raise DomainError("matrix entries must be finite (no NaN/Inf)")
    return m


def hermiticity_defect(a: np.ndarray) -> float:
    """Largest singular value of A - A^dagger."""
    a = as_complex_matrix(a)
    if a.shape[0] != a.shape[1]:
        return math.inf
    return schatten_norm(a - a.conj().T, math.inf)


def is_hermitian(a: np.ndarray, tol: float = HERMITICITY_TOL) -> bool:
    return hermiticity_defect(a) <= tol


def require_hermitian(a: np.ndarray, tol: float = HERMITICITY_TOL) -> np.ndarray:
    a = as_complex_matrix(a)
    defect = hermiticity_defect(a)
    if defect > tol:
        raise NotHermitian(f"Hermiticity defect {defect:.3e} exceeds tolerance {tol:.3e}")
    return a


def validate_exponent(p: float) -> float:
    p = float(p)
    if math.isnan(p) or p < 1.0:
        raise DomainError(f"Schatten exponent must satisfy p >= 1, got {p}")
    return p


def two_pow_inv(p: float) -> float:
    """2**(1/p), with the exact convention 2**(1/inf) = 1."""
    p = validate_exponent(p)
    if math.isinf(p):
        return 1.0
    return 2.0 ** (1.0 / p)


def dual_exponent(p: float) -> float:
    """The exponent q with 1/p + 1/q = 1 (inf and 1 are mutually dual)."""
    p = validate_exponent(p)
    if math.isinf(p):
        return 1.0
    if p == 1.0:
        return math.inf
    return p / (p - 1.0)


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigendecomposition of a Hermitian operator.

    ``eigenvalues`` are sorted in descending order and ``eigenvectors``
    holds the matching orthonormal eigenvectors as columns.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvectors.shape[0]

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    def projectors(self, cluster_tol: float = EIG_ZERO_TOL) -> list[tuple[float, np.ndarray]]:
        """Eigenprojectors grouped by eigenvalue clusters.

        Consecutive eigenvalues closer than ``cluster_tol`` share a
        projector; the reported eigenvalue is the cluster mean.
        """
        groups: list[tuple[float, np.ndarray]] = []
        start = 0
        n = len(self.eigenvalues)
        for j in range(1, n + 1):
            if j == n or abs(self.eigenvalues[j] - self.eigenvalues[j - 1]) > cluster_tol:
                vals = self.eigenvalues[start:j]
                vecs = self.eigenvectors[:, start:j]
                groups.append((float(np.mean(vals)), vecs @ vecs.conj().T))
                start = j
        return groups


def eig_hermitian(a: np.ndarray, tol: float = HERMITICITY_TOL) -> SpectralDecomposition:
    """Spectral decomposition of a Hermitian matrix, eigenvalues descending."""
    a = require_hermitian(a, tol)
    w, v = np.linalg.eigh(a)
    order = np.argsort(w)[::-1]
    return SpectralDecomposition(eigenvalues=w[order], eigenvectors=v[:, order])


def singular_values(a: np.ndarray) -> np.ndarray:
    return np.linalg.svd(as_complex_matrix(a), compute_uv=False)


def schatten_norm(a: np.ndarray, p: float) -> float:
    """Schatten p-norm: the vector p-norm of the singular values."""
    p = validate_exponent(p)
    sv = np.linalg.svd(as_complex_matrix(a), compute_uv=False)
    if math.isinf(p):
        return float(sv[0]) if sv.size else 0.0
    if p == 1.0:
        return float(np.sum(sv))
    if p == 2.0:
        return float(np.sqrt(np.sum(sv * sv)))
    return float(np.sum(sv**p) ** (1.0 / p))


def _split_parts(a: np.ndarray, zero_tol: float):
    dec = eig_hermitian(a)
    w, v = dec.eigenvalues, dec.eigenvectors
    pos = np.where(w > zero_tol, w, 0.0)
    neg = np.where(w < -zero_tol, w, 0.0)
    return pos, neg, v


def positive_part(a: np.ndarray, zero_tol: float = EIG_ZERO_TOL) -> np.ndarray:
    """PSD part of a Hermitian operator; eigenvalues within zero_tol of 0 are dropped."""
    pos, _, v = _split_parts(a, zero_tol)
    return (v * pos) @ v.conj().T


def negative_part(a: np.ndarray, zero_tol: float = EIG_ZERO_TOL) -> np.ndarray:
    """Negative-semidefinite part; positive_part + negative_part reconstructs A."""
    _, neg, v = _split_parts(a, zero_tol)
    return (v * neg) @ v.conj().T


def absolute_value(a: np.ndarray, zero_tol: float = EIG_ZERO_TOL) -> np.ndarray:
    pos, neg, v = _split_parts(a, zero_tol)
    return (v * (pos - neg)) @ v.conj().T


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """AB - BA; anti-Hermitian whenever A and B are Hermitian."""
    a = as_complex_matrix(a)
    b = as_complex_matrix(b)
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"commutator needs equal square shapes, got {a.shape} and {b.shape}")
    return a @ b - b @ a


def _validate_overlap(c: float) -> float:
    c = float(c)
    if not (-1e-12 <= c <= 1.0 + 1e-12):
        raise DomainError(f"overlap must lie in [0, 1], got {c}")
    return min(max(c, 0.0), 1.0)


def rank1_commutator_spectrum(alpha: float, beta: float, c: float) -> np.ndarray:
    """Nonzero eigenvalues {+i*lam, -i*lam} of [A, B] for A = alpha|e><e|, B = beta|f><f|.

    ``c`` is the overlap |<e|f>|, and lam = alpha*beta*c*sqrt(1-c^2).
    """
    if alpha < 0 or beta < 0:
        raise DomainError("rank-1 weights must be nonnegative")
    c = _validate_overlap(c)
    lam = alpha * beta * c * math.sqrt(max(0.0, 1.0 - c * c))
    return np.array([1j * lam, -1j * lam])


def rank1_sum_spectrum(alpha: float, beta: float, c: float) -> tuple[float, float]:
    """Nonzero eigenvalues (eta_plus, eta_minus) of A + B for the rank-1 pair above."""
    if alpha < 0 or beta < 0:
        raise DomainError("rank-1 weights must be nonnegative")
    c = _validate_overlap(c)
    disc = math.sqrt((alpha - beta) ** 2 + 4.0 * alpha * beta * c * c)
    return (0.5 * (alpha + beta + disc), 0.5 * (alpha + beta - disc))


def h_p(c: float, p: float) -> float:
    """The overlap factor 2**(1/p) * c * sqrt(1 - c^2) of a rank-1 commutator norm."""
    c = _validate_overlap(c)
    return two_pow_inv(p) * c * math.sqrt(max(0.0, 1.0 - c * c))


def h_p_derivative(c: float, p: float) -> float:
    """d/dc of h_p; unbounded as c -> 1."""
    c = _validate_overlap(c)
    if c >= 1.0:
        raise DomainError("derivative of the overlap factor diverges at c = 1")
    return two_pow_inv(p) * (1.0 - 2.0 * c * c) / math.sqrt(1.0 - c * c)


def dual_optimizer(a: np.ndarray, p: float) -> np.ndarray:
    """Hermitian X with <X, A> = ||A||_p and ||X||_q = 1 for the dual exponent q.

    Built from the spectral data of A; realizes the variational form of the
    Schatten norm. For A = 0 any feasible X works and a basis projector is
    returned.
    """
    p = validate_exponent(p)
    dec = eig_hermitian(a)
    w, v = dec.eigenvalues, dec.eigenvectors
    absw = np.abs(w)
    norm_p = schatten_norm(a, p)
    if norm_p <= 0.0:
        x = np.zeros_like(a)
        x[0, 0] = 1.0
        return x
    sign = np.where(absw > EIG_ZERO_TOL, np.sign(w), 0.0)
    if math.isinf(p):
        j = int(np.argmax(absw))
        vec = v[:, j : j + 1]
        return sign[j] * (vec @ vec.conj().T)
    if p == 1.0:
        t = sign
    else:
        t = sign * (absw / norm_p) ** (p - 1.0)
    return (v * t) @ v.conj().T


def hilbert_schmidt_inner(x: np.ndarray, y: np.ndarray) -> complex:
    """<X, Y> = tr(X^dagger Y)."""
    return complex(np.trace(x.conj().T @ y))


def canonical_phase(vec: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Rescale a vector so its first component above tol is real positive."""
    v = np.asarray(vec, dtype=np.complex128)
    idx = np.flatnonzero(np.abs(v) > tol)
    if idx.size == 0:
        return v
    lead = v[idx[0]]
    return v * (abs(lead) / lead)
