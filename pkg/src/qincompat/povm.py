"""Measurement (POVM) data model, validation, constructors and transformations.

A measurement with n outcomes on a d-dimensional space is a list of n
positive semi-definite operators that sum to the identity. This module
provides validation and classification, mutually unbiased and random
constructors, classical post-processing, quantum pre-processing through
Kraus channels, rank-1 decompositions and overlap tables, and the three
composition operations (trivial extension, direct sum, tensor product).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import DimensionMismatch, DomainError, NotRank1
from .linalg import EIG_ZERO_TOL, canonical_phase

PSD_TOL = 1e-9
COMPLETENESS_TOL_PER_DIM = 1e-8
ZERO_OPERATOR_TOL = 1e-12
STOCHASTIC_TOL = 1e-12
KRAUS_TOL = 1e-9
PROJECTIVE_TOL = 1e-9


@dataclass(frozen=True)
class Povm:
    """An ordered list of measurement operators acting on C^dim."""

    dim: int
    operators: tuple[np.ndarray, ...]

    @classmethod
    def from_operators(cls, operators) -> "Povm":
        ops = tuple(linalg.as_complex_matrix(op) for op in operators)
        if not ops:
            raise DomainError("a measurement needs at least one outcome")
        d = ops[0].shape[0]
        for op in ops:
            if op.shape != (d, d):
                raise DimensionMismatch("all measurement operators must share one square shape")
        return cls(dim=d, operators=ops)

    @property
    def n_outcomes(self) -> int:
        return len(self.operators)

    def completeness_defect(self) -> float:
        total = sum(self.operators)
        return linalg.schatten_norm(total - np.eye(self.dim), np.inf)


@dataclass(frozen=True)
class ValidationReport:
    """Per-operator residuals of the POVM constraints; ok iff all pass."""

    dim: int
    n_outcomes: int
    min_eigenvalues: tuple[float, ...]
    hermiticity_defects: tuple[float, ...]
    completeness_residual: float
    zero_operator_indices: tuple[int, ...]
    ok: bool


def validate(povm: Povm, psd_tol: float = PSD_TOL) -> ValidationReport:
    """Check positivity, completeness and the no-zero-operator convention.

    Report-style: violations are listed, nothing is raised.
    """
    min_eigs = []
    herm_defects = []
    zero_idx = []
    for i, op in enumerate(povm.operators):
        defect = linalg.hermiticity_defect(op)
        herm_defects.append(defect)
        herm = (op + op.conj().T) / 2.0
        w = np.linalg.eigvalsh(herm)
        min_eigs.append(float(w[0]))
        if linalg.schatten_norm(op, np.inf) <= ZERO_OPERATOR_TOL:
            zero_idx.append(i)
    completeness = povm.completeness_defect()
    ok = (
        all(m >= -psd_tol for m in min_eigs)
        and all(h <= linalg.HERMITICITY_TOL for h in herm_defects)
        and completeness <= COMPLETENESS_TOL_PER_DIM * povm.dim
        and not zero_idx
    )
    return ValidationReport(
        dim=povm.dim,
        n_outcomes=povm.n_outcomes,
        min_eigenvalues=tuple(min_eigs),
        hermiticity_defects=tuple(herm_defects),
        completeness_residual=completeness,
        zero_operator_indices=tuple(zero_idx),
        ok=ok,
    )


@dataclass(frozen=True)
class MeasurementClass:
    is_projective: bool
    is_rank1: bool

    @property
    def is_basis(self) -> bool:
        return self.is_projective and self.is_rank1


def operator_rank(op: np.ndarray, zero_tol: float = EIG_ZERO_TOL) -> int:
    w = np.linalg.eigvalsh((op + op.conj().T) / 2.0)
    return int(np.sum(np.abs(w) > zero_tol))


def classify(povm: Povm) -> MeasurementClass:
    """Flag a measurement as projective (E^2 = E) and/or rank-1."""
    projective = all(
        linalg.schatten_norm(op @ op - op, np.inf) <= PROJECTIVE_TOL for op in povm.operators
    )
    rank1 = all(operator_rank(op) == 1 for op in povm.operators)
    return MeasurementClass(is_projective=projective, is_rank1=rank1)


@dataclass(frozen=True)
class StochasticMap:
    """Column-stochastic matrix P[a_out, a_in] describing classical post-processing."""

    matrix: np.ndarray

    @classmethod
    def from_matrix(cls, matrix) -> "StochasticMap":
        m = np.asarray(matrix, dtype=np.float64)
        if m.ndim != 2:
            raise DomainError("a stochastic map is a 2-D matrix")
        if np.any(m < -STOCHASTIC_TOL):
            raise DomainError("stochastic map entries must be nonnegative")
        col_sums = m.sum(axis=0)
        if np.any(np.abs(col_sums - 1.0) > STOCHASTIC_TOL):
            raise DomainError("each column of a stochastic map must sum to 1")
        return cls(matrix=m)

    @property
    def n_out(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_in(self) -> int:
        return self.matrix.shape[1]


@dataclass(frozen=True)
class KrausChannel:
    """Channel in Kraus form; operators map C^dim_in -> C^dim_out.

    The Heisenberg dual acts on measurement operators on C^dim_out and
    produces operators on C^dim_in. Trace preservation requires
    sum_j K_j^dagger K_j = identity on C^dim_in, which is simultaneously
    unitality of the dual map.
    """

    kraus_ops: tuple[np.ndarray, ...]

    @classmethod
    def from_operators(cls, kraus_ops) -> "KrausChannel":
        ops = tuple(linalg.as_complex_matrix(k) for k in kraus_ops)
        if not ops:
            raise DomainError("a channel needs at least one Kraus operator")
        shape = ops[0].shape
        for k in ops:
            if k.shape != shape:
                raise DimensionMismatch("all Kraus operators must share one shape")
        chan = cls(kraus_ops=ops)
        defect = chan.trace_preservation_defect()
        if defect > KRAUS_TOL:
            raise DomainError(f"Kraus operators violate sum K^dag K = 1 by {defect:.3e}")
        return chan

    @property
    def dim_out(self) -> int:
        return self.kraus_ops[0].shape[0]

    @property
    def dim_in(self) -> int:
        return self.kraus_ops[0].shape[1]

    def trace_preservation_defect(self) -> float:
        total = sum(k.conj().T @ k for k in self.kraus_ops)
        return linalg.schatten_norm(total - np.eye(self.dim_in), np.inf)

    def unitality_defect(self) -> float:
        """Defect of sum K K^dag = 1 on the output space (unital channels only)."""
        total = sum(k @ k.conj().T for k in self.kraus_ops)
        return linalg.schatten_norm(total - np.eye(self.dim_out), np.inf)

    def heisenberg(self, op: np.ndarray) -> np.ndarray:
        """Dual action sum_j K_j^dagger A K_j on an operator of the output space."""
        op = linalg.as_complex_matrix(op)
        if op.shape != (self.dim_out, self.dim_out):
            raise DimensionMismatch("operator dimension does not match the channel output")
        return sum(k.conj().T @ op @ k for k in self.kraus_ops)


@dataclass(frozen=True)
class Rank1Form:
    """Weights and unit vectors with E_a = weight_a |e_a><e_a|."""

    weights: np.ndarray
    vectors: np.ndarray  # unit vectors as columns, canonical phase

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    @property
    def n_outcomes(self) -> int:
        return self.vectors.shape[1]

    @classmethod
    def from_povm(cls, povm: Povm, zero_tol: float = EIG_ZERO_TOL) -> "Rank1Form":
        weights = np.empty(povm.n_outcomes)
        vectors = np.empty((povm.dim, povm.n_outcomes), dtype=np.complex128)
        for a, op in enumerate(povm.operators):
            rank = operator_rank(op, zero_tol)
            if rank != 1:
                raise NotRank1(f"operator {a} has numerical rank {rank}, expected 1")
            dec = linalg.eig_hermitian(op)
            weights[a] = dec.eigenvalues[0]
            vectors[:, a] = canonical_phase(dec.eigenvectors[:, 0])
        return cls(weights=weights, vectors=vectors)

    def to_povm(self) -> Povm:
        ops = []
        for a in range(self.n_outcomes):
            v = self.vectors[:, a : a + 1]
            ops.append(self.weights[a] * (v @ v.conj().T))
        return Povm.from_operators(ops)


@dataclass(frozen=True)
class OverlapTable:
    """Moduli of inner products between the rank-1 eigenvectors of two measurements."""

    c: np.ndarray  # c[a, b] = |<e_a|f_b>|
    weights_e: np.ndarray
    weights_f: np.ndarray
    t: np.ndarray = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "t", self.c**2)


def overlap_table(e: Povm, f: Povm) -> OverlapTable:
    """Overlap table c[a, b] between two rank-1 measurements of equal dimension."""
    if e.dim != f.dim:
        raise DimensionMismatch("overlap table requires equal dimensions")
    fe = Rank1Form.from_povm(e)
    ff = Rank1Form.from_povm(f)
    c = np.abs(fe.vectors.conj().T @ ff.vectors)
    np.clip(c, 0.0, 1.0, out=c)
    return OverlapTable(c=c, weights_e=fe.weights, weights_f=ff.weights)


def post_process(povm: Povm, pmap: StochasticMap) -> Povm:
    """Classically relabel outcomes: out_a' = sum_a P[a', a] E_a.

    Changes the number of outcomes but preserves the dimension.
    """
    if pmap.n_in != povm.n_outcomes:
        raise DimensionMismatch(
            f"map has {pmap.n_in} input outcomes, measurement has {povm.n_outcomes}"
        )
    ops = []
    for row in pmap.matrix:
        ops.append(sum(coeff * op for coeff, op in zip(row, povm.operators)))
    return Povm.from_operators(ops)


def pre_process(povm: Povm, channel: KrausChannel) -> Povm:
    """Apply a channel before measuring: operators map through the Heisenberg dual.

    Changes the dimension but preserves the number of outcomes.
    """
    if channel.dim_out != povm.dim:
        raise DimensionMismatch(
            f"channel output dimension {channel.dim_out} does not match measurement dimension {povm.dim}"
        )
    return Povm.from_operators([channel.heisenberg(op) for op in povm.operators])


def computational_basis(d: int) -> Povm:
    if d < 1:
        raise DomainError("dimension must be >= 1")
    eye = np.eye(d, dtype=np.complex128)
    return Povm.from_operators([np.outer(eye[:, k], eye[:, k].conj()) for k in range(d)])


def fourier_basis(d: int) -> Povm:
    """Measurement in the Fourier basis F[j, k] = exp(2*pi*i*j*k/d) / sqrt(d)."""
    j, k = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
    f = np.exp(2j * np.pi * j * k / d) / np.sqrt(d)
    ops = [np.outer(f[:, col], f[:, col].conj()) for col in range(d)]
    return Povm.from_operators(ops)


def mub_pair(d: int) -> tuple[Povm, Povm]:
    """Computational and Fourier bases: mutually unbiased in every dimension d >= 2."""
    if d < 2:
        raise DomainError("mutually unbiased bases need dimension >= 2")
    return computational_basis(d), fourier_basis(d)


def rank1_decompose(povm: Povm, zero_tol: float = EIG_ZERO_TOL) -> tuple[Povm, StochasticMap]:
    """Split every operator into rank-1 spectral pieces plus the merge map.

    Each nonzero eigenvalue of each operator becomes one outcome of the
    returned rank-1 measurement; post-processing with the returned
    deterministic map recovers the original measurement. For degenerate
    operators the eigenbasis (hence the pieces) is not unique; any
    orthonormal choice is valid and the backend's deterministic choice is
    used.
    """
    ops = []
    parents = []
    for a, op in enumerate(povm.operators):
        dec = linalg.eig_hermitian(op)
        for lam, vec in zip(dec.eigenvalues, dec.eigenvectors.T):
            if lam <= zero_tol:
                continue
            v = canonical_phase(vec).reshape(-1, 1)
            ops.append(lam * (v @ v.conj().T))
            parents.append(a)
    merge = np.zeros((povm.n_outcomes, len(ops)))
    for col, a in enumerate(parents):
        merge[a, col] = 1.0
    return Povm.from_operators(ops), StochasticMap.from_matrix(merge)


# ---------------------------------------------------------------------------
# Random constructors (deterministic given the seed)
# ---------------------------------------------------------------------------


def random_unitary(d: int, seed) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix with phase fix."""
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    return q * (diag / np.abs(diag)).conj()


def random_basis(d: int, seed) -> Povm:
    """Haar-random orthonormal basis measurement."""
    if d < 2:
        raise DomainError("dimension must be >= 2")
    u = random_unitary(d, seed)
    ops = []
    for k in range(d):
        v = canonical_phase(u[:, k]).reshape(-1, 1)
        ops.append(v @ v.conj().T)
    return Povm.from_operators(ops)


def random_rank1_povm(d: int, n: int, seed) -> Povm:
    """Rank-1 measurement from n Gaussian vectors whitened to completeness."""
    if d < 2:
        raise DomainError("dimension must be >= 2")
    if n < d:
        raise DomainError("a rank-1 measurement needs at least d outcomes")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((d, n)) + 1j * rng.standard_normal((d, n))
    s = g @ g.conj().T
    w, v = np.linalg.eigh(s)
    s_inv_sqrt = (v / np.sqrt(w)) @ v.conj().T
    ops = []
    for k in range(n):
        vec = canonical_phase(s_inv_sqrt @ g[:, k]).reshape(-1, 1)
        ops.append(vec @ vec.conj().T)
    return Povm.from_operators(ops)


def random_povm(d: int, n: int, seed, rank: int | None = None) -> Povm:
    """Generic full-rank measurement: whitened Wishart blocks."""
    if d < 2:
        raise DomainError("dimension must be >= 2")
    if n < 2:
        raise DomainError("a measurement needs at least 2 outcomes")
    rng = np.random.default_rng(seed)
    rank = d if rank is None else rank
    blocks = []
    for _ in range(n):
        g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
        blocks.append(g @ g.conj().T)
    s = sum(blocks)
    w, v = np.linalg.eigh(s)
    s_inv_sqrt = (v / np.sqrt(w)) @ v.conj().T
    return Povm.from_operators([s_inv_sqrt @ b @ s_inv_sqrt for b in blocks])


def random_stochastic_map(n_out: int, n_in: int, seed) -> StochasticMap:
    """Columns drawn independently from a flat Dirichlet distribution."""
    rng = np.random.default_rng(seed)
    cols = rng.dirichlet(np.ones(n_out), size=n_in).T
    return StochasticMap.from_matrix(cols)


def random_unital_qubit_channel(seed, n_unitaries: int = 3) -> KrausChannel:
    """Random mixture of qubit unitary conjugations; unital by construction."""
    rng = np.random.default_rng(seed)
    probs = rng.dirichlet(np.ones(n_unitaries))
    ops = [np.sqrt(p) * random_unitary(2, rng) for p in probs]
    return KrausChannel.from_operators(ops)


def random_commuting_qubit_pair(seed) -> tuple[Povm, Povm]:
    """Two binary qubit measurements diagonal in one random basis."""
    rng = np.random.default_rng(seed)
    u = random_unitary(2, rng)
    pair = []
    for _ in range(2):
        diag = rng.uniform(0.0, 1.0, size=2)
        e1 = u @ np.diag(diag).astype(np.complex128) @ u.conj().T
        e1 = (e1 + e1.conj().T) / 2.0
        pair.append(Povm.from_operators([e1, np.eye(2) - e1]))
    return pair[0], pair[1]


# ---------------------------------------------------------------------------
# Compositions
# ---------------------------------------------------------------------------


def trivial_extend(povm: Povm, d2: int) -> Povm:
    """Tensor every operator with the identity on a d2-dimensional ancilla."""
    if d2 < 1:
        raise DomainError("ancilla dimension must be >= 1")
    eye = np.eye(d2)
    return Povm.from_operators([np.kron(op, eye) for op in povm.operators])


def direct_sum_povm(p1: Povm, p2: Povm) -> Povm:
    """Block-diagonal composition on the direct sum of the two spaces."""
    d1, d2 = p1.dim, p2.dim
    ops = []
    for op in p1.operators:
        block = np.zeros((d1 + d2, d1 + d2), dtype=np.complex128)
        block[:d1, :d1] = op
        ops.append(block)
    for op in p2.operators:
        block = np.zeros((d1 + d2, d1 + d2), dtype=np.complex128)
        block[d1:, d1:] = op
        ops.append(block)
    return Povm.from_operators(ops)


def tensor_povm(p1: Povm, p2: Povm) -> Povm:
    """Tensor-product composition; outcomes ordered with the first factor outermost."""
    ops = [np.kron(a, b) for a in p1.operators for b in p2.operators]
    return Povm.from_operators(ops)
