"""Linear algebra primitives: norms, spectral parts, rank-1 closed forms."""

import math

import numpy as np
import pytest

from qincompat import linalg
from qincompat.errors import DimensionMismatch, DomainError, NotHermitian

from util import PAULI_X, PAULI_Y, PAULI_Z, random_hermitian, random_unit_vector


class TestEigHermitian:
    def test_identity(self):
        dec = linalg.eig_hermitian(np.eye(2))
        assert np.allclose(dec.eigenvalues, [1.0, 1.0])

    def test_pauli_z(self):
        dec = linalg.eig_hermitian(PAULI_Z)
        assert np.allclose(dec.eigenvalues, [1.0, -1.0])
        projs = dec.projectors()
        assert len(projs) == 2
        assert np.allclose(projs[0][1], np.diag([1.0, 0.0]))
        assert np.allclose(projs[1][1], np.diag([0.0, 1.0]))

    def test_reconstruction_random(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            a = random_hermitian(rng, 5)
            dec = linalg.eig_hermitian(a)
            assert linalg.schatten_norm(dec.reconstruct() - a, math.inf) <= 1e-10

    def test_reconstruction_scales_with_dimension(self):
        rng = np.random.default_rng(21)
        for d in (8, 16, 32):
            a = random_hermitian(rng, d)
            dec = linalg.eig_hermitian(a)
            residual = linalg.schatten_norm(dec.reconstruct() - a, math.inf)
            assert residual <= linalg.RECONSTRUCTION_TOL_PER_DIM * d

    def test_degenerate_clustering(self):
        dec = linalg.eig_hermitian(np.diag([1.0, 1.0, 0.0]))
        projs = dec.projectors()
        assert len(projs) == 2
        assert np.isclose(np.trace(projs[0][1]).real, 2.0)

    def test_projectors_idempotent_orthogonal(self):
        rng = np.random.default_rng(2)
        a = random_hermitian(rng, 4)
        projs = linalg.eig_hermitian(a).projectors()
        for lam, p in projs:
            assert np.allclose(p @ p, p, atol=1e-10)
        for i in range(len(projs)):
            for j in range(i + 1, len(projs)):
                assert np.allclose(projs[i][1] @ projs[j][1], 0.0, atol=1e-10)

    def test_not_hermitian_raises(self):
        with pytest.raises(NotHermitian):
            linalg.eig_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestSchattenNorm:
    def test_zero_matrix(self):
        for p in (1.0, 2.0, 3.5, math.inf):
            assert linalg.schatten_norm(np.zeros((3, 3)), p) == 0.0

    def test_diagonal_values(self):
        a = np.diag([3.0, -4.0])
        assert np.isclose(linalg.schatten_norm(a, 1), 7.0)
        assert np.isclose(linalg.schatten_norm(a, 2), 5.0)
        assert np.isclose(linalg.schatten_norm(a, math.inf), 4.0)

    def test_frobenius_identity(self):
        rng = np.random.default_rng(3)
        a = rng.standard_normal((4, 6)) + 1j * rng.standard_normal((4, 6))
        assert np.isclose(linalg.schatten_norm(a, 2), np.sqrt(np.sum(np.abs(a) ** 2)))

    def test_p_below_one_rejected(self):
        with pytest.raises(DomainError):
            linalg.schatten_norm(np.eye(2), 0.5)

    def test_triangle_inequality(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            a = random_hermitian(rng, 4)
            b = random_hermitian(rng, 4)
            for p in (1.0, 1.7, 2.0, 3.0, math.inf):
                lhs = linalg.schatten_norm(a + b, p)
                rhs = linalg.schatten_norm(a, p) + linalg.schatten_norm(b, p)
                assert lhs <= rhs + 1e-10


class TestSpectralParts:
    def test_diagonal_example(self):
        a = np.diag([1.0, -2.0])
        assert np.allclose(linalg.positive_part(a), np.diag([1.0, 0.0]))
        assert np.allclose(linalg.negative_part(a), np.diag([0.0, -2.0]))
        assert np.allclose(linalg.absolute_value(a), np.diag([1.0, 2.0]))

    def test_psd_input_has_zero_negative_part(self):
        rng = np.random.default_rng(5)
        g = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        psd = g @ g.conj().T
        assert np.allclose(linalg.negative_part(psd), 0.0, atol=1e-10)

    def test_trace_norm_oracle(self):
        rng = np.random.default_rng(6)
        for _ in range(20):
            a = random_hermitian(rng, 5)
            assert abs(linalg.schatten_norm(a, 1) - np.trace(linalg.absolute_value(a)).real) <= 1e-10

    def test_parts_sum_to_operator(self):
        rng = np.random.default_rng(7)
        a = random_hermitian(rng, 6)
        assert np.allclose(linalg.positive_part(a) + linalg.negative_part(a), a, atol=1e-10)


class TestCommutator:
    def test_self_commutator_vanishes(self):
        rng = np.random.default_rng(8)
        a = random_hermitian(rng, 3)
        assert np.allclose(linalg.commutator(a, a), 0.0)

    def test_pauli_relation(self):
        assert np.allclose(linalg.commutator(PAULI_X, PAULI_Y), 2j * PAULI_Z)

    def test_commuting_diagonals(self):
        assert np.allclose(linalg.commutator(np.diag([1.0, 2.0]), np.diag([5.0, -1.0])), 0.0)

    def test_anti_hermitian_for_hermitian_inputs(self):
        rng = np.random.default_rng(9)
        c = linalg.commutator(random_hermitian(rng, 4), random_hermitian(rng, 4))
        assert np.allclose(c, -c.conj().T, atol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            linalg.commutator(np.eye(2), np.eye(3))


def _rank1_pair(rng, d):
    alpha, beta = rng.uniform(0.0, 2.0, size=2)
    e = random_unit_vector(rng, d)
    f = random_unit_vector(rng, d)
    a = alpha * np.outer(e, e.conj())
    b = beta * np.outer(f, f.conj())
    c = abs(np.vdot(e, f))
    return alpha, beta, c, a, b


class TestRank1ClosedForms:
    def test_commutator_spectrum_examples(self):
        spec = linalg.rank1_commutator_spectrum(1.0, 1.0, 1.0 / math.sqrt(2))
        assert np.allclose(sorted(spec.imag), [-0.5, 0.5])
        assert np.allclose(linalg.rank1_commutator_spectrum(1.0, 1.0, 0.0), 0.0)
        assert np.allclose(linalg.rank1_commutator_spectrum(1.0, 1.0, 1.0), 0.0)
        assert np.allclose(linalg.rank1_commutator_spectrum(0.0, 1.0, 0.3), 0.0)

    def test_sum_spectrum_examples(self):
        assert linalg.rank1_sum_spectrum(1.0, 1.0, 0.0) == (1.0, 1.0)
        plus, minus = linalg.rank1_sum_spectrum(1.0, 1.0, 1.0 / math.sqrt(2))
        assert np.isclose(plus, 1.0 + math.sqrt(2) / 2)
        assert np.isclose(minus, 1.0 - math.sqrt(2) / 2)
        assert linalg.rank1_sum_spectrum(0.7, 0.0, 0.9) == (0.7, 0.0)

    def test_sum_spectrum_invariants(self):
        rng = np.random.default_rng(10)
        for _ in range(100):
            alpha, beta = rng.uniform(0.0, 3.0, size=2)
            c = rng.uniform(0.0, 1.0)
            plus, minus = linalg.rank1_sum_spectrum(alpha, beta, c)
            assert np.isclose(plus + minus, alpha + beta)
            assert np.isclose(plus * minus, alpha * beta * (1.0 - c * c))

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            linalg.rank1_commutator_spectrum(1.0, 1.0, 1.5)
        with pytest.raises(DomainError):
            linalg.rank1_sum_spectrum(-1.0, 1.0, 0.5)

    def test_against_dense_eigensolver(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            d = int(rng.integers(2, 6))
            alpha, beta, c, a, b = _rank1_pair(rng, d)
            lam = linalg.rank1_commutator_spectrum(alpha, beta, c)[0].imag
            dense = np.sort(np.linalg.eigvalsh(1j * linalg.commutator(a, b)))
            assert abs(dense[-1] - lam) <= 1e-10
            plus, minus = linalg.rank1_sum_spectrum(alpha, beta, c)
            dense_sum = np.sort(np.linalg.eigvalsh(a + b))[::-1]
            assert abs(dense_sum[0] - plus) <= 1e-10
            assert abs(dense_sum[1] - minus) <= 1e-10 or d == 1


class TestOverlapFactor:
    def test_values(self):
        assert np.isclose(linalg.h_p(1.0 / math.sqrt(2), 1.0), 1.0)
        assert np.isclose(linalg.h_p(1.0 / math.sqrt(2), math.inf), 0.5)
        assert linalg.h_p(0.0, 2.0) == 0.0
        assert linalg.h_p(1.0, 2.0) == 0.0

    def test_maximum_at_inverse_sqrt2(self):
        grid = np.linspace(0.0, 1.0, 1001)
        vals = [linalg.h_p(c, 1.0) for c in grid]
        assert max(vals) <= linalg.h_p(1.0 / math.sqrt(2), 1.0) + 1e-12

    def test_domain(self):
        with pytest.raises(DomainError):
            linalg.h_p(1.2, 1.0)

    def test_infinity_convention_is_exact(self):
        assert linalg.two_pow_inv(math.inf) == 1.0


class TestDualityProperty:
    @pytest.mark.parametrize("p", [1.0, 1.5, 2.0, 3.0, math.inf])
    def test_optimizer_attains_norm(self, p):
        rng = np.random.default_rng(12)
        q = linalg.dual_exponent(p)
        for _ in range(25):
            a = random_hermitian(rng, 5)
            x = linalg.dual_optimizer(a, p)
            inner = linalg.hilbert_schmidt_inner(x, a).real
            assert abs(inner - linalg.schatten_norm(a, p)) <= 1e-8
            assert abs(linalg.schatten_norm(x, q) - 1.0) <= 1e-8

    def test_optimal_parts_orthogonality(self):
        # positive part of A annihilates negative part of the optimizer and vice versa
        rng = np.random.default_rng(13)
        for p in (1.0, 2.0, 3.0, math.inf):
            a = random_hermitian(rng, 5)
            x = linalg.dual_optimizer(a, p)
            ap, am = linalg.positive_part(a), linalg.negative_part(a)
            xp, xm = linalg.positive_part(x), linalg.negative_part(x)
            assert linalg.schatten_norm(ap @ xm, math.inf) <= 1e-8
            assert linalg.schatten_norm(am @ xp, math.inf) <= 1e-8


class TestTriangleEqualityCharacterization:
    # equality in the triangle inequality is equivalent to a shared norm
    # optimizer; both directions are exercised on constructed instances

    def test_psd_pairs_saturate_trace_norm(self):
        rng = np.random.default_rng(15)
        for _ in range(25):
            g1 = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
            g2 = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
            a, b = g1 @ g1.conj().T, g2 @ g2.conj().T
            lhs = linalg.schatten_norm(a + b, 1)
            rhs = linalg.schatten_norm(a, 1) + linalg.schatten_norm(b, 1)
            assert abs(lhs - rhs) <= 1e-9
            # the optimizer of the sum attains both norms simultaneously
            x = linalg.dual_optimizer(a + b, 1)
            assert abs(linalg.hilbert_schmidt_inner(x, a).real - linalg.schatten_norm(a, 1)) <= 1e-8
            assert abs(linalg.hilbert_schmidt_inner(x, b).real - linalg.schatten_norm(b, 1)) <= 1e-8

    @pytest.mark.parametrize("p", [1.0, 2.0, 3.0, math.inf])
    def test_positive_multiples_saturate_every_norm(self, p):
        rng = np.random.default_rng(16)
        a = random_hermitian(rng, 4)
        for scale in (0.5, 2.0):
            b = scale * a
            lhs = linalg.schatten_norm(a + b, p)
            rhs = linalg.schatten_norm(a, p) + linalg.schatten_norm(b, p)
            assert abs(lhs - rhs) <= 1e-9
            x = linalg.dual_optimizer(a + b, p)
            assert abs(linalg.hilbert_schmidt_inner(x, b).real - linalg.schatten_norm(b, p)) <= 1e-8


def strict_triangle_instance(rng):
    """Two commutators with a common rank-1 factor never saturate the triangle inequality."""
    gamma = rng.uniform(0.1, 1.0)
    while True:
        psi = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        psi /= np.linalg.norm(psi)
        if abs(psi[0]) > 0.1 and abs(psi[1]) > 0.1:
            break
    p0 = np.zeros((3, 3), dtype=complex)
    p0[0, 0] = 1.0
    p1 = np.zeros((3, 3), dtype=complex)
    p1[1, 1] = gamma
    q = np.outer(psi, psi.conj())
    a = 1j * linalg.commutator(p0, q)
    b = 1j * linalg.commutator(p1, q)
    return a, b


class TestStrictTriangleInequality:
    @pytest.mark.parametrize("p", [1.0, 2.0, math.inf])
    def test_strict_margin(self, p):
        rng = np.random.default_rng(14)
        for _ in range(100):
            a, b = strict_triangle_instance(rng)
            lhs = linalg.schatten_norm(a + b, p)
            rhs = linalg.schatten_norm(a, p) + linalg.schatten_norm(b, p)
            assert lhs < rhs - 1e-10
