"""Small dense semidefinite solver over products of complex Hermitian PSD cones.

Primal-dual path-following with Nesterov-Todd scaling and a Mehrotra
predictor-corrector step, solving

    minimize    <C, X>
    subject to  A(X) = b,   X in  (+)_k  Herm_+(d_k)

together with its dual. Constraints are stored densely in real
coordinates: a Hermitian block of size s is flattened to s^2 reals
(diagonal, then sqrt(2) * real and sqrt(2) * imaginary upper-triangular
parts), an isometry for the trace inner product. The Newton systems are
reduced to a dense Schur complement in the constraint multipliers, which
stays tiny for the intended problem sizes (a few hundred rows).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

_SQRT2 = math.sqrt(2.0)


@lru_cache(maxsize=None)
def _triu_indices(s: int):
    iu, ju = np.triu_indices(s, k=1)
    return iu, ju


def hvec(mat: np.ndarray) -> np.ndarray:
    """Isometric real coordinates of a Hermitian matrix (length s^2)."""
    s = mat.shape[0]
    iu, ju = _triu_indices(s)
    off = mat[iu, ju]
    return np.concatenate([mat.diagonal().real, _SQRT2 * off.real, _SQRT2 * off.imag])


def hvec_inv(vec: np.ndarray, s: int) -> np.ndarray:
    """Inverse of :func:`hvec`."""
    iu, ju = _triu_indices(s)
    m = iu.size
    mat = np.zeros((s, s), dtype=np.complex128)
    mat[np.arange(s), np.arange(s)] = vec[:s]
    off = (vec[s : s + m] + 1j * vec[s + m :]) / _SQRT2
    mat[iu, ju] = off
    mat[ju, iu] = off.conj()
    return mat


@lru_cache(maxsize=None)
def _hvec_basis(s: int) -> np.ndarray:
    """Orthonormal Hermitian basis matching the hvec coordinates, shape (s^2, s, s)."""
    basis = np.zeros((s * s, s, s), dtype=np.complex128)
    for i in range(s):
        basis[i, i, i] = 1.0
    iu, ju = _triu_indices(s)
    m = iu.size
    for k in range(m):
        i, j = iu[k], ju[k]
        basis[s + k, i, j] = 1.0 / _SQRT2
        basis[s + k, j, i] = 1.0 / _SQRT2
        basis[s + m + k, i, j] = 1j / _SQRT2
        basis[s + m + k, j, i] = -1j / _SQRT2
    return basis


def _congruence_operator(w: np.ndarray) -> np.ndarray:
    """Real matrix of the map S -> W S W in hvec coordinates."""
    s = w.shape[0]
    basis = _hvec_basis(s)
    mapped = np.einsum("ab,kbc,cd->kad", w, basis, w)
    iu, ju = _triu_indices(s)
    off = mapped[:, iu, ju]
    cols = np.concatenate(
        [
            np.einsum("kii->ki", mapped).real,
            _SQRT2 * off.real,
            _SQRT2 * off.imag,
        ],
        axis=1,
    )
    return cols.T.copy()


def _herm(mat: np.ndarray) -> np.ndarray:
    return (mat + mat.conj().T) / 2.0


def _inner(x: np.ndarray, z: np.ndarray) -> float:
    return float(np.vdot(z, x).real)


@dataclass
class BlockProgram:
    """Conic program data in standard primal form."""

    block_dims: list[int]
    c_blocks: list[np.ndarray]
    a_mat: np.ndarray  # (m, n_vec) real
    b: np.ndarray  # (m,)
    offsets: list[int] = field(init=False)
    n_vec: int = field(init=False)

    def __post_init__(self):
        self.offsets = list(np.cumsum([0] + [s * s for s in self.block_dims])[:-1])
        self.n_vec = sum(s * s for s in self.block_dims)
        if self.a_mat.shape != (self.b.size, self.n_vec):
            raise ValueError("constraint matrix shape does not match the cone layout")

    def to_vec(self, blocks: list[np.ndarray]) -> np.ndarray:
        return np.concatenate([hvec(blk) for blk in blocks])

    def to_blocks(self, vec: np.ndarray) -> list[np.ndarray]:
        out = []
        for off, s in zip(self.offsets, self.block_dims):
            out.append(hvec_inv(vec[off : off + s * s], s))
        return out

    def apply_a(self, blocks: list[np.ndarray]) -> np.ndarray:
        return self.a_mat @ self.to_vec(blocks)

    def apply_at(self, y: np.ndarray) -> list[np.ndarray]:
        return self.to_blocks(self.a_mat.T @ y)


@dataclass
class IpmResult:
    x_blocks: list[np.ndarray]
    y: np.ndarray
    z_blocks: list[np.ndarray]
    primal_objective: float
    dual_objective: float
    gap: float
    rel_gap: float
    rel_primal_residual: float
    rel_dual_residual: float
    iterations: int
    converged: bool
    status: str


def _max_step(sigma: np.ndarray, direction_hat: np.ndarray) -> float:
    """Largest alpha with diag(sigma) + alpha * direction_hat >= 0."""
    scale = 1.0 / np.sqrt(sigma)
    scaled = scale[:, None] * direction_hat * scale[None, :]
    wmin = float(np.linalg.eigvalsh(_herm(scaled))[0])
    if wmin >= 0.0:
        return math.inf
    return 1.0 / (-wmin)


def _solve_psd(mat: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    scale = float(np.mean(np.abs(np.diagonal(mat)))) or 1.0
    eye = np.eye(mat.shape[0])
    for jitter in (0.0, 1e-14, 1e-12, 1e-10, 1e-8):
        try:
            reg = mat + jitter * scale * eye
            np.linalg.cholesky(reg)
            return np.linalg.solve(reg, rhs)
        except np.linalg.LinAlgError:
            continue
    return np.linalg.lstsq(mat, rhs, rcond=None)[0]


def solve(
    program: BlockProgram,
    x0_blocks: list[np.ndarray],
    y0: np.ndarray,
    z0_blocks: list[np.ndarray],
    feas_tol: float = 1e-9,
    gap_tol: float = 1e-10,
    max_iterations: int = 200,
    step_fraction: float = 0.99,
) -> IpmResult:
    """Run the predictor-corrector iteration from a strictly interior start."""
    dims = program.block_dims
    nu = float(sum(dims))
    x = [_herm(blk.astype(np.complex128)) for blk in x0_blocks]
    z = [_herm(blk.astype(np.complex128)) for blk in z0_blocks]
    y = np.asarray(y0, dtype=np.float64).copy()

    b_scale = 1.0 + float(np.linalg.norm(program.b))
    c_scale = 1.0 + math.sqrt(sum(np.linalg.norm(ck) ** 2 for ck in program.c_blocks))

    # row support of each block column group, for the Schur assembly
    supports = []
    for off, s in zip(program.offsets, dims):
        cols = program.a_mat[:, off : off + s * s]
        supports.append(np.flatnonzero(np.any(cols != 0.0, axis=1)))

    status = "max_iterations"
    it = 0
    rel_p = rel_d = rel_gap = math.inf
    stall = 0
    best_gap = math.inf

    for it in range(1, max_iterations + 1):
        r_p = program.b - program.apply_a(x)
        aty = program.apply_at(y)
        r_d = [ck - atk - zk for ck, atk, zk in zip(program.c_blocks, aty, z)]
        gap = sum(_inner(xk, zk) for xk, zk in zip(x, z))
        mu = gap / nu
        pobj = sum(_inner(ck, xk) for ck, xk in zip(program.c_blocks, x))
        dobj = float(program.b @ y)

        rel_p = float(np.linalg.norm(r_p)) / b_scale
        rel_d = math.sqrt(sum(np.linalg.norm(rk) ** 2 for rk in r_d)) / c_scale
        rel_gap = gap / (1.0 + abs(pobj) + abs(dobj))

        if rel_p <= feas_tol and rel_d <= feas_tol and rel_gap <= gap_tol:
            status = "optimal"
            break
        if gap < best_gap * 0.999:
            best_gap = gap
            stall = 0
        else:
            stall += 1
            if stall >= 15:
                status = "stalled"
                break
        if mu <= 1e-16:
            status = "optimal" if (rel_p <= 1e-6 and rel_d <= 1e-6) else "stalled"
            break

        # Nesterov-Todd scaling per block: W = G G^H, scaled point diag(sigma)
        try:
            g_list, ginv_list, sigma_list, w_list = [], [], [], []
            for xk, zk in zip(x, z):
                lx = np.linalg.cholesky(xk)
                lz = np.linalg.cholesky(zk)
                u_svd, sig, vh = np.linalg.svd(lz.conj().T @ lx)
                sig = np.maximum(sig, 1e-300)
                v = vh.conj().T
                g = lx @ (v / np.sqrt(sig))
                ginv = (u_svd / np.sqrt(sig)).conj().T @ lz.conj().T
                g_list.append(g)
                ginv_list.append(ginv)
                sigma_list.append(sig)
                w_list.append(_herm(g @ g.conj().T))
        except np.linalg.LinAlgError:
            status = "numerical_failure"
            break

        # Schur complement M[i, j] = <A_i, W A_j W>
        m_rows = program.b.size
        schur = np.zeros((m_rows, m_rows))
        for (off, s), rows, w in zip(zip(program.offsets, dims), supports, w_list):
            cols = program.a_mat[np.ix_(rows, np.arange(off, off + s * s))]
            wop = _congruence_operator(w)
            schur[np.ix_(rows, rows)] += cols @ wop @ cols.T

        def directions(r_blocks):
            """Solve the reduced Newton system for a given scaled-space target."""
            grg = [
                _herm(g @ rk @ g.conj().T) for g, rk in zip(g_list, r_blocks)
            ]
            wrdw = [
                _herm(w @ rdk @ w) for w, rdk in zip(w_list, r_d)
            ]
            rhs = r_p - program.apply_a(grg) + program.apply_a(wrdw)
            dy = _solve_psd(schur, rhs)
            at_dy = program.apply_at(dy)
            dz = [_herm(rdk - atk) for rdk, atk in zip(r_d, at_dy)]
            dx = [
                _herm(grgk - w @ dzk @ w)
                for grgk, w, dzk in zip(grg, w_list, dz)
            ]
            return dx, dy, dz

        # predictor: aim at the complementarity target 0
        r_aff = [np.diag(-sig).astype(np.complex128) for sig in sigma_list]
        dx_aff, dy_aff, dz_aff = directions(r_aff)

        dxh_aff = [
            _herm(ginv @ dxk @ ginv.conj().T) for ginv, dxk in zip(ginv_list, dx_aff)
        ]
        dzh_aff = [_herm(g.conj().T @ dzk @ g) for g, dzk in zip(g_list, dz_aff)]
        alpha_p_aff = min(
            (_max_step(sig, dh) for sig, dh in zip(sigma_list, dxh_aff)), default=math.inf
        )
        alpha_d_aff = min(
            (_max_step(sig, dh) for sig, dh in zip(sigma_list, dzh_aff)), default=math.inf
        )
        ap = min(1.0, step_fraction * alpha_p_aff)
        ad = min(1.0, step_fraction * alpha_d_aff)
        gap_aff = sum(
            _inner(xk + ap * dxk, zk + ad * dzk)
            for xk, dxk, zk, dzk in zip(x, dx_aff, z, dz_aff)
        )
        sigma_cent = min(1.0, max((max(gap_aff, 0.0) / gap) ** 3, 1e-10))

        # corrector with the Mehrotra second-order term
        r_blocks = []
        for sig, dxh, dzh in zip(sigma_list, dxh_aff, dzh_aff):
            corr = _herm(dxh @ dzh)
            d_target = np.diag(sigma_cent * mu - sig**2).astype(np.complex128) - corr
            denom = sig[:, None] + sig[None, :]
            r_blocks.append(_herm(2.0 * d_target / denom))
        dx, dy, dz = directions(r_blocks)

        dxh = [_herm(ginv @ dk @ ginv.conj().T) for ginv, dk in zip(ginv_list, dx)]
        dzh = [_herm(g.conj().T @ dk @ g) for g, dk in zip(g_list, dz)]
        alpha_p = min((_max_step(sig, dh) for sig, dh in zip(sigma_list, dxh)), default=math.inf)
        alpha_d = min((_max_step(sig, dh) for sig, dh in zip(sigma_list, dzh)), default=math.inf)
        ap = min(1.0, step_fraction * alpha_p)
        ad = min(1.0, step_fraction * alpha_d)
        if ap <= 1e-12 and ad <= 1e-12:
            status = "stalled"
            break

        x = [_herm(xk + ap * dxk) for xk, dxk in zip(x, dx)]
        y = y + ad * dy
        z = [_herm(zk + ad * dzk) for zk, dzk in zip(z, dz)]

    pobj = sum(_inner(ck, xk) for ck, xk in zip(program.c_blocks, x))
    dobj = float(program.b @ y)
    gap = sum(_inner(xk, zk) for xk, zk in zip(x, z))
    return IpmResult(
        x_blocks=x,
        y=y,
        z_blocks=z,
        primal_objective=pobj,
        dual_objective=dobj,
        gap=gap,
        rel_gap=gap / (1.0 + abs(pobj) + abs(dobj)),
        rel_primal_residual=rel_p,
        rel_dual_residual=rel_d,
        iterations=it,
        converged=(status == "optimal"),
        status=status,
    )
