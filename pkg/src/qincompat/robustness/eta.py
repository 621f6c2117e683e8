"""Generalized incompatibility robustness of a measurement pair.

The robustness is the optimal value of a small semidefinite program over
a parent measurement {G_ab}: maximize eta subject to G_ab >= 0,
sum_b G_ab >= eta * E_a, sum_a G_ab >= eta * F_b and sum_ab G_ab = 1.
It equals 1 exactly for jointly measurable (e.g. commuting) pairs and is
bounded below by (1 + 1/sqrt(d)) / 2 in dimension d; the bound is
attained by every pair certified maximally incompatible, for which an
analytic dual certificate is available.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .. import linalg
from ..errors import DimensionMismatch, NotMaximalPair, SizeCapExceeded, SolverDidNotConverge
from ..incompat import certify_maximal
from ..povm import Povm, Rank1Form
from . import sdp

SOLVER_TOL = 1e-8
GAP_TOL = 1e-6
MAX_ITERATIONS = 200
SIZE_CAP = 20_000


def universal_lower_bound(d: int) -> float:
    """(1 + 1/sqrt(d)) / 2, valid for every pair in dimension d."""
    return 0.5 * (1.0 + 1.0 / math.sqrt(d))


@dataclass(frozen=True)
class PrimalReport:
    """Minimum-eigenvalue and trace residuals of the primal constraints."""

    g_min_eigenvalue: float
    slack_e_min_eigenvalue: float
    slack_f_min_eigenvalue: float
    completeness_residual: float

    @property
    def max_violation(self) -> float:
        return max(
            -self.g_min_eigenvalue,
            -self.slack_e_min_eigenvalue,
            -self.slack_f_min_eigenvalue,
            self.completeness_residual,
            0.0,
        )

    def ok(self, tol: float = SOLVER_TOL) -> bool:
        return self.max_violation <= tol


@dataclass(frozen=True)
class DualReport:
    """Residuals of the dual constraints, independent of any solver."""

    x_min_eigenvalue: float
    y_min_eigenvalue: float
    dominance_min_eigenvalue: float  # min eig of N - X_a - Y_b over all pairs
    normalization: float  # sum_a tr(X_a E_a) + sum_b tr(Y_b F_b), must be >= 1
    n_hermiticity_defect: float
    trace_n: float

    @property
    def max_violation(self) -> float:
        return max(
            -self.x_min_eigenvalue,
            -self.y_min_eigenvalue,
            -self.dominance_min_eigenvalue,
            1.0 - self.normalization,
            self.n_hermiticity_defect,
            0.0,
        )

    def ok(self, tol: float = SOLVER_TOL) -> bool:
        return self.max_violation <= tol


@dataclass(frozen=True)
class SdpSolution:
    """Primal/dual solution of the robustness program with audit residuals."""

    eta: float
    g_blocks: np.ndarray  # shape (n_E, n_F, d, d)
    x_dual: tuple[np.ndarray, ...]
    y_dual: tuple[np.ndarray, ...]
    n_dual: np.ndarray
    gap: float  # |eta - tr(N)|
    primal_report: PrimalReport
    dual_report: DualReport
    iterations: int
    converged: bool
    status: str


def _check_pair(e: Povm, f: Povm) -> None:
    if e.dim != f.dim:
        raise DimensionMismatch("measurements must act on the same dimension")


def _min_eig(op: np.ndarray) -> float:
    return float(np.linalg.eigvalsh((op + op.conj().T) / 2.0)[0])


def check_primal_feasible(g_blocks, eta: float, e: Povm, f: Povm) -> PrimalReport:
    """Audit a candidate primal point {G_ab}, eta against the constraints."""
    _check_pair(e, f)
    g = np.asarray(g_blocks, dtype=np.complex128)
    if g.shape != (e.n_outcomes, f.n_outcomes, e.dim, e.dim):
        raise DimensionMismatch(
            f"parent operators must have shape ({e.n_outcomes}, {f.n_outcomes}, {e.dim}, {e.dim})"
        )
    g_min = min(_min_eig(blk) for row in g for blk in row)
    slack_e = min(
        _min_eig(g[a].sum(axis=0) - eta * e.operators[a]) for a in range(e.n_outcomes)
    )
    slack_f = min(
        _min_eig(g[:, b].sum(axis=0) - eta * f.operators[b]) for b in range(f.n_outcomes)
    )
    completeness = linalg.schatten_norm(g.sum(axis=(0, 1)) - np.eye(e.dim), math.inf)
    return PrimalReport(
        g_min_eigenvalue=g_min,
        slack_e_min_eigenvalue=slack_e,
        slack_f_min_eigenvalue=slack_f,
        completeness_residual=completeness,
    )


def check_dual_feasible(x_ops, y_ops, n_op, e: Povm, f: Povm) -> DualReport:
    """Audit a candidate dual point ({X_a}, {Y_b}, N) against the constraints."""
    _check_pair(e, f)
    x_ops = [np.asarray(x, dtype=np.complex128) for x in x_ops]
    y_ops = [np.asarray(yb, dtype=np.complex128) for yb in y_ops]
    n_op = np.asarray(n_op, dtype=np.complex128)
    if len(x_ops) != e.n_outcomes or len(y_ops) != f.n_outcomes:
        raise DimensionMismatch("dual multiplier counts must match the outcome counts")
    d = e.dim
    for op in (*x_ops, *y_ops, n_op):
        if op.shape != (d, d):
            raise DimensionMismatch("dual operators must match the measurement dimension")
    x_min = min(_min_eig(xa) for xa in x_ops)
    y_min = min(_min_eig(yb) for yb in y_ops)
    dom_min = min(_min_eig(n_op - xa - yb) for xa in x_ops for yb in y_ops)
    normalization = sum(
        float(np.trace(xa @ ea).real) for xa, ea in zip(x_ops, e.operators)
    ) + sum(float(np.trace(yb @ fb).real) for yb, fb in zip(y_ops, f.operators))
    return DualReport(
        x_min_eigenvalue=x_min,
        y_min_eigenvalue=y_min,
        dominance_min_eigenvalue=dom_min,
        normalization=normalization,
        n_hermiticity_defect=linalg.hermiticity_defect(n_op),
        trace_n=float(np.trace(n_op).real),
    )


def _build_program(e: Povm, f: Povm) -> tuple[sdp.BlockProgram, dict]:
    n_e, n_f, d = e.n_outcomes, f.n_outcomes, e.dim
    d_sq = d * d
    dims = [d] * (n_e * n_f) + [d] * n_e + [d] * n_f + [1]
    n_blocks = len(dims)
    offsets = np.cumsum([0] + [s * s for s in dims])[:-1]
    n_vec = int(offsets[-1]) + dims[-1] ** 2

    def g_block(a, b):
        return a * n_f + b

    slack_e0 = n_e * n_f
    slack_f0 = slack_e0 + n_e
    eta_block = slack_f0 + n_f
    eta_col = int(offsets[eta_block])

    m = (n_e + n_f + 1) * d_sq
    a_mat = np.zeros((m, n_vec))
    b_vec = np.zeros(m)

    for a in range(n_e):
        rows = slice(a * d_sq, (a + 1) * d_sq)
        he = sdp.hvec(e.operators[a])
        for b in range(n_f):
            off = int(offsets[g_block(a, b)])
            a_mat[rows, off : off + d_sq] += np.eye(d_sq)
        off = int(offsets[slack_e0 + a])
        a_mat[rows, off : off + d_sq] -= np.eye(d_sq)
        a_mat[rows, eta_col] = -he
    base = n_e * d_sq
    for b in range(n_f):
        rows = slice(base + b * d_sq, base + (b + 1) * d_sq)
        hf = sdp.hvec(f.operators[b])
        for a in range(n_e):
            off = int(offsets[g_block(a, b)])
            a_mat[rows, off : off + d_sq] += np.eye(d_sq)
        off = int(offsets[slack_f0 + b])
        a_mat[rows, off : off + d_sq] -= np.eye(d_sq)
        a_mat[rows, eta_col] = -hf
    base = (n_e + n_f) * d_sq
    rows = slice(base, base + d_sq)
    for a in range(n_e):
        for b in range(n_f):
            off = int(offsets[g_block(a, b)])
            a_mat[rows, off : off + d_sq] += np.eye(d_sq)
    b_vec[rows] = sdp.hvec(np.eye(d, dtype=np.complex128))

    c_blocks = [np.zeros((s, s), dtype=np.complex128) for s in dims]
    c_blocks[eta_block][0, 0] = -1.0  # maximize eta

    layout = {
        "n_e": n_e,
        "n_f": n_f,
        "d": d,
        "n_blocks": n_blocks,
        "eta_block": eta_block,
        "slack_e0": slack_e0,
        "slack_f0": slack_f0,
        "g_block": g_block,
    }
    return sdp.BlockProgram(block_dims=dims, c_blocks=c_blocks, a_mat=a_mat, b=b_vec), layout


def _initial_points(e: Povm, f: Povm, layout) -> tuple[list, np.ndarray, list]:
    n_e, n_f, d = layout["n_e"], layout["n_f"], layout["d"]
    eye = np.eye(d, dtype=np.complex128)

    eta0 = 0.5
    margin = 1e-3 / max(n_e, n_f)
    while True:
        slks_e = [eye / n_e - eta0 * op for op in e.operators]
        slks_f = [eye / n_f - eta0 * op for op in f.operators]
        wmin = min(
            float(np.linalg.eigvalsh((s + s.conj().T) / 2)[0]) for s in (*slks_e, *slks_f)
        )
        if wmin > margin:
            break
        eta0 /= 2.0
    x0 = [eye / (n_e * n_f) for _ in range(n_e * n_f)] + slks_e + slks_f
    x0.append(np.array([[eta0]], dtype=np.complex128))

    # strictly feasible dual start: multipliers eps * 1 with eps = 1/d
    eps = 1.0 / d
    d_sq = d * d
    y0 = np.zeros((n_e + n_f + 1) * d_sq)
    eye_h = sdp.hvec(eye)
    for a in range(n_e):
        y0[a * d_sq : (a + 1) * d_sq] = eps * eye_h
    for b in range(n_f):
        y0[(n_e + b) * d_sq : (n_e + b + 1) * d_sq] = eps * eye_h
    y0[(n_e + n_f) * d_sq :] = -(2.0 * eps + 1.0) * eye_h
    z0 = [eye.copy() for _ in range(n_e * n_f)]
    z0 += [eps * eye for _ in range(n_e)]
    z0 += [eps * eye for _ in range(n_f)]
    z0.append(np.array([[1.0]], dtype=np.complex128))
    return x0, y0, z0


def eta_g_solve(
    e: Povm,
    f: Povm,
    tol: float = SOLVER_TOL,
    gap_tol: float = GAP_TOL,
    max_iterations: int = MAX_ITERATIONS,
) -> SdpSolution:
    """Solve the robustness program and return the audited primal/dual pair.

    Raises SizeCapExceeded beyond the supported size, and
    SolverDidNotConverge only if the iteration broke down so badly that
    the returned point would be meaningless; a merely-stalled solve is
    returned with ``converged=False`` and the best dual bound found.
    """
    _check_pair(e, f)
    n_e, n_f, d = e.n_outcomes, f.n_outcomes, e.dim
    if n_e * n_f * d * d > SIZE_CAP:
        raise SizeCapExceeded(
            f"problem size n_E*n_F*d^2 = {n_e * n_f * d * d} exceeds the cap {SIZE_CAP}"
        )
    program, layout = _build_program(e, f)
    x0, y0, z0 = _initial_points(e, f, layout)
    result = sdp.solve(
        program,
        x0,
        y0,
        z0,
        feas_tol=min(tol, 1e-9),
        gap_tol=min(gap_tol, 1e-10),
        max_iterations=max_iterations,
    )
    if not np.all(np.isfinite(result.y)):
        raise SolverDidNotConverge(f"solver failed with status {result.status!r}")

    eta = float(result.x_blocks[layout["eta_block"]][0, 0].real)
    g = np.empty((n_e, n_f, d, d), dtype=np.complex128)
    for a in range(n_e):
        for b in range(n_f):
            g[a, b] = result.x_blocks[layout["g_block"](a, b)]

    d_sq = d * d
    x_dual = tuple(
        sdp.hvec_inv(result.y[a * d_sq : (a + 1) * d_sq], d) for a in range(n_e)
    )
    y_dual = tuple(
        sdp.hvec_inv(result.y[(n_e + b) * d_sq : (n_e + b + 1) * d_sq], d)
        for b in range(n_f)
    )
    n_dual = -sdp.hvec_inv(result.y[(n_e + n_f) * d_sq :], d)

    primal_report = check_primal_feasible(g, eta, e, f)
    dual_report = check_dual_feasible(x_dual, y_dual, n_dual, e, f)
    gap = abs(eta - dual_report.trace_n)
    converged = (
        result.converged
        and primal_report.ok(tol)
        and dual_report.ok(tol)
        and gap <= gap_tol
    )
    return SdpSolution(
        eta=eta,
        g_blocks=g,
        x_dual=x_dual,
        y_dual=y_dual,
        n_dual=n_dual,
        gap=gap,
        primal_report=primal_report,
        dual_report=dual_report,
        iterations=result.iterations,
        converged=converged,
        status=result.status,
    )


@dataclass(frozen=True)
class DualCertificate:
    """Closed-form dual point proving eta = (1 + 1/sqrt(d)) / 2 for maximal pairs."""

    x_ops: tuple[np.ndarray, ...]
    y_ops: tuple[np.ndarray, ...]
    n_op: np.ndarray
    trace_n: float
    normalization: float
    dominance_margin: float  # min over pairs via the rank-1 sum spectrum


def dual_certificate_rank1_uniform(e: Povm, f: Povm, cert_tol: float = 1e-7) -> DualCertificate:
    """Analytic dual certificate for rank-1 pairs with uniform overlaps.

    X_a is E_a normalized to trace 1/(2d), likewise Y_b, and
    N = (1 + 1/sqrt(d)) / (2d) times the identity. The operator
    inequalities N >= X_a + Y_b are verified through the closed-form
    largest eigenvalue of a rank-1 sum.
    """
    cert = certify_maximal(e, f, p=1.0, cert_tol=cert_tol)
    if not cert.is_maximal:
        raise NotMaximalPair(
            f"pair is not maximally incompatible (rank1_ok={cert.rank1_ok}, "
            f"overlap deviation={cert.overlap_deviation:.3e})"
        )
    d = e.dim
    x_ops = tuple(op / (2.0 * d * np.trace(op).real) for op in e.operators)
    y_ops = tuple(op / (2.0 * d * np.trace(op).real) for op in f.operators)
    n_op = universal_lower_bound(d) / d * np.eye(d, dtype=np.complex128)
    normalization = sum(
        float(np.trace(xa @ ea).real) for xa, ea in zip(x_ops, e.operators)
    ) + sum(float(np.trace(yb @ fb).real) for yb, fb in zip(y_ops, f.operators))

    fe = Rank1Form.from_povm(e)
    ff = Rank1Form.from_povm(f)
    overlaps = np.abs(fe.vectors.conj().T @ ff.vectors)
    bound = universal_lower_bound(d) / d
    margin = math.inf
    w = 1.0 / (2.0 * d)
    for c in overlaps.ravel():
        eta_plus, _ = linalg.rank1_sum_spectrum(w, w, min(c, 1.0))
        margin = min(margin, bound - eta_plus)
    return DualCertificate(
        x_ops=x_ops,
        y_ops=y_ops,
        n_op=n_op,
        trace_n=float(np.trace(n_op).real),
        normalization=normalization,
        dominance_margin=margin,
    )


def sdp_problem_dict(e: Povm, f: Povm) -> dict:
    """The robustness program in a portable JSON-ready form.

    Blocks are labelled complex Hermitian cones; equality constraints are
    sparse triplets (row, column, value) over the concatenated real
    coordinates of all blocks (per block: diagonal first, then sqrt(2) *
    real then sqrt(2) * imaginary upper-triangular entries, row-major).
    The objective maximizes the scalar block labelled "eta".
    """
    _check_pair(e, f)
    program, layout = _build_program(e, f)
    n_e, n_f = layout["n_e"], layout["n_f"]
    labels = [f"G[{a},{b}]" for a in range(n_e) for b in range(n_f)]
    labels += [f"slack_e[{a}]" for a in range(n_e)]
    labels += [f"slack_f[{b}]" for b in range(n_f)]
    labels += ["eta"]
    rows, cols = np.nonzero(program.a_mat)
    entries = [
        [int(r), int(c), float(program.a_mat[r, c])] for r, c in zip(rows, cols)
    ]
    return {
        "objective": "maximize eta",
        "dimension": layout["d"],
        "n_outcomes": [n_e, n_f],
        "blocks": [
            {"label": lab, "dim": int(s)} for lab, s in zip(labels, program.block_dims)
        ],
        "coordinate_convention": (
            "per block: diagonal (real), then sqrt(2)*Re upper triangle row-major, "
            "then sqrt(2)*Im upper triangle row-major"
        ),
        "equalities": {
            "rows": int(program.b.size),
            "cols": int(program.n_vec),
            "entries": entries,
            "rhs": [float(v) for v in program.b],
        },
    }
