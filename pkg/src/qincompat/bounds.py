"""Analytic relations between incompatibility, random-access coding and entropic uncertainty.

For rank-1 projective pairs the incompatibility value is a function of the
eigenvector overlaps alone. This module implements the resulting analytic
machinery: the extremal points of the box-constrained simplex slice, the
random-access-code average success probability and the induced
incompatibility lower bound, the Maassen-Uffink uncertainty quantity
-log2(max squared overlap), the uncertainty-parameterized upper and lower
bounds, and tabulated curve data for all of them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import DomainError, NotRank1Projective
from .incompat import max_upsilon
from .povm import Povm, classify, overlap_table

FLOOR_GUARD_REL = 1e-12


def guarded_floor(x: float) -> int:
    """floor(x) with a 1e-12 relative snap so exact integer ratios survive round-off."""
    r = round(x)
    if abs(x - r) <= FLOOR_GUARD_REL * max(1.0, abs(x)):
        return int(r)
    return int(math.floor(x))


def extremal_vector(n: int, s: float, t: float) -> np.ndarray:
    """An extremal point of {x in R^n : 0 <= x_j <= t, sum x = s}.

    All extremal points of that polytope are permutations of the returned
    vector: floor(s/t) entries equal to t, one entry holding the remainder,
    zeros elsewhere.
    """
    if n < 2:
        raise DomainError("the polytope is defined for n >= 2")
    if s <= 0 or t <= 0:
        raise DomainError("s and t must be positive")
    if t * n < s - 1e-12 * max(1.0, abs(s)):
        raise DomainError("infeasible: need t*n >= s")
    m = min(guarded_floor(s / t), n)
    u = np.zeros(n)
    u[:m] = t
    if m < n:
        u[m] = min(max(s - m * t, 0.0), t)
    return u


def h_tilde(t: float, p: float) -> float:
    """Concave overlap-square factor 2**(1/p) * sqrt(t*(1-t)) on [0, 1]."""
    if not (-1e-12 <= t <= 1.0 + 1e-12):
        raise DomainError(f"squared overlap must lie in [0, 1], got {t}")
    t = min(max(t, 0.0), 1.0)
    return linalg.two_pow_inv(p) * math.sqrt(t * (1.0 - t))


def _require_basis_pair(e: Povm, f: Povm) -> None:
    if e.dim != f.dim:
        raise NotRank1Projective("measurements must act on the same dimension")
    for name, m in (("first", e), ("second", f)):
        cls = classify(m)
        if not cls.is_basis:
            raise NotRank1Projective(f"{name} measurement is not rank-1 projective")


@dataclass(frozen=True)
class QracReport:
    """Random-access-code success probability and the induced incompatibility bound."""

    p_ave: float
    c_bar: float
    lower_bound_f: float
    alpha_factor: float
    p: float


def qrac_p_ave(e: Povm, f: Povm, p: float = 1.0) -> QracReport:
    """Average success probability of the optimal two-dit random access code.

    Computed from the operator sup-norms (1/(2 d^2)) * sum ||E_a + F_b||_inf,
    which for basis measurements equals 1/2 + mean overlap / 2. Both
    expressions are evaluated and must agree to 1e-9. The report carries
    the incompatibility lower bound implied by the mean overlap.
    """
    _require_basis_pair(e, f)
    d = e.dim
    norm_sum = 0.0
    for ea in e.operators:
        for fb in f.operators:
            norm_sum += linalg.schatten_norm(ea + fb, math.inf)
    p_ave = norm_sum / (2.0 * d * d)
    table = overlap_table(e, f)
    p_ave_overlap = 0.5 + float(np.sum(table.c)) / (2.0 * d * d)
    if abs(p_ave - p_ave_overlap) > 1e-9:
        raise AssertionError(
            f"norm and overlap expressions disagree: {p_ave} vs {p_ave_overlap}"
        )
    c_bar = 2.0 * p_ave - 1.0
    lower = qrac_lower_bound(p, c_bar, d)
    return QracReport(
        p_ave=p_ave,
        c_bar=c_bar,
        lower_bound_f=lower,
        alpha_factor=_alpha_factor(c_bar, p),
        p=float(p),
    )


def _alpha_factor(c_bar: float, p: float) -> float:
    h = linalg.h_p(c_bar, p)
    return max(h / (1.0 - c_bar), h / c_bar, abs(linalg.h_p_derivative(c_bar, p)))


def qrac_lower_bound(p: float, c_bar: float, d: int) -> float:
    """Incompatibility lower bound as a function of the mean overlap.

    d^2 * h_p(c_bar) - alpha(c_bar) * d * sqrt(d - d^2 c_bar^2), reported
    raw (it may go negative for d >= 3; consumers clamp for plotting). At
    c_bar = 1/sqrt(d) the subtracted term vanishes and the bound equals the
    maximal incompatibility.
    """
    if d < 2:
        raise DomainError("dimension must be >= 2")
    lo, hi = 1.0 / d, 1.0 / math.sqrt(d)
    if not (lo - 1e-9 <= c_bar <= hi + 1e-9):
        raise DomainError(f"mean overlap {c_bar} outside the achievable range [{lo}, {hi}]")
    c_bar = min(max(c_bar, lo), hi)
    variance_term = d - d * d * c_bar * c_bar
    if variance_term < 1e-12 * d:
        # round-off noise at c_bar = 1/sqrt(d) would leak through the sqrt kink
        variance_term = 0.0
    return d * d * linalg.h_p(c_bar, p) - _alpha_factor(c_bar, p) * d * math.sqrt(variance_term)


def uncertainty_tau(e: Povm, f: Povm) -> float:
    """Largest squared overlap between two bases; -log2 of it is the entropy bound."""
    _require_basis_pair(e, f)
    table = overlap_table(e, f)
    return float(np.max(table.t))


def entropy_bound(tau: float) -> float:
    """State-independent entropy-sum bound -log2(tau), in bits."""
    if tau <= 0.0:
        raise DomainError("tau must be positive")
    return -math.log2(tau) + 0.0  # normalize -0.0 at tau = 1


def _validate_tau(tau: float, d: int) -> float:
    if d < 2:
        raise DomainError("dimension must be >= 2")
    lo = 1.0 / d
    if not (lo - 1e-12 <= tau <= 1.0 + 1e-12):
        raise DomainError(f"tau must lie in [1/d, 1] = [{lo}, 1], got {tau}")
    return min(max(tau, lo), 1.0)


def uncertainty_upper_bound(tau: float, d: int, p: float) -> float:
    """Largest incompatibility compatible with a given maximal squared overlap.

    2**(1/p) * [sqrt(tau(1-tau)) + 2 sqrt((1-tau)(d-2+tau))
                + sqrt((d-2+tau)(d^2-3d+3-tau))].

    Equals the d-dimensional maximal value at tau = 1/d and the
    (d-1)-dimensional maximal value at tau = 1; strictly decreasing in
    between.
    """
    tau = _validate_tau(tau, d)
    one_minus = max(0.0, 1.0 - tau)
    rest = d - 2.0 + tau
    last = max(0.0, d * d - 3.0 * d + 3.0 - tau)
    total = (
        math.sqrt(tau * one_minus)
        + 2.0 * math.sqrt(one_minus * rest)
        + math.sqrt(rest * last)
    )
    return linalg.two_pow_inv(p) * total


def uncertainty_multiplicities(tau: float, d: int) -> tuple[int, int]:
    """Floor multiplicities (m_r, m_s) entering the lower bound."""
    tau = _validate_tau(tau, d)
    m_r = guarded_floor((1.0 - tau) / tau)
    m_s = guarded_floor((d - 2.0 + tau) / tau)
    return m_r, m_s


def uncertainty_lower_bound(tau: float, d: int, p: float) -> float:
    """Least incompatibility compatible with a given maximal squared overlap.

    (1 + 2 m_r + m_s) ht(tau) + 2 ht(1 - tau - m_r tau)
        + ht(d - 2 + tau - m_s tau),
    with ht the concave factor of ``h_tilde`` and m_r, m_s the floor
    multiplicities. Matches the upper bound at tau = 1/d, vanishes at
    tau = 1, and is piecewise smooth with kinks where 1/tau crosses
    integers.
    """
    tau = _validate_tau(tau, d)
    m_r, m_s = uncertainty_multiplicities(tau, d)
    rem_r = _snap_remainder(1.0 - tau - m_r * tau, tau)
    rem_s = _snap_remainder(d - 2.0 + tau - m_s * tau, tau)
    return (
        (1.0 + 2.0 * m_r + m_s) * h_tilde(tau, p)
        + 2.0 * h_tilde(rem_r, p)
        + h_tilde(rem_s, p)
    )


def _snap_remainder(rem: float, tau: float) -> float:
    # The sqrt kink amplifies round-off near exact divisors: a remainder of
    # size eps contributes sqrt(eps). Snap float noise to the exact kink value.
    if abs(rem) <= 1e-12:
        return 0.0
    if abs(rem - tau) <= 1e-12:
        return tau
    return min(max(rem, 0.0), tau)


@dataclass(frozen=True)
class UncertaintyReport:
    """Uncertainty quantity of a basis pair with the induced bounds.

    ``lower <= value <= upper`` holds for the incompatibility of any pair
    realizing this tau; the bounds meet at tau = 1/d and the lower one
    vanishes at tau = 1.
    """

    tau: float
    entropy_bound: float
    lower: float
    upper: float
    m_r: int
    m_s: int
    p: float


def uncertainty_report(e: Povm, f: Povm, p: float = 1.0) -> UncertaintyReport:
    """Evaluate tau and both incompatibility bounds for a rank-1 projective pair."""
    tau = uncertainty_tau(e, f)
    d = e.dim
    m_r, m_s = uncertainty_multiplicities(tau, d)
    return UncertaintyReport(
        tau=tau,
        entropy_bound=entropy_bound(tau),
        lower=uncertainty_lower_bound(tau, d, p),
        upper=uncertainty_upper_bound(tau, d, p),
        m_r=m_r,
        m_s=m_s,
        p=float(p),
    )


# ---------------------------------------------------------------------------
# Curve tables
# ---------------------------------------------------------------------------

CURVE_KINDS = ("qrac", "uncertainty", "h_p")


@dataclass(frozen=True)
class CurveTable:
    """Column-oriented numeric table with the parameters that generated it."""

    kind: str
    columns: tuple[str, ...]
    rows: np.ndarray  # shape (grid_n, len(columns))
    params: dict


def emit_curves(kind: str, d: int, p: float, grid_n: int, c_bar: float | None = None) -> CurveTable:
    """Tabulate one of the analytic curve families on a uniform grid.

    kind = "uncertainty": (tau, entropy_bound, lower, upper) over
    tau in [1/d, 1]; the two bound columns delimit the attainable region.

    kind = "qrac": (c_bar, lower_bound_f) over the achievable mean-overlap
    range [1/d, 1/sqrt(d)]; the bound is reported raw (possibly negative).

    kind = "h_p": (c, h_p, tangent, chord) over c in [0, 1]; tangent is the
    concavity upper envelope at the supplied c_bar and chord is the
    straight-line lower envelope through the endpoints.
    """
    if grid_n < 2:
        raise DomainError("grid must have at least 2 points")
    if kind == "uncertainty":
        taus = np.linspace(1.0 / d, 1.0, grid_n)
        rows = np.empty((grid_n, 4))
        for i, tau in enumerate(taus):
            rows[i] = (
                tau,
                entropy_bound(tau),
                uncertainty_lower_bound(tau, d, p),
                uncertainty_upper_bound(tau, d, p),
            )
        params = {"d": d, "p": p, "log_base": 2}
        return CurveTable(kind=kind, columns=("tau", "entropy_bound", "lower", "upper"), rows=rows, params=params)
    if kind == "qrac":
        grid = np.linspace(1.0 / d, 1.0 / math.sqrt(d), grid_n)
        rows = np.empty((grid_n, 2))
        for i, cb in enumerate(grid):
            rows[i] = (cb, qrac_lower_bound(p, cb, d))
        return CurveTable(kind=kind, columns=("c_bar", "lower_bound_f"), rows=rows, params={"d": d, "p": p})
    if kind == "h_p":
        cb = 0.5 if c_bar is None else float(c_bar)
        if not (0.0 < cb < 1.0):
            raise DomainError("c_bar for the h_p curve must lie strictly inside (0, 1)")
        h_cb = linalg.h_p(cb, p)
        slope_tangent = linalg.h_p_derivative(cb, p)
        cs = np.linspace(0.0, 1.0, grid_n)
        rows = np.empty((grid_n, 4))
        for i, c in enumerate(cs):
            tangent = h_cb + slope_tangent * (c - cb)
            chord_slope = -h_cb / (1.0 - cb) if c >= cb else h_cb / cb
            chord = h_cb + chord_slope * (c - cb)
            rows[i] = (c, linalg.h_p(c, p), tangent, chord)
        return CurveTable(
            kind=kind,
            columns=("c", "h_p", "tangent", "chord"),
            rows=rows,
            params={"d": d, "p": p, "c_bar": cb},
        )
    raise DomainError(f"unknown curve kind {kind!r}; expected one of {CURVE_KINDS}")
