"""Service handlers: pure functions from request models to response models.

The FastAPI routes and the command-line client both call these, so a CLI
run and an HTTP call compute identical results. Handlers raise the
package's exception types; transports translate them.
"""

from __future__ import annotations

import numpy as np

from .. import __version__, bounds, fixtures, incompat, povm as povm_mod, serialize
from ..povm import KrausChannel, Povm
from ..robustness import eta as eta_mod
from . import models


def _matrix_pairs(mat: np.ndarray) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in mat.ravel()]


def health() -> models.HealthResponse:
    return models.HealthResponse(status="ok", version=__version__)


def compute_upsilon(req: models.UpsilonRequest) -> models.UpsilonResponse:
    e = req.e.to_povm()
    f = req.f.to_povm()
    p = serialize.parse_p(req.p)
    if req.method == "rank1":
        result = incompat.upsilon_rank1(e, f, p)
    else:
        result = incompat.upsilon(e, f, p)
    return models.UpsilonResponse(
        value=result.value,
        p=serialize.format_p(p),
        method=result.method,
        per_pair_terms=[[float(v) for v in row] for row in result.per_pair_terms],
    )


def compute_eta_g(req: models.EtaGRequest) -> models.EtaGResponse:
    e = req.e.to_povm()
    f = req.f.to_povm()
    sol = eta_mod.eta_g_solve(
        e, f, tol=req.tol, gap_tol=req.gap_tol, max_iterations=req.max_iterations
    )
    pr = sol.primal_report
    dr = sol.dual_report
    resp = models.EtaGResponse(
        eta=sol.eta,
        trace_n=dr.trace_n,
        gap=sol.gap,
        universal_lower_bound=eta_mod.universal_lower_bound(e.dim),
        converged=sol.converged,
        status=sol.status,
        iterations=sol.iterations,
        primal_residuals=models.PrimalResidualPayload(
            g_min_eigenvalue=pr.g_min_eigenvalue,
            slack_e_min_eigenvalue=pr.slack_e_min_eigenvalue,
            slack_f_min_eigenvalue=pr.slack_f_min_eigenvalue,
            completeness_residual=pr.completeness_residual,
            max_violation=pr.max_violation,
        ),
        dual_residuals=models.DualResidualPayload(
            x_min_eigenvalue=dr.x_min_eigenvalue,
            y_min_eigenvalue=dr.y_min_eigenvalue,
            dominance_min_eigenvalue=dr.dominance_min_eigenvalue,
            normalization=dr.normalization,
            n_hermiticity_defect=dr.n_hermiticity_defect,
            trace_n=dr.trace_n,
            max_violation=dr.max_violation,
        ),
    )
    if req.include_operators:
        resp.g_operators = [
            [_matrix_pairs(sol.g_blocks[a, b]) for b in range(f.n_outcomes)]
            for a in range(e.n_outcomes)
        ]
        resp.x_dual = [_matrix_pairs(x) for x in sol.x_dual]
        resp.y_dual = [_matrix_pairs(y) for y in sol.y_dual]
        resp.n_dual = _matrix_pairs(sol.n_dual)
    return resp


def compute_certify(req: models.CertifyRequest) -> models.CertifyResponse:
    e = req.e.to_povm()
    f = req.f.to_povm()
    p = serialize.parse_p(req.p)
    cert = incompat.certify_maximal(e, f, p, cert_tol=req.cert_tol)
    return models.CertifyResponse(
        is_maximal=cert.is_maximal,
        max_value=cert.max_value,
        rank1_ok=cert.rank1_ok,
        overlap_deviation=cert.overlap_deviation,
        cert_tol=cert.cert_tol,
        upsilon_value=cert.upsilon_value,
        upsilon_gap=cert.upsilon_gap,
    )


def compute_validate(req: models.ValidateRequest) -> models.ValidateResponse:
    report = povm_mod.validate(req.povm.to_povm())
    return models.ValidateResponse(
        ok=report.ok,
        dim=report.dim,
        n_outcomes=report.n_outcomes,
        min_eigenvalues=list(report.min_eigenvalues),
        hermiticity_defects=list(report.hermiticity_defects),
        completeness_residual=report.completeness_residual,
        zero_operator_indices=list(report.zero_operator_indices),
    )


def compute_curves(req: models.CurvesRequest) -> models.CurvesResponse:
    p = serialize.parse_p(req.p)
    table = bounds.emit_curves(req.kind, req.dim, p, req.grid_n, c_bar=req.c_bar)
    return models.CurvesResponse(
        kind=table.kind,
        columns=list(table.columns),
        rows=[[float(v) for v in row] for row in table.rows],
        params={k: (serialize.format_p(v) if k == "p" else v) for k, v in table.params.items()},
        csv=serialize.curve_table_to_csv(table),
    )


def compute_fixtures(req: models.FixtureRequest) -> models.FixtureResponse:
    objects = fixtures.fixture_generate(req.kind, d=req.dim, n=req.n, seed=req.seed)
    files = {}
    for name, obj in objects.items():
        if isinstance(obj, Povm):
            files[name] = models.FixtureFile(kind="povm", json_text=serialize.povm_to_json(obj))
        elif isinstance(obj, KrausChannel):
            files[name] = models.FixtureFile(
                kind="channel", json_text=serialize.channel_to_json(obj)
            )
        else:  # pragma: no cover - fixture_generate only builds the two kinds
            raise TypeError(f"unexpected fixture object {type(obj)!r}")
    return models.FixtureResponse(files=files)


def compute_preprocess_demo(req: models.PreprocessDemoRequest) -> models.PreprocessDemoResponse:
    p = serialize.parse_p(req.p)
    values = fixtures.preprocess_demo_values(p)
    return models.PreprocessDemoResponse(
        p=serialize.format_p(p), before=values["before"], after=values["after"]
    )
