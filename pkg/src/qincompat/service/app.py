"""FastAPI application exposing the incompatibility toolkit.

Run with ``uvicorn qincompat.service.app:app``. Domain errors (bad
measurement files, dimension mismatches, unsupported parameters) map to
HTTP 400 with the message in ``detail``; oversized robustness programs
map to 413.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse

from .. import __version__
from ..errors import (
    DimensionMismatch,
    DomainError,
    NotHermitian,
    NotRank1,
    SizeCapExceeded,
    SolverDidNotConverge,
)
from . import core, models

app = FastAPI(
    title="qincompat",
    version=__version__,
    description="Commutation-based incompatibility measures, robustness SDP and analytic bounds for quantum measurement pairs.",
)

_BAD_REQUEST = (DomainError, DimensionMismatch, NotHermitian, NotRank1, ValueError)


@app.exception_handler(Exception)
async def _domain_error_handler(request: Request, exc: Exception):
    if isinstance(exc, SizeCapExceeded):
        return JSONResponse(status_code=413, content={"detail": str(exc)})
    if isinstance(exc, SolverDidNotConverge):
        return JSONResponse(status_code=500, content={"detail": str(exc)})
    if isinstance(exc, _BAD_REQUEST):
        return JSONResponse(status_code=400, content={"detail": str(exc)})
    raise exc


@app.get("/health", response_model=models.HealthResponse)
def health() -> models.HealthResponse:
    return core.health()


@app.post("/upsilon", response_model=models.UpsilonResponse)
def upsilon(req: models.UpsilonRequest) -> models.UpsilonResponse:
    return core.compute_upsilon(req)


@app.post("/eta-g", response_model=models.EtaGResponse)
def eta_g(req: models.EtaGRequest) -> models.EtaGResponse:
    return core.compute_eta_g(req)


@app.post("/certify", response_model=models.CertifyResponse)
def certify(req: models.CertifyRequest) -> models.CertifyResponse:
    return core.compute_certify(req)


@app.post("/validate", response_model=models.ValidateResponse)
def validate(req: models.ValidateRequest) -> models.ValidateResponse:
    return core.compute_validate(req)


@app.post("/curves", response_model=models.CurvesResponse)
def curves(req: models.CurvesRequest) -> models.CurvesResponse:
    return core.compute_curves(req)


@app.post("/curves.csv", response_class=PlainTextResponse)
def curves_csv(req: models.CurvesRequest) -> str:
    return core.compute_curves(req).csv


@app.post("/fixtures", response_model=models.FixtureResponse)
def fixtures(req: models.FixtureRequest) -> models.FixtureResponse:
    return core.compute_fixtures(req)


@app.post("/preprocess-demo", response_model=models.PreprocessDemoResponse)
def preprocess_demo(req: models.PreprocessDemoRequest) -> models.PreprocessDemoResponse:
    return core.compute_preprocess_demo(req)
