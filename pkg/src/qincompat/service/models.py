"""Pydantic request/response schemas for the service API.

Measurement payloads mirror the on-disk JSON schema: ``dim`` plus one
row-major list of [re, im] pairs per operator. Schatten exponents travel
as strings or numbers ("inf" for the sup norm) so the wire format stays
strict JSON.
"""

from __future__ import annotations

from pydantic import BaseModel, Field

from .. import serialize
from ..povm import KrausChannel, Povm


class PovmPayload(BaseModel):
    dim: int = Field(ge=1)
    operators: list[list[list[float]]]

    def to_povm(self) -> Povm:
        return serialize.povm_from_dict(self.model_dump())

    @classmethod
    def from_povm(cls, povm: Povm) -> "PovmPayload":
        return cls.model_validate(serialize.povm_to_dict(povm))


class ChannelPayload(BaseModel):
    dim_out: int = Field(ge=1)
    dim_in: int = Field(ge=1)
    kraus: list[list[list[float]]]

    def to_channel(self) -> KrausChannel:
        return serialize.channel_from_dict(self.model_dump())

    @classmethod
    def from_channel(cls, channel: KrausChannel) -> "ChannelPayload":
        return cls.model_validate(serialize.channel_to_dict(channel))


class UpsilonRequest(BaseModel):
    e: PovmPayload
    f: PovmPayload
    p: float | str = 1
    method: str = Field(default="dense", pattern="^(dense|rank1)$")


class UpsilonResponse(BaseModel):
    value: float
    p: str
    method: str
    per_pair_terms: list[list[float]]


class EtaGRequest(BaseModel):
    e: PovmPayload
    f: PovmPayload
    tol: float = Field(default=1e-8, gt=0)
    gap_tol: float = Field(default=1e-6, gt=0)
    max_iterations: int = Field(default=200, ge=1)
    include_operators: bool = False


class PrimalResidualPayload(BaseModel):
    g_min_eigenvalue: float
    slack_e_min_eigenvalue: float
    slack_f_min_eigenvalue: float
    completeness_residual: float
    max_violation: float


class DualResidualPayload(BaseModel):
    x_min_eigenvalue: float
    y_min_eigenvalue: float
    dominance_min_eigenvalue: float
    normalization: float
    n_hermiticity_defect: float
    trace_n: float
    max_violation: float


class EtaGResponse(BaseModel):
    eta: float
    trace_n: float
    gap: float
    universal_lower_bound: float
    converged: bool
    status: str
    iterations: int
    primal_residuals: PrimalResidualPayload
    dual_residuals: DualResidualPayload
    g_operators: list[list[list[list[float]]]] | None = None
    x_dual: list[list[list[float]]] | None = None
    y_dual: list[list[list[float]]] | None = None
    n_dual: list[list[float]] | None = None


class CertifyRequest(BaseModel):
    e: PovmPayload
    f: PovmPayload
    p: float | str = 1
    cert_tol: float = Field(default=1e-7, gt=0)


class CertifyResponse(BaseModel):
    is_maximal: bool
    max_value: float
    rank1_ok: bool
    overlap_deviation: float
    cert_tol: float
    upsilon_value: float | None
    upsilon_gap: float | None


class ValidateRequest(BaseModel):
    povm: PovmPayload


class ValidateResponse(BaseModel):
    ok: bool
    dim: int
    n_outcomes: int
    min_eigenvalues: list[float]
    hermiticity_defects: list[float]
    completeness_residual: float
    zero_operator_indices: list[int]


class CurvesRequest(BaseModel):
    kind: str = Field(pattern="^(qrac|uncertainty|h_p)$")
    dim: int = Field(ge=2)
    p: float | str = 1
    grid_n: int = Field(default=101, ge=2)
    c_bar: float | None = None


class CurvesResponse(BaseModel):
    kind: str
    columns: list[str]
    rows: list[list[float]]
    params: dict
    csv: str


class FixtureRequest(BaseModel):
    kind: str
    dim: int | None = None
    n: int | None = None
    seed: int | None = None


class FixtureFile(BaseModel):
    kind: str  # "povm" or "channel"
    json_text: str


class FixtureResponse(BaseModel):
    files: dict[str, FixtureFile]


class PreprocessDemoRequest(BaseModel):
    p: float | str = 1


class PreprocessDemoResponse(BaseModel):
    p: str
    before: float
    after: float


class HealthResponse(BaseModel):
    status: str
    version: str
