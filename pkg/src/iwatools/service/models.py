"""Pydantic request/response models for the HTTP service.

Payload internals (series, measures, matrices) stay schemaless dicts validated
by the codecs in jsonio; the models pin down the envelope shapes."""

from __future__ import annotations

from pydantic import BaseModel, Field


class SeriesRequest(BaseModel):
    series: dict


class DivideRequest(BaseModel):
    series: dict
    divisor: dict


class PrepareResponse(BaseModel):
    mu: int
    lam: int
    P: dict
    U: dict


class MuLambdaResponse(BaseModel):
    mu: int
    lam: int
    lambda_at_window_edge: bool


class DivideResponse(BaseModel):
    quotient: dict
    remainder: dict


class InvariantsRequest(BaseModel):
    series: dict
    levels: str = Field(description="range like '2..8' or a single level")


class InvariantRow(BaseModel):
    n: int
    lhs: int
    rhs: int
    match: bool


class InvariantsResponse(BaseModel):
    rows: list[InvariantRow]


class MahlerRequest(BaseModel):
    p: int = 2
    N: int = 64
    M: int = 64
    points: list[dict] = Field(default_factory=list,
                               description="[{a: int, coef: int}]")


class MeasureResponse(BaseModel):
    measure: dict


class MeasureRequest(BaseModel):
    measure: dict


class PushforwardRequest(BaseModel):
    measure: dict
    u: int


class MomentRequest(BaseModel):
    measure: dict
    m: int


class ScalarResponse(BaseModel):
    value: dict


class ColemanRequest(BaseModel):
    series: dict


class LpRequest(BaseModel):
    measure: dict
    chi: list[int]
    s: int
    kappa_gen: int = 5


class IwfunRequest(BaseModel):
    measure: dict
    chi: list[int]
    kappa_gen: int = 5


class SeriesOverDResponse(BaseModel):
    series: dict


class CharidealRequest(BaseModel):
    matrix: dict


class CharidealResponse(BaseModel):
    mu: int
    lam: int = Field(serialization_alias="lambda")
    P: dict


class EulerRequest(BaseModel):
    scenario: dict
    check: str = Field(description="telescope | invariance | kappa")
    r: list[int] = Field(default_factory=list)


class EulerResponse(BaseModel):
    ok: bool
    detail: dict = Field(default_factory=dict)


class ErrorBody(BaseModel):
    error: dict
