"""Pydantic request/response schemas for the checking service.

Every response carries format=1 so clients can pin the wire schema.
"""

from __future__ import annotations

from pydantic import BaseModel, Field

from ..reduction import DEFAULT_FUEL

FORMAT = 1


class ErrorOut(BaseModel):
    category: str
    message: str
    kind: str | None = None
    line: int | None = None
    col: int | None = None
    location: list[str] | None = None
    expected: str | None = None
    inferred: str | None = None


class ResponseBase(BaseModel):
    format: int = FORMAT
    ok: bool
    error: ErrorOut | None = None


class CheckRequest(BaseModel):
    source: str
    fuel: int = Field(default=DEFAULT_FUEL, ge=0)


class DefinitionOut(BaseModel):
    name: str
    type: str


class CheckResponse(ResponseBase):
    definitions: list[DefinitionOut] = []


class ExprRequest(BaseModel):
    expr: str
    fuel: int = Field(default=DEFAULT_FUEL, ge=0)


class CheckExprRequest(ExprRequest):
    type: str | None = None


class InferResponse(ResponseBase):
    term: str | None = None
    type: str | None = None


class NormalizeResponse(ResponseBase):
    normal_form: str | None = None
    type: str | None = None


class EquivRequest(BaseModel):
    lhs: str
    rhs: str
    cumul: bool = False
    fuel: int = Field(default=DEFAULT_FUEL, ge=0)


class EquivResponse(ResponseBase):
    equivalent: bool | None = None
    relation: str | None = None


class TraceResponse(ResponseBase):
    type: str | None = None
    trace: dict | None = None
    derivation: dict | None = None


class FuzzRequest(BaseModel):
    count: int = Field(default=500, ge=1)
    seed: int = 0
    max_depth: int = Field(default=4, ge=1)
    fuel: int = Field(default=DEFAULT_FUEL, ge=0)


class FuzzResponse(ResponseBase):
    report: dict | None = None


class HealthResponse(BaseModel):
    format: int = FORMAT
    ok: bool = True
    version: str
