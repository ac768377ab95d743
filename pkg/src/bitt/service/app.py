"""FastAPI service wrapping the kernel.

Run with `uvicorn bitt.service.app:app`. The CLI mounts this app in
process, so every CLI feature is also reachable over HTTP.
"""

from __future__ import annotations

import sys

from fastapi import FastAPI

from .. import __version__
from . import models, ops
from .models import (
    CheckExprRequest,
    CheckRequest,
    CheckResponse,
    EquivRequest,
    EquivResponse,
    ExprRequest,
    FuzzRequest,
    FuzzResponse,
    HealthResponse,
    InferResponse,
    NormalizeResponse,
    TraceResponse,
)


def create_app() -> FastAPI:
    # Deep derivations recurse heavily; the default limit is too shy.
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 20_000))
    app = FastAPI(title="bitt", version=__version__)

    @app.get("/v1/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(version=__version__)

    @app.post("/v1/check", response_model=CheckResponse)
    def check(req: CheckRequest) -> CheckResponse:
        try:
            defs = ops.check_source(req.source, req.fuel)
        except ops.OpFailed as e:
            return CheckResponse(ok=False, error=models.ErrorOut(**e.info.to_dict()))
        return CheckResponse(ok=True, definitions=defs)

    @app.post("/v1/infer", response_model=InferResponse)
    def infer(req: ExprRequest) -> InferResponse:
        try:
            out = ops.infer_expr(req.expr, req.fuel)
        except ops.OpFailed as e:
            return InferResponse(ok=False, error=models.ErrorOut(**e.info.to_dict()))
        return InferResponse(ok=True, **out)

    @app.post("/v1/check_expr", response_model=InferResponse)
    def check_expr(req: CheckExprRequest) -> InferResponse:
        try:
            out = ops.check_expr(req.expr, req.type, req.fuel)
        except ops.OpFailed as e:
            return InferResponse(ok=False, error=models.ErrorOut(**e.info.to_dict()))
        return InferResponse(ok=True, **out)

    @app.post("/v1/normalize", response_model=NormalizeResponse)
    def normalize(req: ExprRequest) -> NormalizeResponse:
        try:
            out = ops.normalize_expr(req.expr, req.fuel)
        except ops.OpFailed as e:
            return NormalizeResponse(
                ok=False, error=models.ErrorOut(**e.info.to_dict())
            )
        return NormalizeResponse(ok=True, **out)

    @app.post("/v1/equiv", response_model=EquivResponse)
    def equiv(req: EquivRequest) -> EquivResponse:
        try:
            out = ops.equiv_exprs(req.lhs, req.rhs, req.cumul, req.fuel)
        except ops.OpFailed as e:
            return EquivResponse(ok=False, error=models.ErrorOut(**e.info.to_dict()))
        return EquivResponse(ok=True, **out)

    @app.post("/v1/trace", response_model=TraceResponse)
    def trace(req: ExprRequest) -> TraceResponse:
        try:
            out = ops.trace_expr(req.expr, req.fuel)
        except ops.OpFailed as e:
            return TraceResponse(ok=False, error=models.ErrorOut(**e.info.to_dict()))
        return TraceResponse(ok=True, **out)

    @app.post("/v1/fuzz", response_model=FuzzResponse)
    def fuzz(req: FuzzRequest) -> FuzzResponse:
        try:
            report = ops.fuzz(req.count, req.seed, req.max_depth, req.fuel)
        except Exception as e:  # a generator defect is an internal failure
            return FuzzResponse(
                ok=False,
                error=models.ErrorOut(category="internal", message=str(e)),
            )
        return FuzzResponse(ok=report["ok"], report=report)

    return app


app = create_app()
