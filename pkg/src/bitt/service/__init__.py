"""FastAPI service: pydantic schemas, endpoint wiring, app-layer ops."""

from .app import app, create_app

__all__ = ["app", "create_app"]
