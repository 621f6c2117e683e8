"""Service API: pydantic schemas, handlers, and the FastAPI application."""

from . import core, models

__all__ = ["core", "models"]
