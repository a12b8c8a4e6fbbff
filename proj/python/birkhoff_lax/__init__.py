"""Lax pairs and integrability diagnostics for exponential-interaction lattices."""

from ._core import *  # noqa: F401,F403
from ._core import (
    ClassificationError,
    ConfigError,
    DimensionError,
    DomainError,
    InvariantError,
)

__all__ = [name for name in dir() if not name.startswith("_")]
