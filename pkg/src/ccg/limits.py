"""Enumeration size limits.

Exhaustive operations (materialization, equilibrium enumeration, potential
sweeps) refuse inputs whose search space exceeds a bound instead of silently
thrashing. The bound defaults to ten million table cells and can be overridden
per call or through the ``CCG_SIZE_LIMIT`` environment variable.
"""

from __future__ import annotations

import os

from .errors import SizeLimitExceededError

DEFAULT_SIZE_LIMIT = 10_000_000

SIZE_LIMIT_ENV = "CCG_SIZE_LIMIT"


def effective_size_limit(limit: int | None = None) -> int:
    if limit is not None:
        return limit
    raw = os.environ.get(SIZE_LIMIT_ENV)
    if raw is not None:
        try:
            value = int(raw)
        except ValueError as exc:
            raise SizeLimitExceededError(f"{SIZE_LIMIT_ENV} must be an integer, got {raw!r}") from exc
        if value <= 0:
            raise SizeLimitExceededError(f"{SIZE_LIMIT_ENV} must be positive, got {value}")
        return value
    return DEFAULT_SIZE_LIMIT


def ensure_within_limit(count: int, limit: int | None, what: str) -> None:
    bound = effective_size_limit(limit)
    if count > bound:
        raise SizeLimitExceededError(f"{what} needs {count} entries, limit is {bound}")
