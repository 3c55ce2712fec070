"""Resource bounds shared by the enumeration routines."""

import os

DEFAULT_MAX_POINTS = 1 << 12
MAX_SUBSPACES = 10**7
MAX_GROUP_ORDER = 2 * 10**6


class BoundExceeded(RuntimeError):
    """A computation would exceed a configured resource bound."""


def max_points() -> int:
    raw = os.environ.get("QGRAPH_MAX_POINTS")
    if raw is None:
        return DEFAULT_MAX_POINTS
    value = int(raw)
    if value <= 0:
        raise ValueError("QGRAPH_MAX_POINTS must be positive")
    return value
