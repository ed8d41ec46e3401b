"""Size-partitioned code-search harvesting."""

from __future__ import annotations

from .backend import (
    BackendError,
    GitHubBackend,
    HarvestedFile,
    PageOutOfRange,
    SearchBackend,
    SearchPage,
    SimulatedBackend,
    TransientBackendError,
    query_string,
)
from .sampling import (
    HarvestPlan,
    HarvestReport,
    HarvestSession,
    RangeResult,
    RateLimiter,
    RequestRecord,
    SimulatedClock,
    SystemClock,
    execute,
    max_in_window,
    plan,
    refine,
    write_harvest,
)

__all__ = [
    "BackendError",
    "GitHubBackend",
    "HarvestPlan",
    "HarvestReport",
    "HarvestSession",
    "HarvestedFile",
    "PageOutOfRange",
    "RangeResult",
    "RateLimiter",
    "RequestRecord",
    "SearchBackend",
    "SearchPage",
    "SimulatedBackend",
    "SimulatedClock",
    "SystemClock",
    "TransientBackendError",
    "execute",
    "max_in_window",
    "plan",
    "query_string",
    "refine",
    "write_harvest",
]
