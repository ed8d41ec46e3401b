"""Size-range sampling plans and their rate-limited execution."""

from __future__ import annotations

import json
import logging
import os
import time
from collections import deque
from dataclasses import dataclass, field, replace
from typing import IO, Iterable, Mapping

from .backend import (
    ORDERS,
    BackendError,
    HarvestedFile,
    PageOutOfRange,
    SearchBackend,
    SearchPage,
    TransientBackendError,
)

log = logging.getLogger(__name__)

WINDOW_SECONDS = 60.0


# ---------------------------------------------------------------------------
# clocks and rate limiting
# ---------------------------------------------------------------------------


class SystemClock:
    def now(self) -> float:
        return time.monotonic()

    def sleep(self, seconds: float) -> None:
        if seconds > 0:
            time.sleep(seconds)


@dataclass
class SimulatedClock:
    """A clock that only moves when someone sleeps."""

    t: float = 0.0

    def now(self) -> float:
        return self.t

    def sleep(self, seconds: float) -> None:
        if seconds > 0:
            self.t += seconds


@dataclass
class RateLimiter:
    """Sliding window: at most ``per_window`` dispatches in any ``window`` seconds."""

    per_window: int
    clock: object
    window: float = WINDOW_SECONDS
    _sent: deque = field(default_factory=deque)

    def acquire(self) -> float:
        """Block until a dispatch is allowed; returns the dispatch time."""
        if self.per_window < 1:
            raise ValueError("rate limit must allow at least one request per window")
        while True:
            now = self.clock.now()
            while self._sent and now - self._sent[0] >= self.window:
                self._sent.popleft()
            if len(self._sent) < self.per_window:
                self._sent.append(now)
                return now
            self.clock.sleep(self._sent[0] + self.window - now)


@dataclass(frozen=True)
class RequestRecord:
    time: float
    lo: int
    hi: int
    order: str
    page: int
    outcome: str


def max_in_window(times: Iterable[float], window: float = WINDOW_SECONDS) -> int:
    """Largest number of timestamps inside any half-open window of ``window`` seconds."""
    ts = sorted(times)
    best = 0
    start = 0
    for end, t in enumerate(ts):
        while t - ts[start] >= window:
            start += 1
        best = max(best, end - start + 1)
    return best


# ---------------------------------------------------------------------------
# plans
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HarvestPlan:
    term: str
    ranges: tuple[tuple[int, int], ...]
    max_size: int
    cap_per_order: int = 1000
    unsamplable: frozenset[tuple[int, int]] = frozenset()

    def __post_init__(self) -> None:
        prev_hi = 0
        for lo, hi in self.ranges:
            if lo > hi or lo != prev_hi + 1:
                raise ValueError(f"ranges must be contiguous and ascending at {lo}..{hi}")
            prev_hi = hi
        if self.ranges and prev_hi != self.max_size:
            raise ValueError("ranges must end at max_size")

    def as_dict(self) -> dict:
        return {
            "term": self.term,
            "max_size": self.max_size,
            "cap_per_order": self.cap_per_order,
            "ranges": [list(r) for r in self.ranges],
            "unsamplable": sorted(list(r) for r in self.unsamplable),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "HarvestPlan":
        return cls(
            term=data["term"],
            ranges=tuple(tuple(r) for r in data["ranges"]),
            max_size=int(data["max_size"]),
            cap_per_order=int(data.get("cap_per_order", 1000)),
            unsamplable=frozenset(tuple(r) for r in data.get("unsamplable", ())),
        )


def plan(term: str, max_size: int, initial_step: int = 100, cap_per_order: int = 1000) -> HarvestPlan:
    """Uniform ranges of ``initial_step`` bytes covering ``1..max_size``."""
    if max_size < 1 or initial_step < 1:
        raise ValueError("max_size and initial_step must be positive")
    ranges = tuple(
        (lo, min(lo + initial_step - 1, max_size)) for lo in range(1, max_size + 1, initial_step)
    )
    return HarvestPlan(term, ranges, max_size, cap_per_order)


def refine(
    current: HarvestPlan,
    counts: Mapping[tuple[int, int], int] | "HarvestReport",
    threshold: int | None = None,
) -> HarvestPlan:
    """Halve every range whose reported total exceeds ``threshold`` (default twice the cap).

    One-byte ranges cannot be split; they are kept and marked unsamplable.
    """
    if isinstance(counts, HarvestReport):
        counts = counts.counts()
    threshold = 2 * current.cap_per_order if threshold is None else threshold
    ranges: list[tuple[int, int]] = []
    unsamplable = set(current.unsamplable)
    for lo, hi in current.ranges:
        total = counts.get((lo, hi))
        if total is None or total <= threshold:
            ranges.append((lo, hi))
        elif lo == hi:
            ranges.append((lo, hi))
            unsamplable.add((lo, hi))
        else:
            mid = (lo + hi) // 2
            ranges.extend([(lo, mid), (mid + 1, hi)])
    return replace(current, ranges=tuple(ranges), unsamplable=frozenset(unsamplable))


# ---------------------------------------------------------------------------
# execution
# ---------------------------------------------------------------------------


@dataclass
class RangeResult:
    lo: int
    hi: int
    total_count: int | None
    retrieved: int
    failed: bool = False
    unsamplable: bool = False

    @property
    def coverage(self) -> float:
        if not self.total_count:
            return 1.0
        return min(1.0, self.retrieved / self.total_count)


@dataclass
class HarvestReport:
    retrieved: int
    estimated_population: int
    coverage: float
    over_count: bool
    ranges: list[RangeResult]
    requests: int

    def counts(self) -> dict[tuple[int, int], int]:
        return {(r.lo, r.hi): r.total_count for r in self.ranges if r.total_count is not None}

    @property
    def failed_ranges(self) -> list[tuple[int, int]]:
        return [(r.lo, r.hi) for r in self.ranges if r.failed]

    def as_dict(self) -> dict:
        return {
            "retrieved": self.retrieved,
            "estimated_population": self.estimated_population,
            "coverage": self.coverage,
            "over_count": self.over_count,
            "requests": self.requests,
            "failed_ranges": [list(r) for r in self.failed_ranges],
            "ranges": [
                {
                    "lo": r.lo,
                    "hi": r.hi,
                    "total_count": r.total_count,
                    "retrieved": r.retrieved,
                    "failed": r.failed,
                    "unsamplable": r.unsamplable,
                }
                for r in self.ranges
            ],
        }


class HarvestSession:
    """Owns the single dispatch queue: rate limit, retries and the request log."""

    def __init__(
        self,
        backend: SearchBackend,
        rate_limit_per_min: int = 30,
        clock=None,
        max_retries: int = 4,
        backoff: float = 2.0,
    ):
        self.backend = backend
        self.clock = clock or SystemClock()
        self.limiter = RateLimiter(rate_limit_per_min, self.clock)
        self.max_retries = max_retries
        self.backoff = backoff
        self.log: list[RequestRecord] = []
        self._surveyed: dict[tuple[int, int], int] = {}

    def request(self, term: str, lo: int, hi: int, order: str, page: int) -> SearchPage:
        """One search with bounded retries and exponential backoff."""
        for attempt in range(self.max_retries + 1):
            t = self.limiter.acquire()
            try:
                result = self.backend.search(term, lo, hi, order, page)
            except TransientBackendError as exc:
                self.log.append(RequestRecord(t, lo, hi, order, page, "retry"))
                if attempt == self.max_retries:
                    raise
                delay = self.backoff * 2**attempt
                log.warning("transient failure on %d..%d (%s); retry in %.1fs", lo, hi, exc, delay)
                self.clock.sleep(delay)
                continue
            except BackendError:
                self.log.append(RequestRecord(t, lo, hi, order, page, "error"))
                raise
            self.log.append(RequestRecord(t, lo, hi, order, page, "ok"))
            return result
        raise AssertionError("unreachable")

    @property
    def dispatch_times(self) -> list[float]:
        return [r.time for r in self.log]

    def survey(self, current: HarvestPlan) -> dict[tuple[int, int], int]:
        """Reported totals for every range, one request per range not seen before."""
        out = {}
        for lo, hi in current.ranges:
            if (lo, hi) not in self._surveyed:
                try:
                    page = self.request(current.term, lo, hi, ORDERS[0], 1)
                except BackendError as exc:
                    log.error("survey of %d..%d failed: %s", lo, hi, exc)
                    continue
                self._surveyed[(lo, hi)] = page.total_count
            out[(lo, hi)] = self._surveyed[(lo, hi)]
        return out

    def refine_until_fixpoint(
        self, current: HarvestPlan, threshold: int | None = None, max_rounds: int = 64
    ) -> HarvestPlan:
        for _ in range(max_rounds):
            nxt = refine(current, self.survey(current), threshold)
            if nxt == current:
                return nxt
            current = nxt
        return current

    def _drain(self, term, lo, hi, order, cap, found: dict) -> int:
        """Fetch pages in ``order`` up to the cap; returns the reported total."""
        total = None
        page = 1
        seen = 0
        while True:
            try:
                result = self.request(term, lo, hi, order, page)
            except PageOutOfRange:
                break
            if total is None:
                total = result.total_count
            for item in result.items:
                found.setdefault(item.identity, item)
            seen += len(result.items)
            if not result.items or seen >= min(total, cap) or len(result.items) < self.backend.page_size:
                break
            page += 1
        return total or 0

    def execute(self, current: HarvestPlan) -> tuple[list[HarvestedFile], HarvestReport]:
        """Query both sort orders per range and union the results by file identity."""
        files: dict[tuple[str, str], HarvestedFile] = {}
        results = []
        for lo, hi in current.ranges:
            found: dict[tuple[str, str], HarvestedFile] = {}
            try:
                total = self._drain(current.term, lo, hi, ORDERS[0], current.cap_per_order, found)
                if len(found) < total:
                    self._drain(current.term, lo, hi, ORDERS[1], current.cap_per_order, found)
            except BackendError as exc:
                log.error("range %d..%d failed: %s", lo, hi, exc)
                results.append(
                    RangeResult(lo, hi, self._surveyed.get((lo, hi)), 0, failed=True,
                                unsamplable=(lo, hi) in current.unsamplable)
                )
                continue
            self._surveyed[(lo, hi)] = total
            new = 0
            for ident, item in found.items():
                if ident not in files:
                    files[ident] = item
                    new += 1
            results.append(
                RangeResult(lo, hi, total, len(found), unsamplable=(lo, hi) in current.unsamplable)
            )
        retrieved = len(files)
        estimate = sum(r.total_count or 0 for r in results)
        raw = retrieved / estimate if estimate else 1.0
        report = HarvestReport(
            retrieved=retrieved,
            estimated_population=estimate,
            coverage=min(1.0, raw),
            over_count=raw > 1.0,
            ranges=results,
            requests=len(self.log),
        )
        return list(files.values()), report


def execute(
    current: HarvestPlan,
    backend: SearchBackend,
    rate_limit_per_min: int = 30,
    clock=None,
    max_retries: int = 4,
    backoff: float = 2.0,
) -> tuple[list[HarvestedFile], HarvestReport]:
    session = HarvestSession(backend, rate_limit_per_min, clock, max_retries, backoff)
    return session.execute(current)


def write_harvest(files: Iterable[HarvestedFile], out: IO[str] | str | os.PathLike) -> int:
    """Harvested files as corpus-ready JSONL, sorted by identity."""
    if isinstance(out, (str, os.PathLike)):
        with open(out, "w", encoding="utf-8") as fh:
            return write_harvest(files, fh)
    n = 0
    for f in sorted(files, key=lambda f: f.identity):
        out.write(json.dumps(f.as_record(), ensure_ascii=False, separators=(",", ":")) + "\n")
        n += 1
    return n
