"""Code-search backends: the interface, a seeded simulator, and a GitHub client."""

from __future__ import annotations

import bisect
import os
import random
from dataclasses import dataclass, field
from typing import Iterable, Protocol, Sequence

ORDERS = ("newest", "oldest")
GITHUB_SEARCH_URL = "https://api.github.com/search/code"
TOKEN_ENV = "GITHUB_TOKEN"


class BackendError(Exception):
    pass


class PageOutOfRange(BackendError):
    """The requested page lies beyond the per-query result cap."""


class TransientBackendError(BackendError):
    """A failure worth retrying (rate limiting, timeouts, 5xx)."""


@dataclass(frozen=True)
class HarvestedFile:
    repo: str
    path: str
    size: int
    content: str | None = None
    description: str = ""
    stars: int = 0

    @property
    def identity(self) -> tuple[str, str]:
        return (self.repo, self.path)

    def as_record(self) -> dict:
        """Shape accepted by ``corpus.read_files_jsonl``."""
        return {
            "repo": self.repo,
            "path": self.path,
            "name": self.path.rsplit("/", 1)[-1],
            "size": self.size,
            "content": self.content,
            "description": self.description,
            "stars": self.stars,
        }


@dataclass(frozen=True)
class SearchPage:
    total_count: int
    items: tuple[HarvestedFile, ...]


class SearchBackend(Protocol):
    cap: int
    page_size: int

    def search(self, term: str, size_lo: int, size_hi: int, order: str, page: int) -> SearchPage:
        """One page (1-based) of files with ``size_lo <= size <= size_hi``."""
        ...


def query_string(term: str, lo: int, hi: int) -> str:
    return f"{term} language:Shell size:{lo}..{hi}"


def _check(order: str, page: int, cap: int, page_size: int) -> None:
    if order not in ORDERS:
        raise ValueError(f"order must be one of {ORDERS}, got {order!r}")
    if page < 1 or (page - 1) * page_size >= cap:
        raise PageOutOfRange(f"page {page} is beyond the {cap}-result cap")


# ---------------------------------------------------------------------------
# simulator
# ---------------------------------------------------------------------------


@dataclass
class _SimFile:
    size: int
    stamp: int
    repo: str
    path: str


@dataclass
class SimulatedBackend:
    """Deterministic in-memory search service over a synthetic file population.

    ``total_count`` is exact. Only the first ``cap`` results of a query are
    reachable, ordered by a per-file index timestamp. ``fail_requests`` holds
    0-based request numbers that raise :class:`TransientBackendError`;
    ``fail_ranges`` holds ``(lo, hi)`` queries that always fail.
    """

    sizes: Sequence[int]
    seed: int = 0
    cap: int = 1000
    page_size: int = 100
    fail_requests: set[int] = field(default_factory=set)
    fail_ranges: set[tuple[int, int]] = field(default_factory=set)
    requests: int = 0

    def __post_init__(self) -> None:
        rng = random.Random(self.seed)
        stamps = list(range(len(self.sizes)))
        rng.shuffle(stamps)
        files = [
            _SimFile(size, stamp, f"user{i // 3}/dotfiles", f"f{i}/.bashrc")
            for i, (size, stamp) in enumerate(zip(self.sizes, stamps))
        ]
        files.sort(key=lambda f: (f.size, f.stamp))
        self._files = files
        self._keys = [f.size for f in files]

    @classmethod
    def lognormal(
        cls,
        n: int = 10_000,
        *,
        seed: int = 0,
        mu: float = 7.0,
        sigma: float = 0.9,
        max_size: int = 29_000,
        hotspot: tuple[int, int, int] | None = None,
        **kwargs,
    ) -> "SimulatedBackend":
        """Log-normal sizes clipped to ``[1, max_size]``.

        ``hotspot=(lo, hi, k)`` replaces the first ``k`` files with sizes
        drawn uniformly from ``[lo, hi]`` so that range is crowded.
        """
        rng = random.Random(seed)
        sizes = [min(max_size, max(1, round(rng.lognormvariate(mu, sigma)))) for _ in range(n)]
        if hotspot is not None:
            lo, hi, k = hotspot
            for i in range(min(k, n)):
                sizes[i] = rng.randint(lo, hi)
        return cls(sizes=sizes, seed=seed, **kwargs)

    @property
    def population(self) -> int:
        return len(self._files)

    def count(self, lo: int, hi: int) -> int:
        return bisect.bisect_right(self._keys, hi) - bisect.bisect_left(self._keys, lo)

    def identities(self) -> set[tuple[str, str]]:
        return {(f.repo, f.path) for f in self._files}

    def search(self, term: str, size_lo: int, size_hi: int, order: str, page: int) -> SearchPage:
        n = self.requests
        self.requests += 1
        if n in self.fail_requests or (size_lo, size_hi) in self.fail_ranges:
            raise TransientBackendError(f"simulated failure on request {n}")
        _check(order, page, self.cap, self.page_size)
        a = bisect.bisect_left(self._keys, size_lo)
        b = bisect.bisect_right(self._keys, size_hi)
        hits = sorted(self._files[a:b], key=lambda f: f.stamp, reverse=(order == "newest"))
        start = (page - 1) * self.page_size
        end = min(start + self.page_size, self.cap)
        items = tuple(
            HarvestedFile(f.repo, f.path, f.size, _synthetic_content(f)) for f in hits[start:end]
        )
        return SearchPage(total_count=b - a, items=items)


def _synthetic_content(f: _SimFile) -> str:
    line = f"alias f{f.stamp}='ls -l'\n"
    if f.size <= len(line):
        return line[: f.size]
    return line + "#" * (f.size - len(line) - 1) + "\n"


# ---------------------------------------------------------------------------
# GitHub
# ---------------------------------------------------------------------------


class GitHubBackend:
    """Code search over the GitHub REST API.

    The token is read from the ``GITHUB_TOKEN`` environment variable unless
    passed explicitly. ``session`` may be any object with a ``requests``-style
    ``get`` method, which keeps the class testable offline.
    """

    cap = 1000
    page_size = 100

    def __init__(self, token: str | None = None, session=None, fetch_content: bool = True,
                 timeout: float = 30.0):
        if session is None:
            import requests

            session = requests.Session()
        self.session = session
        self.token = token if token is not None else os.environ.get(TOKEN_ENV)
        self.fetch_content = fetch_content
        self.timeout = timeout

    def _headers(self, accept: str) -> dict:
        headers = {"Accept": accept}
        if self.token:
            headers["Authorization"] = f"Bearer {self.token}"
        return headers

    def _get(self, url: str, params: dict | None, accept: str):
        try:
            resp = self.session.get(
                url, params=params, headers=self._headers(accept), timeout=self.timeout
            )
        except OSError as exc:
            raise TransientBackendError(str(exc)) from exc
        if resp.status_code in (403, 429) or resp.status_code >= 500:
            raise TransientBackendError(f"HTTP {resp.status_code} from {url}")
        if resp.status_code == 422:
            raise PageOutOfRange(f"HTTP 422 from {url}")
        if resp.status_code != 200:
            raise BackendError(f"HTTP {resp.status_code} from {url}")
        return resp

    def search(self, term: str, size_lo: int, size_hi: int, order: str, page: int) -> SearchPage:
        _check(order, page, self.cap, self.page_size)
        params = {
            "q": query_string(term, size_lo, size_hi),
            "sort": "indexed",
            "order": "desc" if order == "newest" else "asc",
            "per_page": self.page_size,
            "page": page,
        }
        body = self._get(GITHUB_SEARCH_URL, params, "application/vnd.github+json").json()
        items = []
        for item in body.get("items", ()):
            repo = item.get("repository") or {}
            content = None
            if self.fetch_content and item.get("url"):
                content = self._get(item["url"], None, "application/vnd.github.raw").text
            items.append(
                HarvestedFile(
                    repo=repo.get("full_name", ""),
                    path=item.get("path", ""),
                    size=int(item.get("size") or (len(content.encode()) if content else 0)),
                    content=content,
                    description=repo.get("description") or "",
                    stars=int(repo.get("stargazers_count") or 0),
                )
            )
        return SearchPage(total_count=int(body.get("total_count", 0)), items=tuple(items))


def unique(files: Iterable[HarvestedFile]) -> list[HarvestedFile]:
    seen: dict[tuple[str, str], HarvestedFile] = {}
    for f in files:
        seen.setdefault(f.identity, f)
    return list(seen.values())
