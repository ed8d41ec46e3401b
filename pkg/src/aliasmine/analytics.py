"""Aggregate statistics over a corpus store.

Every function returns a :class:`Table` built from a sorted, deterministic
walk of the store, so two runs over the same snapshot serialize to the same
bytes.
"""

from __future__ import annotations

import csv
import fnmatch
import json
import math
import random
import re
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import IO, Iterable

from .classifier import PRACTICE_ORDER, compression_ratio, is_transform_pipeline
from .corpus import DEFAULT_PATTERNS, CorpusStore
from .knowledge import KnowledgeBase, default_kb

__all__ = [
    "Table",
    "command_breakdown",
    "compression_histogram",
    "histogram_median",
    "pipeline_command_shares",
    "pipeline_flows",
    "practice_matrix",
    "provenance_summary",
    "representative_sample",
    "top_arguments",
    "top_commands",
    "top_names",
    "write_table",
]


@dataclass
class Table:
    columns: tuple[str, ...]
    rows: list[tuple]
    meta: dict = field(default_factory=dict)

    def records(self) -> list[dict]:
        return [dict(zip(self.columns, row)) for row in self.rows]


def pct(part: int, whole: int) -> float:
    return round(100.0 * part / whole, 2) if whole else 0.0


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def write_table(table: Table, out: IO[str], fmt: str = "csv") -> None:
    """CSV with a header row, or one JSON object per row."""
    if fmt == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([_cell(v) for v in row])
    elif fmt == "jsonl":
        for rec in table.records():
            out.write(json.dumps(rec, ensure_ascii=False, separators=(",", ":")) + "\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")


def _ranked(counts: Counter, k: int | None) -> list[tuple[str, int]]:
    items = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return items if k is None else items[:k]


def _top(counts: Counter, total: int, k: int | None, label: str) -> Table:
    return Table(
        (label, "count", "percent"),
        [(tok, n, pct(n, total)) for tok, n in _ranked(counts, k)],
    )


# ---------------------------------------------------------------------------
# frequency tables
# ---------------------------------------------------------------------------


def top_names(store: CorpusStore, k: int | None = 20) -> Table:
    counts = Counter(dict(store.conn.execute("SELECT name, COUNT(*) FROM aliases GROUP BY name")))
    return _top(counts, sum(counts.values()), k, "name")


def top_commands(store: CorpusStore, k: int | None = 20) -> Table:
    counts = Counter(dict(store.conn.execute("SELECT name, COUNT(*) FROM commands GROUP BY name")))
    return _top(counts, sum(counts.values()), k, "command")


def top_arguments(store: CorpusStore, k: int | None = 20) -> Table:
    counts = Counter(dict(store.conn.execute("SELECT text, COUNT(*) FROM arguments GROUP BY text")))
    return _top(counts, sum(counts.values()), k, "argument")


def _command_uses(store: CorpusStore) -> Iterable[tuple[int, str, str, str, tuple[str, ...]]]:
    """(alias_id, alias name, alias value, command name, argument tuple) per command row."""
    args: dict[int, list[str]] = defaultdict(list)
    for command_id, text in store.conn.execute(
        "SELECT command_id, text FROM arguments ORDER BY command_id, position"
    ):
        args[command_id].append(text)
    for command_id, alias_id, aname, value, cname in store.conn.execute(
        "SELECT c.command_id, a.alias_id, a.name, a.value, c.name FROM commands c "
        "JOIN aliases a ON a.alias_id = c.alias_id ORDER BY c.command_id"
    ):
        yield alias_id, aname, value, cname, tuple(args.get(command_id, ()))


def command_breakdown(
    store: CorpusStore, command: str, k_args: int | None = 10, k_aliases: int | None = 3
) -> Table:
    """Argument combinations of one command, each with its most frequent alias names.

    A combination is the exact ordered argument sequence; ``commit`` and
    ``commit -m`` are different rows.
    """
    combos: Counter = Counter()
    names: dict[tuple[str, ...], Counter] = defaultdict(Counter)
    total = 0
    for _, aname, _, cname, args in _command_uses(store):
        if cname != command:
            continue
        total += 1
        combos[args] += 1
        names[args][aname] += 1
    rows = []
    ranked = sorted(combos.items(), key=lambda kv: (-kv[1], kv[0]))
    for args, n in ranked if k_args is None else ranked[:k_args]:
        for aname, m in _ranked(names[args], k_aliases):
            rows.append((command, " ".join(args), n, pct(n, total), aname, m, pct(m, n)))
    return Table(
        ("command", "arguments", "count", "percent", "alias", "alias_count", "alias_percent"),
        rows,
    )


# ---------------------------------------------------------------------------
# compression
# ---------------------------------------------------------------------------


def _ratios(store: CorpusStore) -> list[float]:
    return [compression_ratio(a) for _, a in store.iter_aliases()]


def _bin_index(ratio: float, per_decade: int) -> int:
    # nudge so that exact powers land in the bin they open
    return math.floor(math.log10(ratio) * per_decade + 1e-9)


def compression_histogram(store_or_ratios, log_bins: int = 5) -> Table:
    """Log-spaced histogram of compression ratios, ``log_bins`` bins per decade.

    Bins are half-open ``[lo, hi)``. Aliases with an empty value have ratio 0
    and are counted in a leading row with ``lo = hi = 0``. The
    ``contains_one`` column marks the bin holding ratio 1.
    """
    if log_bins < 1:
        raise ValueError("log_bins must be positive")
    ratios = (
        _ratios(store_or_ratios)
        if isinstance(store_or_ratios, CorpusStore)
        else list(store_or_ratios)
    )
    zeros = sum(1 for r in ratios if r <= 0)
    idx = Counter(_bin_index(r, log_bins) for r in ratios if r > 0)
    # always span the bin holding ratio 1 so the reference marker is present
    lo_i, hi_i = min(min(idx, default=0), 0), max(max(idx, default=log_bins - 1), 0)
    rows: list[tuple] = []
    if zeros:
        rows.append((0.0, 0.0, zeros, False))
    for i in range(lo_i, hi_i + 1):
        lo, hi = 10 ** (i / log_bins), 10 ** ((i + 1) / log_bins)
        rows.append((lo, hi, idx.get(i, 0), i == 0))
    return Table(
        ("lo", "hi", "count", "contains_one"),
        rows,
        {"total": len(ratios), "bins_per_decade": log_bins},
    )


def histogram_median(table: Table) -> float:
    """Median estimated from histogram rows (geometric bin midpoint)."""
    total = sum(row[2] for row in table.rows)
    if not total:
        raise ValueError("empty histogram")
    rank = (total + 1) // 2
    seen = 0
    for lo, hi, count, _ in table.rows:
        seen += count
        if seen >= rank:
            return math.sqrt(lo * hi) if lo > 0 else 0.0
    raise AssertionError("unreachable")


# ---------------------------------------------------------------------------
# pipelines
# ---------------------------------------------------------------------------


def pipeline_flows(store: CorpusStore, n: int = 3, min_share: float = 0.0) -> Table:
    """Edges between consecutive commands of pure pipelines with ``n`` commands.

    ``share`` is the edge weight over the source command's outflow at that
    position; edges with a smaller share than ``min_share`` are dropped.
    """
    edges: Counter = Counter()
    pipelines = 0
    for _, alias in store.iter_aliases():
        if len(alias.commands) != n or is_transform_pipeline(alias) is None:
            continue
        pipelines += 1
        names = [c.name for c in alias.commands]
        for i in range(n - 1):
            edges[(i, names[i], names[i + 1])] += 1
    outflow: Counter = Counter()
    for (i, src, _), w in edges.items():
        outflow[(i, src)] += w
    rows = []
    for (i, src, dst), w in sorted(edges.items(), key=lambda kv: (kv[0][0], -kv[1], kv[0][1:])):
        share = w / outflow[(i, src)]
        if share + 1e-12 >= min_share:
            rows.append((i, src, dst, w, round(share, 4)))
    return Table(
        ("position", "source", "target", "weight", "share"), rows, {"pipelines": pipelines}
    )


def pipeline_command_shares(store: CorpusStore, k: int | None = 20) -> Table:
    """Fraction of pure pipelines (any length) that use each command."""
    uses: Counter = Counter()
    pipelines = 0
    for _, alias in store.iter_aliases():
        if is_transform_pipeline(alias) is None:
            continue
        pipelines += 1
        uses.update({c.name for c in alias.commands})
    return Table(
        ("command", "pipelines", "percent"),
        [(c, m, pct(m, pipelines)) for c, m in _ranked(uses, k)],
        {"pipelines": pipelines},
    )


# ---------------------------------------------------------------------------
# provenance
# ---------------------------------------------------------------------------

_WORD_RE = re.compile(r"[^\w]+")


def file_bucket(name: str, patterns: Iterable[str] = DEFAULT_PATTERNS) -> str | None:
    """First pattern matching the lowercased file name, in table order."""
    lowered = name.lower()
    for pattern in patterns:
        if fnmatch.fnmatchcase(lowered, pattern):
            return pattern
    return None


def description_words(text: str, stopwords: frozenset[str]) -> set[str]:
    words = _WORD_RE.sub(" ", (text or "").lower()).split()
    return {w for w in words if w not in stopwords and not w.isdigit()}


def provenance_summary(
    store: CorpusStore, kb: KnowledgeBase | None = None, k: int | None = 10
) -> tuple[Table, Table]:
    """File-name pattern table and repository-description word table.

    Each file lands in the first matching pattern only, so pattern shares
    never double count. A repository counts once for every distinct word in
    its description.
    """
    kb = kb or default_kb()
    per_file = dict(
        store.conn.execute("SELECT file_id, COUNT(*) FROM aliases GROUP BY file_id")
    )
    total_files = total_aliases = 0
    files: Counter = Counter()
    aliases: Counter = Counter()
    repo_aliases: Counter = Counter()
    for file_id, name, repo_id in store.conn.execute(
        "SELECT file_id, name, repo_id FROM files ORDER BY file_id"
    ):
        n = per_file.get(file_id, 0)
        total_files += 1
        total_aliases += n
        if repo_id is not None:
            repo_aliases[repo_id] += n
        bucket = file_bucket(name)
        if bucket is not None:
            files[bucket] += 1
            aliases[bucket] += n
    pattern_rows = [
        (p, files[p], pct(files[p], total_files), aliases[p], pct(aliases[p], total_aliases))
        for p in DEFAULT_PATTERNS
    ]
    patterns = Table(
        ("pattern", "files", "files_percent", "aliases", "aliases_percent"), pattern_rows
    )

    repos: Counter = Counter()
    word_aliases: Counter = Counter()
    total_repos = 0
    for repo_id, desc in store.conn.execute(
        "SELECT repo_id, description FROM repos ORDER BY repo_id"
    ):
        total_repos += 1
        for word in description_words(desc, kb.stopwords):
            repos[word] += 1
            word_aliases[word] += repo_aliases[repo_id]
    word_rows = [
        (w, n, pct(n, total_repos), word_aliases[w], pct(word_aliases[w], total_aliases))
        for w, n in _ranked(repos, k)
    ]
    words = Table(("word", "repos", "repos_percent", "aliases", "aliases_percent"), word_rows)
    return patterns, words


# ---------------------------------------------------------------------------
# practices by command
# ---------------------------------------------------------------------------


def practice_matrix(
    store: CorpusStore,
    labels: dict[int, list[tuple[str, str, bool]]] | None = None,
    *,
    k: int | None = None,
    min_percent: float = 1.0,
) -> Table:
    """Per command, the share of its occurrences inside aliases with each practice.

    Cells at or below ``min_percent`` are left empty. A command occurrence is
    one command row; it counts towards every practice of its alias.
    """
    labels = store.labels() if labels is None else labels
    if not labels:
        return Table(("command", "occurrences", *[p.value for p in PRACTICE_ORDER]), [])
    occurrences: Counter = Counter()
    hits: dict[str, Counter] = defaultdict(Counter)
    ratios: dict[str, list[float]] = defaultdict(list)
    for alias_id, alias in store.iter_aliases():
        kinds = {entry[0] for entry in labels.get(alias_id, ())}
        ratio = compression_ratio(alias)
        for cmd in alias.commands:
            occurrences[cmd.name] += 1
            ratios[cmd.name].append(ratio)
            for kind in kinds:
                hits[cmd.name][kind] += 1
    rows = []
    for cmd, n in _ranked(occurrences, k):
        cells = []
        for practice in PRACTICE_ORDER:
            share = pct(hits[cmd][practice.value], n)
            cells.append(share if share > min_percent else None)
        values = sorted(ratios[cmd])
        rows.append((cmd, n, *cells, round(values[len(values) // 2], 2)))
    return Table(
        ("command", "occurrences", *[p.value for p in PRACTICE_ORDER], "median_compression"),
        rows,
    )


# ---------------------------------------------------------------------------
# representative sample
# ---------------------------------------------------------------------------


def representative_sample(
    store: CorpusStore,
    n_cmds: int = 50,
    n_args: int = 10,
    n_aliases: int = 3,
    long_tail: int = 200,
    seed: int = 0,
) -> Table:
    """Top aliases per top argument combination per top command, plus a long tail.

    The long tail is a uniform sample, drawn with ``random.Random(seed)``,
    of definitions that occur exactly once in the corpus and were not
    already selected.
    """
    definitions: Counter = Counter()
    for name, value, n in store.conn.execute(
        "SELECT name, value, COUNT(*) FROM aliases GROUP BY name, value"
    ):
        definitions[(name, value)] = n

    cmd_counts: Counter = Counter()
    combo_counts: dict[str, Counter] = defaultdict(Counter)
    combo_defs: dict[tuple[str, tuple[str, ...]], Counter] = defaultdict(Counter)
    for _, aname, value, cname, args in _command_uses(store):
        cmd_counts[cname] += 1
        combo_counts[cname][args] += 1
        combo_defs[(cname, args)][(aname, value)] += 1

    chosen: dict[tuple[str, str], tuple] = {}
    for cname, _ in _ranked(cmd_counts, n_cmds):
        combos = sorted(combo_counts[cname].items(), key=lambda kv: (-kv[1], kv[0]))[:n_args]
        for args, _ in combos:
            ranked = sorted(combo_defs[(cname, args)].items(), key=lambda kv: (-kv[1], kv[0]))
            for (aname, value), _ in ranked[:n_aliases]:
                if (aname, value) not in chosen:
                    chosen[(aname, value)] = (
                        "top", cname, " ".join(args), aname, value, definitions[(aname, value)],
                    )

    singles = sorted(d for d, n in definitions.items() if n == 1 and d not in chosen)
    rng = random.Random(seed)
    tail = rng.sample(singles, min(long_tail, len(singles)))
    rows = [row + (seed,) for row in chosen.values()]
    rows += [("long-tail", "", "", aname, value, 1, seed) for aname, value in sorted(tail)]
    return Table(
        ("stratum", "command", "arguments", "name", "value", "count", "seed"),
        rows,
        {"seed": seed, "top": len(chosen), "long_tail": len(tail)},
    )
