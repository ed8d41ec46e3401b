"""Relational alias corpus: scanning, deduplicating ingest, export and import.

Tables mirror the schema used for the original study (repositories, files,
aliases, commands, arguments) plus ``labels`` for practice classifications
and ``skips`` for parser tallies. JSONL is the canonical interchange form.
"""

from __future__ import annotations

import base64
import csv
import fnmatch
import hashlib
import json
import logging
import os
import sqlite3
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Iterator

from .parser import AliasDefinition, ParsedCommand, Separator, parse_source

log = logging.getLogger(__name__)

DEFAULT_PATTERNS = ("*alias*", "*bashrc*", "*zshrc*", "*profile*", "git*")
HASH_ALGORITHMS = ("sha1", "sha256")
EXPORT_TABLES = ("repos", "files", "aliases", "commands", "arguments", "labels")
SKIP_REASONS = ("malformed", "non-posix-pair", "alias-flags", "unbalanced-statement")

_SCHEMA = """
CREATE TABLE IF NOT EXISTS meta (
    key TEXT PRIMARY KEY,
    value TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS repos (
    repo_id INTEGER PRIMARY KEY,
    full_name TEXT NOT NULL UNIQUE,
    description TEXT NOT NULL DEFAULT '',
    stars INTEGER NOT NULL DEFAULT 0 CHECK (stars >= 0)
);
CREATE TABLE IF NOT EXISTS files (
    file_id INTEGER PRIMARY KEY,
    repo_id INTEGER REFERENCES repos (repo_id),
    path TEXT NOT NULL,
    name TEXT NOT NULL,
    size INTEGER NOT NULL CHECK (size >= 0),
    content_hash TEXT NOT NULL UNIQUE,
    content BLOB NOT NULL
);
CREATE TABLE IF NOT EXISTS aliases (
    alias_id INTEGER PRIMARY KEY,
    file_id INTEGER NOT NULL REFERENCES files (file_id),
    line INTEGER NOT NULL,
    pair_index INTEGER NOT NULL,
    mid_line INTEGER NOT NULL,
    name TEXT NOT NULL,
    value TEXT NOT NULL,
    n_commands INTEGER NOT NULL
);
CREATE TABLE IF NOT EXISTS commands (
    command_id INTEGER PRIMARY KEY,
    alias_id INTEGER NOT NULL REFERENCES aliases (alias_id),
    position INTEGER NOT NULL,
    name TEXT NOT NULL,
    raw_name TEXT NOT NULL,
    sudo INTEGER NOT NULL,
    env_prefixes TEXT NOT NULL,
    separator_after TEXT NOT NULL,
    UNIQUE (alias_id, position)
);
CREATE TABLE IF NOT EXISTS arguments (
    argument_id INTEGER PRIMARY KEY,
    command_id INTEGER NOT NULL REFERENCES commands (command_id),
    position INTEGER NOT NULL,
    text TEXT NOT NULL,
    UNIQUE (command_id, position)
);
CREATE TABLE IF NOT EXISTS labels (
    alias_id INTEGER NOT NULL REFERENCES aliases (alias_id),
    kind TEXT NOT NULL,
    evidence TEXT NOT NULL,
    typo_fix INTEGER NOT NULL,
    PRIMARY KEY (alias_id, kind)
);
CREATE TABLE IF NOT EXISTS skips (
    reason TEXT PRIMARY KEY,
    count INTEGER NOT NULL
);
CREATE INDEX IF NOT EXISTS idx_aliases_file ON aliases (file_id);
CREATE INDEX IF NOT EXISTS idx_commands_alias ON commands (alias_id);
CREATE INDEX IF NOT EXISTS idx_commands_name ON commands (name);
CREATE INDEX IF NOT EXISTS idx_arguments_command ON arguments (command_id);
"""

# column order of every export, JSONL and CSV alike
EXPORT_COLUMNS = {
    "repos": ("id", "full_name", "description", "stars"),
    "files": (
        "id", "repo", "description", "stars", "path", "name", "size", "content_hash",
        "content", "content_base64",
    ),
    "aliases": ("id", "file", "line", "pair_index", "mid_line", "name", "value", "n_commands"),
    "commands": (
        "id", "alias_ref", "position", "name", "raw_name", "sudo", "env_prefixes", "separator_after",
    ),
    "arguments": ("id", "command_ref", "position", "text"),
    "labels": ("alias_ref", "kind", "evidence", "typo_fix"),
}

_EXPORT_SQL = {
    "repos": "SELECT repo_id, full_name, description, stars FROM repos ORDER BY repo_id",
    "files": (
        "SELECT f.file_id, r.full_name, r.description, r.stars, f.path, f.name, f.size, "
        "f.content_hash, f.content "
        "FROM files f LEFT JOIN repos r ON r.repo_id = f.repo_id ORDER BY f.file_id"
    ),
    "aliases": (
        "SELECT alias_id, file_id, line, pair_index, mid_line, name, value, n_commands "
        "FROM aliases ORDER BY alias_id"
    ),
    "commands": (
        "SELECT command_id, alias_id, position, name, raw_name, sudo, env_prefixes, "
        "separator_after FROM commands ORDER BY command_id"
    ),
    "arguments": (
        "SELECT argument_id, command_id, position, text FROM arguments ORDER BY argument_id"
    ),
    "labels": "SELECT alias_id, kind, evidence, typo_fix FROM labels ORDER BY alias_id, kind",
}


@dataclass
class FileRecord:
    path: str
    name: str
    size: int
    content_hash: str
    file_id: int | None = None
    repo_id: int | None = None


@dataclass(frozen=True)
class RepoRecord:
    full_name: str
    description: str = ""
    stars: int = 0
    repo_id: int | None = None


@dataclass
class IngestReport:
    files_seen: int = 0
    duplicates_dropped: int = 0
    aliases_parsed: int = 0
    statements_skipped: int = 0
    files_failed: int = 0
    skip_reasons: Counter = field(default_factory=Counter)

    @property
    def partial(self) -> bool:
        return self.files_failed > 0

    def as_dict(self) -> dict:
        return {
            "files_seen": self.files_seen,
            "duplicates_dropped": self.duplicates_dropped,
            "aliases_parsed": self.aliases_parsed,
            "statements_skipped": self.statements_skipped,
            "files_failed": self.files_failed,
            "partial": self.partial,
        }


def content_hash(data: bytes, algorithm: str = "sha1") -> str:
    if algorithm not in HASH_ALGORITHMS:
        raise ValueError(f"unsupported hash algorithm {algorithm!r}")
    return hashlib.new(algorithm, data).hexdigest()


# ---------------------------------------------------------------------------
# scanning
# ---------------------------------------------------------------------------


def _wanted(name: str, patterns: Iterable[str] | None) -> bool:
    if patterns is None:
        return True
    lowered = name.lower()
    return any(fnmatch.fnmatchcase(lowered, p) for p in patterns)


def scan(
    paths: Iterable[str | os.PathLike],
    include_patterns: Iterable[str] | None = DEFAULT_PATTERNS,
    *,
    hash_algorithm: str = "sha1",
    tally: Counter | None = None,
) -> Iterator[tuple[FileRecord, bytes]]:
    """Walk ``paths`` in lexicographic order and yield matching files.

    ``include_patterns=None`` disables name filtering. ``.git`` directories
    are never entered. Unreadable files are logged and counted under
    ``unreadable`` in ``tally``.
    """
    tally = tally if tally is not None else Counter()
    patterns = tuple(include_patterns) if include_patterns is not None else None
    for top in paths:
        top = Path(top)
        if top.is_file():
            candidates = [(top, top.name)]
        else:
            candidates = _walk(top)
        for path, rel in candidates:
            if not _wanted(path.name, patterns):
                continue
            try:
                data = path.read_bytes()
            except OSError as exc:
                log.warning("skipping unreadable file %s: %s", path, exc)
                tally["unreadable"] += 1
                continue
            yield (
                FileRecord(
                    path=rel,
                    name=path.name,
                    size=len(data),
                    content_hash=content_hash(data, hash_algorithm),
                ),
                data,
            )


def _walk(root: Path) -> Iterator[tuple[Path, str]]:
    for dirpath, dirnames, filenames in os.walk(root):
        dirnames[:] = sorted(d for d in dirnames if d != ".git")
        for fname in sorted(filenames):
            full = Path(dirpath) / fname
            if full.is_file():
                yield full, full.relative_to(root).as_posix()


def read_files_jsonl(
    source: str | os.PathLike | IO[str], *, hash_algorithm: str = "sha1"
) -> Iterator[tuple[FileRecord, bytes, RepoRecord | None]]:
    """Read file records as written by ``export(..., "files")`` or a harvest run."""
    if isinstance(source, (str, os.PathLike)):
        with open(source, encoding="utf-8") as fh:
            yield from read_files_jsonl(fh, hash_algorithm=hash_algorithm)
        return
    for line in source:
        if not line.strip():
            continue
        rec = json.loads(line)
        if rec.get("content_base64") is not None:
            data = base64.b64decode(rec["content_base64"])
        else:
            data = (rec.get("content") or "").encode("utf-8")
        path = rec["path"]
        record = FileRecord(
            path=path,
            name=rec.get("name") or path.rsplit("/", 1)[-1],
            size=len(data),
            content_hash=content_hash(data, hash_algorithm),
        )
        repo = None
        if rec.get("repo"):
            repo = RepoRecord(
                full_name=rec["repo"],
                description=rec.get("description") or "",
                stars=int(rec.get("stars") or 0),
            )
        yield record, data, repo


# ---------------------------------------------------------------------------
# store
# ---------------------------------------------------------------------------


def _parse_blob(data: bytes) -> tuple[list[AliasDefinition], Counter]:
    tally: Counter = Counter()
    return parse_source(data, None, tally), tally


class CorpusStore:
    """Single-file embedded store (SQLite). Use ``":memory:"`` for scratch work."""

    def __init__(self, path: str | os.PathLike = ":memory:", hash_algorithm: str | None = None):
        self.path = str(path)
        self.conn = sqlite3.connect(self.path)
        self.conn.execute("PRAGMA foreign_keys = ON")
        self.conn.executescript(_SCHEMA)
        stored = self._meta("hash_algorithm")
        if stored is None:
            stored = hash_algorithm or "sha1"
            if stored not in HASH_ALGORITHMS:
                raise ValueError(f"unsupported hash algorithm {stored!r}")
            with self.conn:
                self.conn.execute(
                    "INSERT INTO meta (key, value) VALUES ('hash_algorithm', ?)", (stored,)
                )
        elif hash_algorithm and hash_algorithm != stored:
            raise ValueError(f"store uses {stored}, not {hash_algorithm}")
        self.hash_algorithm = stored

    def __enter__(self) -> "CorpusStore":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    def close(self) -> None:
        self.conn.close()

    def _meta(self, key: str) -> str | None:
        row = self.conn.execute("SELECT value FROM meta WHERE key = ?", (key,)).fetchone()
        return row[0] if row else None

    # -- writes -------------------------------------------------------------

    def repo_id(self, repo: RepoRecord) -> int:
        row = self.conn.execute(
            "SELECT repo_id FROM repos WHERE full_name = ?", (repo.full_name,)
        ).fetchone()
        if row:
            return row[0]
        cur = self.conn.execute(
            "INSERT INTO repos (full_name, description, stars) VALUES (?, ?, ?)",
            (repo.full_name, repo.description, repo.stars),
        )
        return cur.lastrowid

    def has_hash(self, digest: str) -> bool:
        return (
            self.conn.execute("SELECT 1 FROM files WHERE content_hash = ?", (digest,)).fetchone()
            is not None
        )

    def add_file(
        self,
        record: FileRecord,
        data: bytes,
        aliases: Iterable[AliasDefinition],
        repo: RepoRecord | None = None,
    ) -> int:
        """Insert one file with its parsed aliases in a single transaction."""
        with self.conn:
            repo_id = self.repo_id(repo) if repo is not None else record.repo_id
            cur = self.conn.execute(
                "INSERT INTO files (repo_id, path, name, size, content_hash, content) "
                "VALUES (?, ?, ?, ?, ?, ?)",
                (repo_id, record.path, record.name, record.size, record.content_hash, data),
            )
            file_id = cur.lastrowid
            for alias in aliases:
                self._insert_alias(file_id, alias)
        record.file_id = file_id
        record.repo_id = repo_id
        return file_id

    def _insert_alias(self, file_id: int, alias: AliasDefinition) -> int:
        cur = self.conn.execute(
            "INSERT INTO aliases (file_id, line, pair_index, mid_line, name, value, n_commands) "
            "VALUES (?, ?, ?, ?, ?, ?, ?)",
            (
                file_id, alias.line, alias.pair_index, int(alias.mid_line),
                alias.name, alias.value, len(alias.commands),
            ),
        )
        alias_id = cur.lastrowid
        for pos, cmd in enumerate(alias.commands):
            ccur = self.conn.execute(
                "INSERT INTO commands (alias_id, position, name, raw_name, sudo, env_prefixes, "
                "separator_after) VALUES (?, ?, ?, ?, ?, ?, ?)",
                (
                    alias_id, pos, cmd.name, cmd.raw_name, int(cmd.sudo),
                    json.dumps(list(cmd.env_prefixes), ensure_ascii=False),
                    cmd.separator_after.value,
                ),
            )
            self.conn.executemany(
                "INSERT INTO arguments (command_id, position, text) VALUES (?, ?, ?)",
                [(ccur.lastrowid, apos, text) for apos, text in enumerate(cmd.arguments)],
            )
        return alias_id

    def add_skips(self, tally: Counter) -> None:
        with self.conn:
            for reason, count in sorted(tally.items()):
                self.conn.execute(
                    "INSERT INTO skips (reason, count) VALUES (?, ?) "
                    "ON CONFLICT (reason) DO UPDATE SET count = count + excluded.count",
                    (reason, count),
                )

    def replace_labels(self, rows: Iterable[tuple[int, str, str, bool]]) -> int:
        with self.conn:
            self.conn.execute("DELETE FROM labels")
            cur = self.conn.executemany(
                "INSERT INTO labels (alias_id, kind, evidence, typo_fix) VALUES (?, ?, ?, ?)",
                ((a, k, e, int(t)) for a, k, e, t in rows),
            )
        return cur.rowcount

    # -- reads --------------------------------------------------------------

    def skips(self) -> dict[str, int]:
        return dict(self.conn.execute("SELECT reason, count FROM skips ORDER BY reason"))

    def count(self, table: str) -> int:
        if table not in EXPORT_TABLES:
            raise ValueError(f"unknown table {table!r}")
        return self.conn.execute(f"SELECT COUNT(*) FROM {table}").fetchone()[0]

    def iter_aliases(self) -> Iterator[tuple[int, AliasDefinition]]:
        """Rebuild every stored alias as ``(alias_id, AliasDefinition)``, in id order."""
        args: dict[int, list[str]] = {}
        for command_id, text in self.conn.execute(
            "SELECT command_id, text FROM arguments ORDER BY command_id, position"
        ):
            args.setdefault(command_id, []).append(text)
        cmds: dict[int, list[ParsedCommand]] = {}
        for command_id, alias_id, name, raw_name, sudo, env, sep in self.conn.execute(
            "SELECT command_id, alias_id, name, raw_name, sudo, env_prefixes, separator_after "
            "FROM commands ORDER BY alias_id, position"
        ):
            cmds.setdefault(alias_id, []).append(
                ParsedCommand(
                    name=name,
                    arguments=tuple(args.get(command_id, ())),
                    env_prefixes=tuple(json.loads(env)),
                    sudo=bool(sudo),
                    separator_after=Separator(sep),
                    raw_name=raw_name,
                )
            )
        for alias_id, file_id, line, pair_index, mid_line, name, value in self.conn.execute(
            "SELECT alias_id, file_id, line, pair_index, mid_line, name, value "
            "FROM aliases ORDER BY alias_id"
        ):
            yield alias_id, AliasDefinition(
                name=name,
                value=value,
                commands=tuple(cmds.get(alias_id, ())),
                file_id=file_id,
                line=line,
                pair_index=pair_index,
                mid_line=bool(mid_line),
            )

    def labels(self) -> dict[int, list[tuple[str, str, bool]]]:
        out: dict[int, list[tuple[str, str, bool]]] = {}
        for alias_id, kind, evidence, typo in self.conn.execute(
            "SELECT alias_id, kind, evidence, typo_fix FROM labels ORDER BY alias_id, kind"
        ):
            out.setdefault(alias_id, []).append((kind, evidence, bool(typo)))
        return out

    def table_digest(self, table: str) -> str:
        """SHA-256 over the table's export rows; equal digests mean equal tables."""
        h = hashlib.sha256()
        for rec in _export_records(self, table):
            h.update(json.dumps(rec, sort_keys=True, ensure_ascii=True).encode())
            h.update(b"\n")
        return h.hexdigest()

    def check_integrity(self) -> list[str]:
        """Full-table scan for orphaned rows and position gaps; empty list when sound."""
        problems = []
        checks = {
            "orphan command": "SELECT COUNT(*) FROM commands c LEFT JOIN aliases a "
            "ON a.alias_id = c.alias_id WHERE a.alias_id IS NULL",
            "orphan argument": "SELECT COUNT(*) FROM arguments x LEFT JOIN commands c "
            "ON c.command_id = x.command_id WHERE c.command_id IS NULL",
            "orphan alias": "SELECT COUNT(*) FROM aliases a LEFT JOIN files f "
            "ON f.file_id = a.file_id WHERE f.file_id IS NULL",
            "orphan file": "SELECT COUNT(*) FROM files f LEFT JOIN repos r "
            "ON r.repo_id = f.repo_id WHERE f.repo_id IS NOT NULL AND r.repo_id IS NULL",
            "command positions": "SELECT COUNT(*) FROM (SELECT alias_id, COUNT(*) n, "
            "MAX(position) m, MIN(position) lo FROM commands GROUP BY alias_id) "
            "WHERE m != n - 1 OR lo != 0",
            "argument positions": "SELECT COUNT(*) FROM (SELECT command_id, COUNT(*) n, "
            "MAX(position) m, MIN(position) lo FROM arguments GROUP BY command_id) "
            "WHERE m != n - 1 OR lo != 0",
            "n_commands": "SELECT COUNT(*) FROM aliases a WHERE n_commands != "
            "(SELECT COUNT(*) FROM commands c WHERE c.alias_id = a.alias_id)",
            "duplicate hash": "SELECT COUNT(*) - COUNT(DISTINCT content_hash) FROM files",
        }
        for what, sql in checks.items():
            bad = self.conn.execute(sql).fetchone()[0]
            if bad:
                problems.append(f"{what}: {bad}")
        return problems


# ---------------------------------------------------------------------------
# ingest
# ---------------------------------------------------------------------------


def ingest(
    store: CorpusStore,
    stream: Iterable[tuple],
    repo: RepoRecord | None = None,
    *,
    jobs: int = 1,
) -> IngestReport:
    """Deduplicate by content hash, parse, and write each new file.

    Stream items are ``(FileRecord, bytes)`` or ``(FileRecord, bytes, RepoRecord)``;
    ``repo`` applies to items without their own. With ``jobs > 1`` parsing
    runs in worker processes while this process remains the only writer.
    """
    report = IngestReport()
    pending: list[tuple[FileRecord, bytes, RepoRecord | None]] = []
    seen: set[str] = set()
    for item in stream:
        record, data = item[0], item[1]
        item_repo = item[2] if len(item) > 2 and item[2] is not None else repo
        report.files_seen += 1
        if record.content_hash in seen or store.has_hash(record.content_hash):
            report.duplicates_dropped += 1
            continue
        seen.add(record.content_hash)
        pending.append((record, data, item_repo))

    if jobs > 1 and len(pending) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parsed = pool.map(_parse_blob, (d for _, d, _ in pending), chunksize=16)
            _write_all(store, pending, parsed, report)
    else:
        _write_all(store, pending, map(_parse_blob, (d for _, d, _ in pending)), report)
    return report


def _write_all(store, pending, parsed, report: IngestReport) -> None:
    total: Counter = Counter()
    for (record, data, repo), (aliases, tally) in zip(pending, parsed):
        try:
            store.add_file(record, data, aliases, repo)
        except sqlite3.Error as exc:
            log.error("ingest of %s failed: %s", record.path, exc)
            report.files_failed += 1
            continue
        report.aliases_parsed += len(aliases)
        total.update(tally)
    report.skip_reasons = total
    report.statements_skipped = sum(total[r] for r in SKIP_REASONS)
    if total:
        store.add_skips(total)


# ---------------------------------------------------------------------------
# export / import
# ---------------------------------------------------------------------------


def _export_records(store: CorpusStore, what: str) -> Iterator[dict]:
    if what not in _EXPORT_SQL:
        raise ValueError(f"cannot export {what!r}; choose from {', '.join(EXPORT_TABLES)}")
    cols = EXPORT_COLUMNS[what]
    for row in store.conn.execute(_EXPORT_SQL[what]):
        if what == "files":
            data = bytes(row[8])
            try:
                text, b64 = data.decode("utf-8"), None
            except UnicodeDecodeError:
                text, b64 = None, base64.b64encode(data).decode("ascii")
            row = row[:8] + (text, b64)
        rec = dict(zip(cols, row))
        if what == "aliases":
            rec["mid_line"] = bool(rec["mid_line"])
        elif what == "commands":
            rec["sudo"] = bool(rec["sudo"])
            rec["env_prefixes"] = json.loads(rec["env_prefixes"])
        elif what == "labels":
            rec["typo_fix"] = bool(rec["typo_fix"])
        yield rec


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, list):
        return json.dumps(value, ensure_ascii=False)
    return str(value)


def dumps_jsonl(rec: dict) -> str:
    return json.dumps(rec, ensure_ascii=False, separators=(",", ":"))


def export(store: CorpusStore, what: str, fmt: str, out: IO[str]) -> int:
    """Write one table as JSONL or CSV (RFC 4180 quoting); returns the row count."""
    if fmt not in ("jsonl", "csv"):
        raise ValueError(f"unknown format {fmt!r}")
    records = _export_records(store, what)
    n = 0
    if fmt == "csv":
        writer = csv.writer(out)
        writer.writerow(EXPORT_COLUMNS[what])
        for rec in records:
            writer.writerow([_csv_cell(rec[c]) for c in EXPORT_COLUMNS[what]])
            n += 1
    else:
        for rec in records:
            out.write(dumps_jsonl(rec) + "\n")
            n += 1
    return n


def export_all(store: CorpusStore, directory: str | os.PathLike) -> dict[str, int]:
    """Export every table to ``<directory>/<table>.jsonl``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    counts = {}
    for table in EXPORT_TABLES:
        with open(directory / f"{table}.jsonl", "w", encoding="utf-8", newline="\n") as fh:
            counts[table] = export(store, table, "jsonl", fh)
    return counts


def _read_jsonl(path: Path) -> Iterator[dict]:
    if not path.exists():
        return
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                yield json.loads(line)


def import_all(store: CorpusStore, directory: str | os.PathLike) -> dict[str, int]:
    """Load a full ``export_all`` directory into an empty store, ids preserved."""
    directory = Path(directory)
    if store.count("files") or store.count("repos"):
        raise ValueError("import_all needs an empty store")
    counts = dict.fromkeys(EXPORT_TABLES, 0)
    conn = store.conn
    with conn:
        repo_ids = {}
        for rec in _read_jsonl(directory / "repos.jsonl"):
            conn.execute(
                "INSERT INTO repos (repo_id, full_name, description, stars) VALUES (?, ?, ?, ?)",
                (rec["id"], rec["full_name"], rec["description"], rec["stars"]),
            )
            repo_ids[rec["full_name"]] = rec["id"]
            counts["repos"] += 1
        for rec in _read_jsonl(directory / "files.jsonl"):
            if rec.get("content_base64") is not None:
                data = base64.b64decode(rec["content_base64"])
            else:
                data = rec["content"].encode("utf-8")
            conn.execute(
                "INSERT INTO files (file_id, repo_id, path, name, size, content_hash, content) "
                "VALUES (?, ?, ?, ?, ?, ?, ?)",
                (
                    rec["id"], repo_ids.get(rec["repo"]) if rec["repo"] else None,
                    rec["path"], rec["name"], rec["size"], rec["content_hash"], data,
                ),
            )
            counts["files"] += 1
        for rec in _read_jsonl(directory / "aliases.jsonl"):
            conn.execute(
                "INSERT INTO aliases (alias_id, file_id, line, pair_index, mid_line, name, value, "
                "n_commands) VALUES (?, ?, ?, ?, ?, ?, ?, ?)",
                (
                    rec["id"], rec["file"], rec["line"], rec["pair_index"],
                    int(rec["mid_line"]), rec["name"], rec["value"], rec["n_commands"],
                ),
            )
            counts["aliases"] += 1
        for rec in _read_jsonl(directory / "commands.jsonl"):
            conn.execute(
                "INSERT INTO commands (command_id, alias_id, position, name, raw_name, sudo, "
                "env_prefixes, separator_after) VALUES (?, ?, ?, ?, ?, ?, ?, ?)",
                (
                    rec["id"], rec["alias_ref"], rec["position"], rec["name"], rec["raw_name"],
                    int(rec["sudo"]), json.dumps(rec["env_prefixes"], ensure_ascii=False),
                    rec["separator_after"],
                ),
            )
            counts["commands"] += 1
        for rec in _read_jsonl(directory / "arguments.jsonl"):
            conn.execute(
                "INSERT INTO arguments (argument_id, command_id, position, text) "
                "VALUES (?, ?, ?, ?)",
                (rec["id"], rec["command_ref"], rec["position"], rec["text"]),
            )
            counts["arguments"] += 1
        for rec in _read_jsonl(directory / "labels.jsonl"):
            conn.execute(
                "INSERT INTO labels (alias_id, kind, evidence, typo_fix) VALUES (?, ?, ?, ?)",
                (rec["alias_ref"], rec["kind"], rec["evidence"], int(rec["typo_fix"])),
            )
            counts["labels"] += 1
    return counts
