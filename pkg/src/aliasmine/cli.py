"""Command-line entry point: ``aliasmine <subcommand> ...``.

Data goes to standard output, diagnostics to standard error. Exit status is
0 on success, 1 for usage or input errors, 2 for anything unexpected.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import IO, Sequence

from . import analytics
from .classifier import PRACTICE_ORDER, classify_store
from .corpus import (
    DEFAULT_PATTERNS,
    EXPORT_TABLES,
    CorpusStore,
    RepoRecord,
    export,
    export_all,
    import_all,
    ingest,
    read_files_jsonl,
    scan,
)
from .harvester import (
    GitHubBackend,
    HarvestPlan,
    HarvestSession,
    SimulatedBackend,
    SimulatedClock,
    plan,
    query_string,
    write_harvest,
)
from .knowledge import KnowledgeBase
from .parser import ParseError
from .suggest import build_rules, load_rules, save_rules, suggest

log = logging.getLogger("aliasmine")

CONFIG_ENV = "ALIASMINE_CONFIG"
DEFAULTS = {
    "store": "aliases.db",
    "kb_dir": None,
    "seed": 0,
    "rules": "rules.jsonl",
    "rate_limit": 30,
    "backend": "simulated",
    "min_support": 0.8,
    "min_count": 5,
}
STATS = (
    "top-names",
    "top-commands",
    "top-arguments",
    "breakdown",
    "compression",
    "pipelines",
    "pipeline-commands",
    "file-patterns",
    "description-words",
    "practices",
    "sample",
)


class UserError(Exception):
    """Bad input from the person at the keyboard; exit status 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # noqa: D401 - argparse hook
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def default_config_path() -> Path:
    if os.environ.get(CONFIG_ENV):
        return Path(os.environ[CONFIG_ENV])
    base = os.environ.get("XDG_CONFIG_HOME") or Path.home() / ".config"
    return Path(base) / "aliasmine" / "config"


def read_config(path: Path) -> dict[str, str]:
    """``key = value`` lines; ``#`` starts a comment. Dashes in keys become underscores."""
    out: dict[str, str] = {}
    if not path.exists():
        return out
    for n, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UserError(f"{path}:{n}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _global_options(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = argparse.SUPPRESS if suppress else None
    parser.add_argument("--store", default=d, help="corpus database file")
    parser.add_argument("--kb-dir", default=d, help="directory overriding bundled knowledge files")
    parser.add_argument("--json", action="store_true", default=d, help="emit JSON lines")
    parser.add_argument("--seed", type=int, default=d, help="seed for sampling")
    parser.add_argument("--config", default=d, help="config file (key = value lines)")
    parser.add_argument("-v", "--verbose", action="count", default=d, help="more diagnostics")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, suppress=True)

    p = _Parser(prog="aliasmine", description="Mine and classify shell alias definitions.")
    _global_options(p, suppress=False)
    sub = p.add_subparsers(dest="command", metavar="<command>", parser_class=_Parser)

    s = sub.add_parser("scan", parents=[common], help="scan files and ingest their aliases")
    s.add_argument("paths", nargs="+")
    s.add_argument("--all", action="store_true", help="ingest every file, not only dotfile names")
    s.add_argument("--pattern", action="append", help="file-name glob (repeatable)")
    s.add_argument("--hash", choices=("sha1", "sha256"), help="content hash for new stores")
    s.add_argument("--jobs", type=int, default=1, help="parser processes")
    s.add_argument("--repo", help="repository full name for all scanned files")
    s.add_argument("--description", default="", help="repository description")
    s.add_argument("--stars", type=int, default=0)

    s = sub.add_parser("import", parents=[common], help="ingest harvested JSONL or an export dump")
    s.add_argument("source", help="files JSONL, or a directory written by 'export --all'")
    s.add_argument("--jobs", type=int, default=1)

    sub.add_parser("classify", parents=[common], help="label every alias with its practices")

    s = sub.add_parser("stats", parents=[common], help="aggregate tables")
    s.add_argument("table", choices=STATS)
    s.add_argument("--top", type=int, default=None, help="limit rows")
    s.add_argument("--command-name", "--cmd", dest="cmd", help="command for 'breakdown'")
    s.add_argument("--aliases", type=int, default=3, help="aliases per combination")
    s.add_argument("--bins", type=int, default=5, help="histogram bins per decade")
    s.add_argument("--length", type=int, default=3, help="pipeline length")
    s.add_argument("--min-share", type=float, default=0.1)
    s.add_argument("--n-cmds", type=int, default=50)
    s.add_argument("--n-args", type=int, default=10)
    s.add_argument("--long-tail", type=int, default=200)

    s = sub.add_parser("export", parents=[common], help="write tables as JSONL or CSV")
    s.add_argument("what", nargs="?", choices=EXPORT_TABLES, default="aliases")
    s.add_argument("--format", choices=("jsonl", "csv"), default=None)
    s.add_argument("--out", help="output file (default: standard output)")
    s.add_argument("--all", metavar="DIR", help="export every table as JSONL into DIR")

    s = sub.add_parser("suggest", parents=[common], help="mine rules or suggest fixes")
    ssub = s.add_subparsers(dest="action", metavar="<action>", parser_class=_Parser)
    b = ssub.add_parser("build", parents=[common], help="mine rules from the store")
    b.add_argument("--out", help="rules file")
    b.add_argument("--min-support", type=float)
    b.add_argument("--min-count", type=int)
    f = ssub.add_parser("fix", parents=[common], help="suggest rewrites for a command line")
    f.add_argument("--rules", help="rules file")
    f.add_argument("-k", type=int, default=3)
    f.add_argument("words", nargs=argparse.REMAINDER, help="the command line, after --")

    s = sub.add_parser("harvest", parents=[common], help="size-range code-search sampling")
    hsub = s.add_subparsers(dest="action", metavar="<action>", parser_class=_Parser)
    hp = hsub.add_parser("plan", parents=[common], help="print a uniform size-range plan")
    hp.add_argument("--term", default="alias")
    hp.add_argument("--max-size", type=int, default=29_000)
    hp.add_argument("--step", type=int, default=100)
    hp.add_argument("--cap", type=int, default=1000)
    hr = hsub.add_parser("run", parents=[common], help="refine and execute a plan")
    hr.add_argument("--plan", help="plan JSON from 'harvest plan' (default: a fresh plan)")
    hr.add_argument("--term", default="alias")
    hr.add_argument("--max-size", type=int, default=29_000)
    hr.add_argument("--step", type=int, default=100)
    hr.add_argument("--no-refine", action="store_true")
    hr.add_argument("--backend", choices=("simulated", "github"))
    hr.add_argument("--rate-limit", type=int, help="requests per minute")
    hr.add_argument("--sim-files", type=int, default=10_000)
    hr.add_argument("--out", help="harvested files JSONL (default: standard output)")
    hr.add_argument("--report", help="write the JSON report here instead of standard error")
    return p


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def _settings(args: argparse.Namespace) -> dict:
    cfg_path = Path(args.config) if getattr(args, "config", None) else default_config_path()
    if getattr(args, "config", None) and not cfg_path.exists():
        raise UserError(f"config file {cfg_path} not found")
    merged = dict(DEFAULTS)
    merged.update(read_config(cfg_path))
    for key in ("store", "kb_dir", "seed", "rules", "rate_limit", "backend", "min_support", "min_count"):
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    try:
        merged["seed"] = int(merged["seed"])
        merged["rate_limit"] = int(merged["rate_limit"])
        merged["min_support"] = float(merged["min_support"])
        merged["min_count"] = int(merged["min_count"])
    except ValueError as exc:
        raise UserError(f"bad config value: {exc}") from exc
    return merged


def _kb(settings: dict) -> KnowledgeBase:
    kb_dir = settings.get("kb_dir")
    if kb_dir and not Path(kb_dir).is_dir():
        raise UserError(f"knowledge directory {kb_dir} not found")
    return KnowledgeBase.load(kb_dir)


def _open_store(settings: dict, must_exist: bool = True, hash_algorithm: str | None = None):
    path = settings["store"]
    if must_exist and path != ":memory:" and not Path(path).exists():
        raise UserError(f"no store at {path}; run 'aliasmine scan' first")
    try:
        return CorpusStore(path, hash_algorithm)
    except ValueError as exc:
        raise UserError(str(exc)) from exc


def _emit_table(table: analytics.Table, as_json: bool, out: IO[str]) -> None:
    analytics.write_table(table, out, "jsonl" if as_json else "csv")


def _emit_mapping(data: dict, as_json: bool, out: IO[str]) -> None:
    if as_json:
        out.write(json.dumps(data, sort_keys=True) + "\n")
    else:
        analytics.write_table(analytics.Table(tuple(data), [tuple(data.values())]), out)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_scan(args, settings, out) -> int:
    for p in args.paths:
        if not Path(p).exists():
            raise UserError(f"{p}: no such file or directory")
    patterns = None if args.all else tuple(args.pattern or DEFAULT_PATTERNS)
    with _open_store(settings, must_exist=False, hash_algorithm=args.hash) as store:
        repo = RepoRecord(args.repo, args.description, args.stars) if args.repo else None
        stream = scan(args.paths, patterns, hash_algorithm=store.hash_algorithm)
        report = ingest(store, stream, repo, jobs=args.jobs)
    _emit_mapping(report.as_dict(), settings["json"], out)
    return 0


def cmd_import(args, settings, out) -> int:
    src = Path(args.source)
    if not src.exists():
        raise UserError(f"{src}: no such file or directory")
    with _open_store(settings, must_exist=False) as store:
        if src.is_dir():
            try:
                counts = import_all(store, src)
            except ValueError as exc:
                raise UserError(str(exc)) from exc
            _emit_mapping(counts, settings["json"], out)
        else:
            try:
                stream = list(read_files_jsonl(src, hash_algorithm=store.hash_algorithm))
            except (ValueError, KeyError) as exc:
                raise UserError(f"{src}: not a files JSONL ({exc})") from exc
            report = ingest(store, stream, jobs=args.jobs)
            _emit_mapping(report.as_dict(), settings["json"], out)
    return 0


def cmd_classify(args, settings, out) -> int:
    kb = _kb(settings)
    with _open_store(settings) as store:
        totals = classify_store(store, kb)
        n = store.count("aliases")
    table = analytics.Table(
        ("practice", "aliases", "percent"),
        [(p.value, totals[p.value], analytics.pct(totals[p.value], n)) for p in PRACTICE_ORDER],
    )
    _emit_table(table, settings["json"], out)
    return 0


def cmd_stats(args, settings, out) -> int:
    kb = _kb(settings)
    with _open_store(settings) as store:
        name = args.table
        if name == "top-names":
            table = analytics.top_names(store, args.top)
        elif name == "top-commands":
            table = analytics.top_commands(store, args.top)
        elif name == "top-arguments":
            table = analytics.top_arguments(store, args.top)
        elif name == "breakdown":
            if not args.cmd:
                raise UserError("stats breakdown needs --cmd NAME")
            table = analytics.command_breakdown(store, args.cmd, args.top, args.aliases)
        elif name == "compression":
            if args.bins < 1:
                raise UserError("--bins must be positive")
            table = analytics.compression_histogram(store, args.bins)
        elif name == "pipelines":
            table = analytics.pipeline_flows(store, args.length, args.min_share)
        elif name == "pipeline-commands":
            table = analytics.pipeline_command_shares(store, args.top)
        elif name in ("file-patterns", "description-words"):
            patterns, words = analytics.provenance_summary(store, kb, args.top)
            table = patterns if name == "file-patterns" else words
        elif name == "practices":
            if not store.labels():
                log.warning("no labels in store; run 'aliasmine classify' first")
            table = analytics.practice_matrix(store, k=args.top)
        else:
            table = analytics.representative_sample(
                store, args.n_cmds, args.n_args, args.aliases, args.long_tail, settings["seed"]
            )
    _emit_table(table, settings["json"], out)
    return 0


def cmd_export(args, settings, out) -> int:
    with _open_store(settings) as store:
        if args.all:
            counts = export_all(store, args.all)
            _emit_mapping(counts, settings["json"], out)
            return 0
        fmt = args.format or ("jsonl" if settings["json"] else "csv")
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                n = export(store, args.what, fmt, fh)
            log.info("wrote %d rows to %s", n, args.out)
        else:
            export(store, args.what, fmt, out)
    return 0


def cmd_suggest(args, settings, out) -> int:
    if args.action == "build":
        kb = _kb(settings)
        with _open_store(settings) as store:
            rules = build_rules(store, settings["min_support"], settings["min_count"], kb)
        target = args.out or settings["rules"]
        n = save_rules(rules, target)
        _emit_mapping(
            {
                "rules_file": str(target),
                "records": n,
                "sudo_rules": len(rules.sudo_rules),
                "order_commands": len(rules.order_rules),
                "chain_keys": len(rules.chain_rules),
                "typo_words": len(rules.typo_index),
            },
            settings["json"],
            out,
        )
        return 0
    if args.action == "fix":
        words = list(args.words)
        if words and words[0] == "--":
            words = words[1:]
        if not words:
            raise UserError("suggest fix needs a command line after --")
        path = args.rules or settings["rules"]
        if not Path(path).exists():
            raise UserError(f"no rules file at {path}; run 'aliasmine suggest build' first")
        rules = load_rules(path)
        line = words[0] if len(words) == 1 else " ".join(words)
        try:
            found = suggest(line, rules, args.k, _kb(settings))
        except ParseError as exc:
            raise UserError(f"cannot parse command line: {exc}") from exc
        for s in found:
            if settings["json"]:
                out.write(
                    json.dumps(
                        {"replacement": s.replacement, "rule_kind": s.rule_kind,
                         "score": s.score, "evidence": s.evidence}
                    )
                    + "\n"
                )
            else:
                out.write(f"{s.score:.4f}\t{s.rule_kind}\t{s.replacement}\n")
        return 0
    raise UserError("suggest needs an action: build or fix")


def cmd_harvest(args, settings, out) -> int:
    if args.action == "plan":
        try:
            p = plan(args.term, args.max_size, args.step, args.cap)
        except ValueError as exc:
            raise UserError(str(exc)) from exc
        if settings["json"]:
            out.write(json.dumps(p.as_dict()) + "\n")
        else:
            rows = [(lo, hi, query_string(p.term, lo, hi)) for lo, hi in p.ranges]
            analytics.write_table(analytics.Table(("lo", "hi", "query"), rows), out)
        return 0
    if args.action == "run":
        if args.plan:
            try:
                p = HarvestPlan.from_dict(json.loads(Path(args.plan).read_text(encoding="utf-8")))
            except (OSError, ValueError, KeyError) as exc:
                raise UserError(f"cannot read plan {args.plan}: {exc}") from exc
        else:
            p = plan(args.term, args.max_size, args.step)
        if settings["backend"] == "github":
            backend = GitHubBackend()
            if not backend.token:
                log.warning("GITHUB_TOKEN is not set; code search requires authentication")
            clock = None
        elif settings["backend"] == "simulated":
            backend = SimulatedBackend.lognormal(
                args.sim_files, seed=settings["seed"], max_size=p.max_size
            )
            clock = SimulatedClock()
        else:
            raise UserError(f"unknown backend {settings['backend']!r}")
        session = HarvestSession(backend, settings["rate_limit"], clock)
        if not args.no_refine:
            p = session.refine_until_fixpoint(p)
        files, report = session.execute(p)
        if args.out:
            write_harvest(files, args.out)
        else:
            write_harvest(files, out)
        text = json.dumps(report.as_dict(), sort_keys=True)
        if args.report:
            Path(args.report).write_text(text + "\n", encoding="utf-8")
        else:
            print(
                f"retrieved {report.retrieved} of ~{report.estimated_population} "
                f"(coverage {report.coverage:.4f}) in {report.requests} requests",
                file=sys.stderr,
            )
        return 0
    raise UserError("harvest needs an action: plan or run")


COMMANDS = {
    "scan": cmd_scan,
    "import": cmd_import,
    "classify": cmd_classify,
    "stats": cmd_stats,
    "export": cmd_export,
    "suggest": cmd_suggest,
    "harvest": cmd_harvest,
}


def main(argv: Sequence[str] | None = None, out: IO[str] | None = None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv:
        parser.print_usage(sys.stderr)
        return 1
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    verbosity = getattr(args, "verbose", None) or 0
    logging.basicConfig(
        level=logging.DEBUG if verbosity > 1 else logging.INFO if verbosity else logging.WARNING,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 1
    try:
        settings = _settings(args)
        settings["json"] = bool(getattr(args, "json", None))
        return COMMANDS[args.command](args, settings, out)
    except UserError as exc:
        print(f"aliasmine: error: {exc}", file=sys.stderr)
        return 1
    except BrokenPipeError:
        return 0
    except Exception as exc:  # internal failure
        log.debug("internal error", exc_info=True)
        print(f"aliasmine: internal error: {exc!r}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
