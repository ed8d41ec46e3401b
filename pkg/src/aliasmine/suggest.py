"""Repair and workflow suggestions mined from a corpus of aliases.

Rules are learned from how commands are written inside aliases: which
invocations nearly always run under ``sudo``, which tokens take the first
argument slot, which chains end in a given subcommand, and which command
names exist at all. :func:`suggest` only proposes rewrites; nothing is run.
"""

from __future__ import annotations

import json
import os
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import IO

from .classifier import is_subcommand_chain
from .distance import damerau_levenshtein
from .knowledge import KnowledgeBase, default_kb
from .parser import ParsedCommand, render_commands, tokenize_value, unquote

__all__ = ["RuleSet", "Suggestion", "build_rules", "load_rules", "save_rules", "suggest"]

RULE_KINDS = ("sudo-prefix", "arg-order", "chain", "typo")


@dataclass(frozen=True)
class SudoRule:
    support: float
    count: int


@dataclass
class RuleSet:
    sudo_rules: dict[tuple[str, str], SudoRule] = field(default_factory=dict)
    # command -> token -> (count in argument position 0, count anywhere)
    order_rules: dict[str, dict[str, tuple[int, int]]] = field(default_factory=dict)
    # (command, subcommand) -> rendered chain -> count
    chain_rules: dict[tuple[str, str], dict[str, int]] = field(default_factory=dict)
    typo_index: dict[str, int] = field(default_factory=dict)
    min_support: float = 0.8
    min_count: int = 5

    def is_empty(self) -> bool:
        return not (self.sudo_rules or self.order_rules or self.chain_rules or self.typo_index)


@dataclass(frozen=True, order=True)
class Suggestion:
    replacement: str
    rule_kind: str
    score: float
    evidence: int

    def sort_key(self) -> tuple:
        return (-self.score, -self.evidence, self.replacement, self.rule_kind)


def _first_word(cmd: ParsedCommand) -> str:
    return unquote(cmd.arguments[0]) if cmd.arguments else ""


def build_rules(
    store,
    min_support: float = 0.8,
    min_count: int = 5,
    kb: KnowledgeBase | None = None,
) -> RuleSet:
    """Mine a :class:`RuleSet` from every alias in ``store``.

    Sudo rules need both ``min_support`` and ``min_count``; order and typo
    statistics are kept whole and thresholded when applied; chain rules keep
    every precedent.
    """
    kb = kb or default_kb()
    sudo_total: Counter = Counter()
    sudo_hits: Counter = Counter()
    pos0: dict[str, Counter] = defaultdict(Counter)
    anywhere: dict[str, Counter] = defaultdict(Counter)
    chains: dict[tuple[str, str], Counter] = defaultdict(Counter)
    typo: Counter = Counter()

    for _, alias in store.iter_aliases():
        typo[alias.name] += 1
        for cmd in alias.commands:
            typo[cmd.name] += 1
            key = (cmd.name, _first_word(cmd))
            sudo_total[key] += 1
            if cmd.sudo:
                sudo_hits[key] += 1
            words = [unquote(a) for a in cmd.arguments]
            if words and words[0] and not words[0].startswith("-"):
                pos0[cmd.name][words[0]] += 1
            for w in set(words):
                if w and not w.startswith("-"):
                    anywhere[cmd.name][w] += 1
        if is_subcommand_chain(alias, kb) is not None:
            last = alias.commands[-1]
            chains[(last.name, _first_word(last))][render_commands(alias.commands)] += 1

    sudo_rules = {}
    for key, total in sudo_total.items():
        hits = sudo_hits[key]
        if hits and total >= min_count and hits / total >= min_support:
            sudo_rules[key] = SudoRule(support=hits / total, count=total)
    order_rules = {
        cmd: {tok: (n, anywhere[cmd][tok]) for tok, n in toks.items()}
        for cmd, toks in pos0.items()
    }
    return RuleSet(
        sudo_rules=sudo_rules,
        order_rules=order_rules,
        chain_rules={k: dict(v) for k, v in chains.items()},
        typo_index=dict(typo),
        min_support=min_support,
        min_count=min_count,
    )


def _replace(commands: list[ParsedCommand], i: int, new: ParsedCommand) -> str:
    out = list(commands)
    out[i] = new
    return render_commands(out)


def _with(cmd: ParsedCommand, **changes) -> ParsedCommand:
    fields = dict(
        name=cmd.name,
        arguments=cmd.arguments,
        env_prefixes=cmd.env_prefixes,
        sudo=cmd.sudo,
        separator_after=cmd.separator_after,
        raw_name=cmd.raw_name,
    )
    fields.update(changes)
    if "name" in changes and "raw_name" not in changes:
        fields["raw_name"] = changes["name"]
    return ParsedCommand(**fields)


def _sudo(commands, rules: RuleSet):
    for i, cmd in enumerate(commands):
        if cmd.sudo:
            continue
        rule = rules.sudo_rules.get((cmd.name, _first_word(cmd)))
        if rule is not None:
            yield Suggestion(
                _replace(commands, i, _with(cmd, sudo=True)), "sudo-prefix", rule.support, rule.count
            )


def _order(commands, rules: RuleSet):
    for i, cmd in enumerate(commands):
        vocab = rules.order_rules.get(cmd.name)
        if not vocab or len(cmd.arguments) < 2:
            continue
        words = [unquote(a) for a in cmd.arguments]
        if words[0].startswith("-"):
            continue

        def known(tok: str) -> tuple[int, int] | None:
            stats = vocab.get(tok)
            if stats is None or stats[0] < rules.min_count:
                return None
            if stats[0] / stats[1] < rules.min_support:
                return None
            return stats

        if known(words[0]) is not None:
            continue
        for j in range(1, len(words)):
            stats = known(words[j])
            if stats is None:
                continue
            args = list(cmd.arguments)
            args.insert(0, args.pop(j))
            yield Suggestion(
                _replace(commands, i, _with(cmd, arguments=tuple(args))),
                "arg-order",
                stats[0] / stats[1],
                stats[0],
            )


def _chain(commands, rules: RuleSet):
    if not rules.chain_rules:
        return
    head = commands[0]
    found = rules.chain_rules.get((head.name, _first_word(head)))
    if not found:
        return
    total = sum(found.values())
    for chain, n in found.items():
        # the precedent's own operator already joins its prefix to the last command
        prefix = tokenize_value(chain)[:-1]
        if prefix:
            yield Suggestion(render_commands(prefix + list(commands)), "chain", n / total, n)


def _typo(commands, rules: RuleSet, kb: KnowledgeBase):
    if not rules.typo_index:
        return
    for i, cmd in enumerate(commands):
        if cmd.name in rules.typo_index or cmd.name in kb.known_commands:
            continue
        for cand, count in rules.typo_index.items():
            if abs(len(cand) - len(cmd.name)) > 2:
                continue
            d = damerau_levenshtein(cmd.name, cand)
            if d <= 2:
                yield Suggestion(_replace(commands, i, _with(cmd, name=cand)), "typo", 1 / (1 + d), count)


def suggest(
    command_line: str, rules: RuleSet, k: int = 3, kb: KnowledgeBase | None = None
) -> list[Suggestion]:
    """Top ``k`` rewrites of ``command_line``, best first.

    Raises :class:`~aliasmine.parser.ParseError` if the line cannot be parsed.
    """
    commands = tokenize_value(command_line)
    if not commands or rules.is_empty():
        return []
    kb = kb or default_kb()
    original = render_commands(commands)
    best: dict[str, Suggestion] = {}
    for gen in (
        _sudo(commands, rules),
        _order(commands, rules),
        _chain(commands, rules),
        _typo(commands, rules, kb),
    ):
        for s in gen:
            if s.replacement == original or s.replacement == command_line.strip():
                continue
            held = best.get(s.replacement)
            if held is None or s.sort_key() < held.sort_key():
                best[s.replacement] = s
    return sorted(best.values(), key=Suggestion.sort_key)[:k]


# ---------------------------------------------------------------------------
# persistence
# ---------------------------------------------------------------------------


def _records(rules: RuleSet):
    yield {"kind": "meta", "min_support": rules.min_support, "min_count": rules.min_count}
    for (cmd, arg), r in sorted(rules.sudo_rules.items()):
        yield {"kind": "sudo", "command": cmd, "argument": arg, "support": r.support, "count": r.count}
    for cmd in sorted(rules.order_rules):
        for tok, (first, total) in sorted(rules.order_rules[cmd].items()):
            yield {"kind": "order", "command": cmd, "token": tok, "position0": first, "anywhere": total}
    for (cmd, sub), found in sorted(rules.chain_rules.items()):
        for chain, n in sorted(found.items()):
            yield {"kind": "chain", "command": cmd, "subcommand": sub, "chain": chain, "count": n}
    for word, n in sorted(rules.typo_index.items()):
        yield {"kind": "typo", "word": word, "count": n}


def save_rules(rules: RuleSet, out: IO[str] | str | os.PathLike) -> int:
    """Write rules as JSONL; returns the number of records."""
    if isinstance(out, (str, os.PathLike)):
        with open(out, "w", encoding="utf-8") as fh:
            return save_rules(rules, fh)
    n = 0
    for rec in _records(rules):
        out.write(json.dumps(rec, ensure_ascii=False, sort_keys=True) + "\n")
        n += 1
    return n


def load_rules(source: IO[str] | str | os.PathLike) -> RuleSet:
    if isinstance(source, (str, os.PathLike)):
        with open(source, encoding="utf-8") as fh:
            return load_rules(fh)
    rules = RuleSet()
    for line in source:
        if not line.strip():
            continue
        rec = json.loads(line)
        kind = rec.get("kind")
        if kind == "meta":
            rules.min_support = float(rec["min_support"])
            rules.min_count = int(rec["min_count"])
        elif kind == "sudo":
            rules.sudo_rules[(rec["command"], rec["argument"])] = SudoRule(
                float(rec["support"]), int(rec["count"])
            )
        elif kind == "order":
            rules.order_rules.setdefault(rec["command"], {})[rec["token"]] = (
                int(rec["position0"]),
                int(rec["anywhere"]),
            )
        elif kind == "chain":
            rules.chain_rules.setdefault((rec["command"], rec["subcommand"]), {})[rec["chain"]] = int(
                rec["count"]
            )
        elif kind == "typo":
            rules.typo_index[rec["word"]] = int(rec["count"])
        else:
            raise ValueError(f"unknown rule record kind {kind!r}")
    return rules
