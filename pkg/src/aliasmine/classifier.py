"""Mechanical classifiers for the nine alias customization practices."""

from __future__ import annotations

import enum
import fnmatch
import re
from collections import Counter
from dataclasses import dataclass

from .distance import damerau_levenshtein
from .knowledge import KnowledgeBase, default_kb
from .parser import AliasDefinition, ParsedCommand, Separator, unquote

__all__ = [
    "Practice",
    "PracticeLabel",
    "classify",
    "classify_store",
    "compression_ratio",
    "is_bookmark",
    "is_colorizing",
    "is_location",
    "is_nickname",
    "is_override",
    "is_privilege_elevation",
    "is_subcommand_abbrev",
    "is_subcommand_chain",
    "is_substitution",
    "is_transform_pipeline",
]

TYPO_THRESHOLD = 2


class Practice(str, enum.Enum):
    NICKNAMING = "Nicknaming"
    ABBREVIATING_SUBCOMMANDS = "AbbreviatingSubcommands"
    BOOKMARKING_LOCATIONS = "BookmarkingLocations"
    SUBSTITUTING_COMMANDS = "SubstitutingCommands"
    OVERRIDING_DEFAULTS = "OverridingDefaults"
    COLORIZING_OUTPUT = "ColorizingOutput"
    ELEVATING_PRIVILEGE = "ElevatingPrivilege"
    TRANSFORMING_DATA = "TransformingData"
    CHAINING_SUBCOMMANDS = "ChainingSubcommands"


PRACTICE_ORDER = tuple(Practice)


@dataclass(frozen=True, slots=True)
class PracticeLabel:
    kind: Practice
    evidence: str
    typo_fix: bool = False


_SUBCOMMAND_RE = re.compile(r"[a-z][a-z0-9-]*\Z")
_IPV4_RE = re.compile(r"[0-9]+\.[0-9]+\.[0-9]+\.[0-9]+")
_TLD_RE = re.compile(r"\.([A-Za-z0-9-]+)(?=[/:]|\Z)")
_REF_RE = re.compile(r"([A-Za-z0-9._-]+)/[A-Za-z0-9._-]+\Z")
_DOTS_RE = re.compile(r"\.[./]*\Z")
_REDIRECT_RE = re.compile(r"[0-9]*(?:&>>?|[<>]+&?)")
_SHORT_FLAG = re.compile(r"-[A-Za-z0-9]\Z")
_SHORT_BUNDLE = re.compile(r"-[A-Za-z0-9]+\Z")


def _single(alias: AliasDefinition) -> ParsedCommand | None:
    return alias.commands[0] if len(alias.commands) == 1 else None


def is_nickname(alias: AliasDefinition, kb: KnowledgeBase) -> PracticeLabel | None:
    """A new name for a bare command, e.g. ``g=git``; flags typo fixes like ``got=git``."""
    cmd = _single(alias)
    if cmd is None or cmd.arguments or cmd.env_prefixes or cmd.sudo or not cmd.name:
        return None
    if alias.name in kb.known_commands or alias.name == cmd.name:
        return None
    dist = damerau_levenshtein(alias.name, cmd.name)
    # a distance that merely deletes the whole name away (g=git) is an abbreviation
    typo = dist <= TYPO_THRESHOLD and dist < len(alias.name)
    evidence = f"nickname:{cmd.name}" + (f":typo-distance={dist}" if typo else "")
    return PracticeLabel(Practice.NICKNAMING, evidence, typo_fix=typo)


def is_subcommand_abbrev(alias: AliasDefinition, kb: KnowledgeBase) -> PracticeLabel | None:
    cmd = _single(alias)
    if cmd is None or cmd.env_prefixes or cmd.name not in kb.subcommand_commands:
        return None
    if len(cmd.arguments) != 1:
        return None
    sub = unquote(cmd.arguments[0])
    if not _SUBCOMMAND_RE.match(sub):
        return None
    return PracticeLabel(Practice.ABBREVIATING_SUBCOMMANDS, f"subcommand:{cmd.name} {sub}")


def _strip_redirect(argument: str) -> str:
    m = _REDIRECT_RE.match(argument)
    return argument[m.end():] if m else argument


def location_kind(argument: str, kb: KnowledgeBase, command: str = "") -> str | None:
    """Which location rule ``argument`` satisfies: path, ipv4, domain, or None."""
    arg = _strip_redirect(argument)
    if not arg or arg in kb.location_exclusions:
        return None
    if "/" in arg:
        if _DOTS_RE.match(arg):
            return None
        ref = _REF_RE.match(arg)
        if ref and (ref.group(1) in kb.remote_names or command == "git"):
            return None
        return "path"
    if _IPV4_RE.search(arg):
        return "ipv4"
    for tld in _TLD_RE.findall(arg):
        if tld.lower() in kb.tld_set:
            return "domain"
    return None


def is_location(argument: str, kb: KnowledgeBase, command: str = "") -> bool:
    return location_kind(argument, kb, command) is not None


def is_bookmark(alias: AliasDefinition, kb: KnowledgeBase) -> PracticeLabel | None:
    for cmd in alias.commands:
        for arg in cmd.unquoted_arguments:
            kind = location_kind(arg, kb, cmd.name)
            if kind:
                return PracticeLabel(Practice.BOOKMARKING_LOCATIONS, f"argument-{kind}:{arg}")
    for cmd in alias.commands:
        for env in cmd.env_prefixes:
            value = unquote(env.partition("=")[2])
            kind = location_kind(value, kb, cmd.name)
            if kind:
                return PracticeLabel(Practice.BOOKMARKING_LOCATIONS, f"env-{kind}:{value}")
    return None


def is_substitution(alias: AliasDefinition, kb: KnowledgeBase) -> PracticeLabel | None:
    if alias.name not in kb.known_commands or not alias.commands:
        return None
    if any(cmd.name == alias.name for cmd in alias.commands):
        return None
    return PracticeLabel(
        Practice.SUBSTITUTING_COMMANDS, f"substitute:{alias.name}->{alias.commands[0].name}"
    )


def is_override(alias: AliasDefinition) -> PracticeLabel | None:
    for pos, cmd in enumerate(alias.commands):
        if cmd.name != alias.name:
            continue
        if len(alias.commands) > 1 or cmd.arguments or cmd.env_prefixes or cmd.sudo:
            return PracticeLabel(Practice.OVERRIDING_DEFAULTS, f"override:{alias.name}@{pos}")
    return None


def _flag_matches(arg: str, pattern: str) -> bool:
    if _SHORT_FLAG.match(pattern) and _SHORT_BUNDLE.match(arg):
        return pattern[1] in arg[1:]
    return fnmatch.fnmatchcase(arg, pattern)


def is_colorizing(alias: AliasDefinition, kb: KnowledgeBase) -> PracticeLabel | None:
    scope = "redefinition" if alias.name in kb.known_commands else "new-name"
    generic = kb.color_flags.get("*", frozenset())
    for pos, cmd in enumerate(alias.commands):
        patterns = kb.color_flags.get(cmd.name, frozenset())
        for arg in cmd.unquoted_arguments:
            if any(_flag_matches(arg, p) for p in patterns) or any(
                fnmatch.fnmatchcase(arg, p) for p in generic
            ):
                return PracticeLabel(
                    Practice.COLORIZING_OUTPUT, f"flag:{cmd.name} {arg}:{scope}"
                )
        for env in cmd.env_prefixes:
            var = env.partition("=")[0]
            if any(fnmatch.fnmatchcase(var, p) for p in kb.color_env):
                return PracticeLabel(Practice.COLORIZING_OUTPUT, f"env:{var}:{scope}")
        if cmd.name in kb.colorizer_tools:
            how = "pipe" if pos and alias.commands[pos - 1].separator_after in _PIPES else "wrapper"
            return PracticeLabel(
                Practice.COLORIZING_OUTPUT, f"colorizer-{how}:{cmd.name}:{scope}"
            )
        if cmd.name in kb.color_twins.get(alias.name, frozenset()):
            return PracticeLabel(
                Practice.COLORIZING_OUTPUT, f"twin:{alias.name}->{cmd.name}:{scope}"
            )
    return None


def is_privilege_elevation(alias: AliasDefinition) -> PracticeLabel | None:
    for cmd in alias.commands:
        if cmd.sudo:
            return PracticeLabel(Practice.ELEVATING_PRIVILEGE, f"sudo:{cmd.name}")
    return None


_PIPES = frozenset({Separator.PIPE, Separator.PIPE_ERR})
_CHAIN_SEPS = frozenset({Separator.AND, Separator.SEQ})


def is_transform_pipeline(alias: AliasDefinition) -> PracticeLabel | None:
    if len(alias.commands) < 2:
        return None
    if all(sep in _PIPES for sep in alias.separators):
        return PracticeLabel(
            Practice.TRANSFORMING_DATA,
            "pipeline:" + "|".join(c.name for c in alias.commands),
        )
    return None


def is_subcommand_chain(alias: AliasDefinition, kb: KnowledgeBase) -> PracticeLabel | None:
    """Repeated subcommand invocations joined by ``&&`` or ``;``."""
    if len(alias.commands) < 2:
        return None
    runs: list[list[ParsedCommand]] = [[]]
    for cmd in alias.commands:
        runs[-1].append(cmd)
        if cmd.separator_after not in _CHAIN_SEPS:
            runs.append([])
    for run in runs:
        seen: dict[str, list[str]] = {}
        for cmd in run:
            if cmd.name not in kb.subcommand_commands or not cmd.arguments:
                continue
            first = unquote(cmd.arguments[0])
            if first.startswith("-"):
                continue
            seen.setdefault(cmd.name, []).append(first)
        for name in sorted(seen):
            subs = seen[name]
            if len(subs) >= 2:
                return PracticeLabel(
                    Practice.CHAINING_SUBCOMMANDS, f"chain:{name} " + ",".join(subs)
                )
    return None


def compression_ratio(alias: AliasDefinition) -> float:
    """Length of the value over length of the name (``gs=git status`` gives 5.0)."""
    if not alias.name:
        raise ValueError("alias name is empty")
    return len(alias.value.strip()) / len(alias.name)


def classify(alias: AliasDefinition, kb: KnowledgeBase | None = None) -> tuple[PracticeLabel, ...]:
    """All practice labels for ``alias``, in canonical practice order."""
    kb = kb or default_kb()
    found = (
        is_nickname(alias, kb),
        is_subcommand_abbrev(alias, kb),
        is_bookmark(alias, kb),
        is_substitution(alias, kb),
        is_override(alias),
        is_colorizing(alias, kb),
        is_privilege_elevation(alias),
        is_transform_pipeline(alias),
        is_subcommand_chain(alias, kb),
    )
    return tuple(label for label in found if label is not None)


def practice_kinds(labels) -> frozenset[Practice]:
    return frozenset(label.kind for label in labels)


def classify_store(store, kb: KnowledgeBase | None = None) -> Counter:
    """Label every alias in a corpus store, replacing earlier labels.

    Returns the number of aliases per practice.
    """
    kb = kb or default_kb()
    totals: Counter = Counter()
    rows = []
    for alias_id, alias in store.iter_aliases():
        for label in classify(alias, kb):
            totals[label.kind.value] += 1
            rows.append((alias_id, label.kind.value, label.evidence, label.typo_fix))
    store.replace_labels(rows)
    return totals
