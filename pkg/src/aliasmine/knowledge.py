"""Command knowledge used by the practice classifiers.

Every list lives in a plain-text file under ``aliasmine/data``: one entry per
line, ``#`` comments allowed, and ``command<TAB>value`` lines for the two map
files. A user directory passed as ``kb_dir`` replaces any bundled file it
contains; missing files fall back to the bundled copy.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

LIST_FILES = {
    "known_commands": "known_commands.txt",
    "subcommand_commands": "subcommand_commands.txt",
    "colorizer_tools": "colorizer_tools.txt",
    "color_env": "color_env.txt",
    "tld_set": "tlds.txt",
    "location_exclusions": "location_exclusions.txt",
    "remote_names": "remote_names.txt",
    "stopwords": "stopwords.txt",
}
MAP_FILES = {
    "color_flags": "color_flags.tsv",
    "color_twins": "color_twins.tsv",
}


def _read_text(name: str, kb_dir: Path | None) -> str:
    if kb_dir is not None and (kb_dir / name).is_file():
        return (kb_dir / name).read_text(encoding="utf-8")
    return resources.files("aliasmine.data").joinpath(name).read_text(encoding="utf-8")


def _lines(text: str) -> list[str]:
    out = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(line)
    return out


def _parse_map(text: str) -> dict[str, frozenset[str]]:
    acc: dict[str, set[str]] = {}
    for line in _lines(text):
        key, sep, value = line.partition("\t")
        if not sep:
            raise ValueError(f"map line without a tab: {line!r}")
        acc.setdefault(key.strip(), set()).add(value.strip())
    return {k: frozenset(v) for k, v in acc.items()}


@dataclass(frozen=True)
class KnowledgeBase:
    known_commands: frozenset[str]
    subcommand_commands: frozenset[str]
    color_flags: Mapping[str, frozenset[str]]
    colorizer_tools: frozenset[str]
    color_twins: Mapping[str, frozenset[str]]
    color_env: frozenset[str]
    tld_set: frozenset[str]
    location_exclusions: frozenset[str]
    remote_names: frozenset[str]
    stopwords: frozenset[str]

    @classmethod
    def load(cls, kb_dir: str | Path | None = None) -> "KnowledgeBase":
        root = Path(kb_dir) if kb_dir is not None else None
        lists = {
            field: frozenset(_lines(_read_text(fname, root)))
            for field, fname in LIST_FILES.items()
        }
        maps = {
            field: MappingProxyType(_parse_map(_read_text(fname, root)))
            for field, fname in MAP_FILES.items()
        }
        lists["tld_set"] = frozenset(t.lower() for t in lists["tld_set"])
        # every command that takes subcommands is a known command
        lists["known_commands"] = lists["known_commands"] | lists["subcommand_commands"]
        return cls(**lists, **maps)


_DEFAULT: KnowledgeBase | None = None


def default_kb() -> KnowledgeBase:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = KnowledgeBase.load()
    return _DEFAULT
