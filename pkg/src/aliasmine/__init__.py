"""Extract, decompose and classify shell alias definitions from dotfiles."""

from __future__ import annotations

from .classifier import Practice, PracticeLabel, classify, classify_store, compression_ratio
from .corpus import CorpusStore, FileRecord, IngestReport, RepoRecord, export, ingest, scan
from .distance import damerau_levenshtein
from .knowledge import KnowledgeBase, default_kb
from .parser import (
    AliasDefinition,
    MalformedDefinition,
    ParsedCommand,
    ParseError,
    RawAliasOccurrence,
    Separator,
    UnbalancedQuote,
    extract_aliases,
    parse_alias,
    parse_definition,
    parse_source,
    tokenize_value,
)

__version__ = "0.1.0"

__all__ = [
    "AliasDefinition",
    "CorpusStore",
    "FileRecord",
    "IngestReport",
    "KnowledgeBase",
    "MalformedDefinition",
    "ParseError",
    "ParsedCommand",
    "Practice",
    "PracticeLabel",
    "RawAliasOccurrence",
    "RepoRecord",
    "Separator",
    "UnbalancedQuote",
    "classify",
    "classify_store",
    "compression_ratio",
    "damerau_levenshtein",
    "default_kb",
    "export",
    "extract_aliases",
    "ingest",
    "parse_alias",
    "parse_definition",
    "parse_source",
    "scan",
    "tokenize_value",
]
