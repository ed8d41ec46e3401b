"""Extraction and decomposition of POSIX ``alias name=value`` definitions.

The lexer here is deliberately small: it knows about quoting, escapes,
command substitution, parameter expansion braces, comments, heredocs and the
six command separators. Everything else in shell grammar is treated as
ordinary word text.
"""

from __future__ import annotations

import bisect
import enum
import re
from collections import Counter
from dataclasses import dataclass
from typing import Hashable, Iterator

__all__ = [
    "AliasDefinition",
    "MalformedDefinition",
    "ParseError",
    "ParsedCommand",
    "RawAliasOccurrence",
    "Separator",
    "UnbalancedQuote",
    "extract_aliases",
    "parse_alias",
    "parse_definition",
    "parse_source",
    "render_commands",
    "tokenize_value",
    "unquote",
]


class ParseError(ValueError):
    pass


class UnbalancedQuote(ParseError):
    pass


class MalformedDefinition(ParseError):
    pass


class Separator(str, enum.Enum):
    PIPE = "pipe"
    PIPE_ERR = "pipe-err"
    AND = "and"
    OR = "or"
    BACKGROUND = "background"
    SEQ = "seq"
    NONE = "none"

    @property
    def operator(self) -> str:
        return _SEP_TO_OP[self]

    @classmethod
    def from_operator(cls, op: str) -> "Separator":
        return _OP_TO_SEP[op]


_OP_TO_SEP = {
    "|&": Separator.PIPE_ERR,
    "||": Separator.OR,
    "&&": Separator.AND,
    "|": Separator.PIPE,
    "&": Separator.BACKGROUND,
    ";": Separator.SEQ,
}
_SEP_TO_OP = {sep: op for op, sep in _OP_TO_SEP.items()}
_SEP_TO_OP[Separator.NONE] = ""

# longest match first
_OPERATORS = ("|&", "||", "&&", "|", "&", ";")
_TRAILING_OK = frozenset({Separator.SEQ, Separator.BACKGROUND})

_ENV_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*=")
_BAD_NAME_CHARS = frozenset(" \t\n=|&;<>()'\"`$\\")
_WS = " \t\r\f\v"


@dataclass(frozen=True, slots=True)
class RawAliasOccurrence:
    """One ``name=value`` pair of an ``alias`` statement found in a file."""

    file_id: Hashable
    line: int
    text: str
    pair_index: int = 0
    mid_line: bool = False


@dataclass(frozen=True, slots=True)
class ParsedCommand:
    name: str
    arguments: tuple[str, ...] = ()
    env_prefixes: tuple[str, ...] = ()
    sudo: bool = False
    separator_after: Separator = Separator.NONE
    # spelling as written, e.g. ``\rm``; ``name`` is the quote-removed word
    raw_name: str = ""

    def __post_init__(self) -> None:
        if not self.raw_name:
            object.__setattr__(self, "raw_name", self.name)

    @property
    def unquoted_arguments(self) -> tuple[str, ...]:
        return tuple(unquote(a) for a in self.arguments)

    def words(self) -> list[str]:
        out = list(self.env_prefixes)
        if self.sudo:
            out.append("sudo")
        if self.raw_name:
            out.append(self.raw_name)
        out.extend(self.arguments)
        return out

    def render(self) -> str:
        return " ".join(self.words())


@dataclass(frozen=True, slots=True)
class AliasDefinition:
    name: str
    value: str
    commands: tuple[ParsedCommand, ...] = ()
    file_id: Hashable = None
    line: int = 0
    pair_index: int = 0
    mid_line: bool = False

    @property
    def separators(self) -> tuple[Separator, ...]:
        """Separators between consecutive commands (trailing ones excluded)."""
        return tuple(c.separator_after for c in self.commands[:-1])


# ---------------------------------------------------------------------------
# lexer
# ---------------------------------------------------------------------------


@dataclass(slots=True)
class _Token:
    kind: str  # "word" | "op" | "newline"
    text: str
    start: int
    end: int


def _single_quote_end(text: str, i: int) -> int:
    close = text.find("'", i)
    if close < 0:
        raise UnbalancedQuote(f"unterminated single quote at offset {i - 1}")
    return close + 1


def _double_quote_end(text: str, i: int) -> int:
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\\":
            i += 2
        elif c == '"':
            return i + 1
        elif c == "`":
            i = _backtick_end(text, i + 1)
        elif c == "$" and i + 1 < n and text[i + 1] == "(":
            i = _nested_end(text, i + 2, "(", ")")
        elif c == "$" and i + 1 < n and text[i + 1] == "{":
            i = _nested_end(text, i + 2, "{", "}")
        else:
            i += 1
    raise UnbalancedQuote("unterminated double quote")


def _backtick_end(text: str, i: int) -> int:
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\\":
            i += 2
        elif c == "`":
            return i + 1
        else:
            i += 1
    raise UnbalancedQuote("unterminated backtick")


def _nested_end(text: str, i: int, opener: str, closer: str) -> int:
    depth = 1
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\\":
            i += 2
        elif c == "'":
            i = _single_quote_end(text, i + 1)
        elif c == '"':
            i = _double_quote_end(text, i + 1)
        elif c == "`":
            i = _backtick_end(text, i + 1)
        elif c == opener:
            depth += 1
            i += 1
        elif c == closer:
            depth -= 1
            i += 1
            if depth == 0:
                return i
        else:
            i += 1
    raise UnbalancedQuote(f"unterminated '{opener}' substitution")


def _word_end(text: str, i: int) -> int:
    start = i
    n = len(text)
    while i < n:
        c = text[i]
        if c in _WS or c == "\n":
            break
        if c == "\\":
            i += 2
            continue
        if c == "'":
            i = _single_quote_end(text, i + 1)
            continue
        if c == '"':
            i = _double_quote_end(text, i + 1)
            continue
        if c == "`":
            i = _backtick_end(text, i + 1)
            continue
        if c == "$" and i + 1 < n and text[i + 1] in "({":
            opener = text[i + 1]
            i = _nested_end(text, i + 2, opener, ")" if opener == "(" else "}")
            continue
        if c == ";":
            break
        if c == "|":
            # ``>|`` is a clobbering redirect, not a pipe
            if i > start and text[i - 1] == ">":
                i += 1
                continue
            break
        if c == "&":
            # ``>&``/``<&`` duplicate descriptors, ``&>`` redirects both streams
            if (i > start and text[i - 1] in "<>") or (i + 1 < n and text[i + 1] == ">"):
                i += 1
                continue
            break
        i += 1
    return min(i, n)


def _lex(text: str, *, file_mode: bool) -> Iterator[_Token]:
    """Yield words, operators and newlines at quote depth zero.

    In file mode ``#`` at a word start begins a comment and heredoc bodies are
    skipped. Unbalanced quoting raises :class:`UnbalancedQuote` in value mode;
    in file mode it is reported as a ``bad`` token and lexing resumes on the
    next line.
    """
    n = len(text)
    i = 0
    heredocs: list[tuple[str, bool]] = []
    want_delim: bool | None = None  # strip-tabs flag while waiting for a delimiter word
    while i < n:
        c = text[i]
        if c in _WS:
            i += 1
            continue
        if c == "\n":
            yield _Token("newline", "\n", i, i + 1)
            i += 1
            if heredocs:
                i = _skip_heredocs(text, i, heredocs)
                heredocs = []
            continue
        if c == "\\" and i + 1 < n and text[i + 1] == "\n":
            i += 2
            continue
        if file_mode and c == "#":
            nl = text.find("\n", i)
            i = n if nl < 0 else nl
            continue
        op = None
        if not (c == "&" and i + 1 < n and text[i + 1] == ">"):
            for candidate in _OPERATORS:
                if text.startswith(candidate, i):
                    op = candidate
                    break
        if op is not None:
            yield _Token("op", op, i, i + len(op))
            i += len(op)
            continue
        try:
            end = _word_end(text, i)
        except UnbalancedQuote:
            if not file_mode:
                raise
            nl = text.find("\n", i)
            end = n if nl < 0 else nl
            yield _Token("bad", text[i:end], i, end)
            i = end
            continue
        word = text[i:end]
        yield _Token("word", word, i, end)
        i = end
        if file_mode:
            if want_delim is not None:
                heredocs.append((unquote(word), want_delim))
                want_delim = None
            elif word.startswith("<<") and not word.startswith("<<<"):
                rest = word[2:]
                strip_tabs = rest.startswith("-")
                if strip_tabs:
                    rest = rest[1:]
                if rest:
                    heredocs.append((unquote(rest), strip_tabs))
                else:
                    want_delim = strip_tabs


def _skip_heredocs(text: str, i: int, heredocs: list[tuple[str, bool]]) -> int:
    n = len(text)
    for delim, strip_tabs in heredocs:
        while i < n:
            nl = text.find("\n", i)
            line_end = n if nl < 0 else nl
            line = text[i:line_end]
            i = line_end + 1
            if (line.lstrip("\t") if strip_tabs else line) == delim:
                break
    return min(i, n)


# ---------------------------------------------------------------------------
# quote removal
# ---------------------------------------------------------------------------

_DQ_ESCAPABLE = frozenset('$`"\\\n')


def unquote(word: str) -> str:
    """Shell quote removal: strip quotes and escapes, keep everything else."""
    if "'" not in word and '"' not in word and "\\" not in word:
        return word
    out: list[str] = []
    i = 0
    n = len(word)
    while i < n:
        c = word[i]
        if c == "\\":
            if i + 1 < n and word[i + 1] != "\n":
                out.append(word[i + 1])
            i += 2
        elif c == "'":
            close = word.find("'", i + 1)
            if close < 0:
                out.append(word[i + 1 :])
                break
            out.append(word[i + 1 : close])
            i = close + 1
        elif c == '"':
            i += 1
            while i < n and word[i] != '"':
                if word[i] == "\\" and i + 1 < n and word[i + 1] in _DQ_ESCAPABLE:
                    if word[i + 1] != "\n":
                        out.append(word[i + 1])
                    i += 2
                else:
                    out.append(word[i])
                    i += 1
            i += 1
        else:
            out.append(c)
            i += 1
    return "".join(out)


def _whole_span(word: str) -> str | None:
    """Return the inside of ``word`` if it is exactly one quoted span."""
    if len(word) < 2:
        return None
    try:
        if word[0] == "'" and _single_quote_end(word, 1) == len(word):
            return word[1:-1]
        if word[0] == '"' and _double_quote_end(word, 1) == len(word):
            return word[1:-1]
    except UnbalancedQuote:
        return None
    return None


def _first_unquoted(word: str, char: str) -> int:
    i = 0
    n = len(word)
    while i < n:
        c = word[i]
        if c == char:
            return i
        if c == "\\":
            i += 2
        elif c == "'":
            i = _single_quote_end(word, i + 1)
        elif c == '"':
            i = _double_quote_end(word, i + 1)
        else:
            i += 1
    return -1


# ---------------------------------------------------------------------------
# value tokenization
# ---------------------------------------------------------------------------


def _build_command(words: list[str], sep: Separator) -> ParsedCommand:
    k = 0
    while k < len(words) and _ENV_RE.match(words[k]):
        k += 1
    env = tuple(words[:k])
    rest = words[k:]
    sudo = False
    if len(rest) > 1 and rest[0] == "sudo":
        sudo = True
        rest = rest[1:]
    if not rest:
        return ParsedCommand(name="", env_prefixes=env, separator_after=sep)
    raw_name = rest[0]
    return ParsedCommand(
        name=unquote(raw_name),
        arguments=tuple(rest[1:]),
        env_prefixes=env,
        sudo=sudo,
        separator_after=sep,
        raw_name=raw_name,
    )


def tokenize_value(value: str) -> list[ParsedCommand]:
    """Split an alias value into commands and quote-aware argument tokens.

    Argument tokens keep their quotes exactly as written (``'inet '`` stays
    ``'inet '``); use :func:`unquote` or ``ParsedCommand.unquoted_arguments``
    for the shell-level string. A trailing ``;`` or ``&`` is recorded as the
    last command's ``separator_after`` instead of opening an empty command.
    """
    segments: list[tuple[list[str], Separator]] = []
    current: list[str] = []
    trailing_newline = False
    for tok in _lex(value, file_mode=False):
        if tok.kind == "word":
            current.append(tok.text)
            trailing_newline = False
            continue
        if tok.kind == "newline":
            if current:
                segments.append((current, Separator.SEQ))
                current = []
                trailing_newline = True
            continue
        sep = Separator.from_operator(tok.text)
        if not current:
            if sep is Separator.SEQ and trailing_newline:
                # ``cmd;`` followed by a newline
                continue
            raise MalformedDefinition(f"empty command before {tok.text!r}")
        segments.append((current, sep))
        current = []
        trailing_newline = False
    if current:
        segments.append((current, Separator.NONE))
    elif segments:
        words, sep = segments[-1]
        if trailing_newline:
            segments[-1] = (words, Separator.NONE)
        elif sep not in _TRAILING_OK:
            raise MalformedDefinition(f"dangling {sep.operator!r} at end of value")
    return [_build_command(words, sep) for words, sep in segments]


def render_commands(commands: tuple[ParsedCommand, ...] | list[ParsedCommand]) -> str:
    """Reassemble commands with single spaces around every separator."""
    parts: list[str] = []
    for cmd in commands:
        parts.append(cmd.render())
        if cmd.separator_after is not Separator.NONE:
            parts.append(cmd.separator_after.operator)
    return " ".join(parts)


# ---------------------------------------------------------------------------
# extraction
# ---------------------------------------------------------------------------


def _join_continuations(text: str) -> tuple[str, list[int], list[int]]:
    """Join backslash-newline continuations.

    Returns the joined text, the offset of every logical line in it and the
    physical (1-based) line each logical line starts on.
    """
    physical = text.split("\n")
    logical: list[str] = []
    first_line: list[int] = []
    parts: list[str] = []
    start = 1
    last = len(physical)
    for number, line in enumerate(physical, 1):
        if not parts:
            start = number
        trailing = len(line) - len(line.rstrip("\\"))
        if trailing % 2 == 1 and number < last:
            parts.append(line[:-1])
            continue
        parts.append(line)
        logical.append("".join(parts))
        first_line.append(start)
        parts = []
    offsets = []
    pos = 0
    for line in logical:
        offsets.append(pos)
        pos += len(line) + 1
    return "\n".join(logical), offsets, first_line


def _pair_has_equals(pair: str) -> bool:
    inner = _whole_span(pair)
    try:
        return _first_unquoted(inner if inner is not None else pair, "=") > 0
    except UnbalancedQuote:
        return False


def extract_aliases(
    source_text: str | bytes,
    file_id: Hashable = None,
    tally: Counter | None = None,
) -> list[RawAliasOccurrence]:
    """Find every ``alias`` statement in shell source.

    Statements are found at line starts and after ``;``, ``&&``, ``||``,
    ``|`` or ``&`` (``mid_line=True``). Each ``name=value`` pair of a
    statement becomes its own occurrence. Skipped material is counted in
    ``tally`` by reason.
    """
    if isinstance(source_text, bytes):
        source_text = source_text.decode("utf-8", errors="replace")
    tally = tally if tally is not None else Counter()
    text, offsets, first_line = _join_continuations(source_text.replace("\r\n", "\n"))
    out: list[RawAliasOccurrence] = []

    statement: list[_Token] = []
    after_op = False

    def flush(next_after_op: bool) -> None:
        nonlocal statement, after_op
        if statement and statement[0].text == "alias":
            _emit(statement, after_op)
        statement = []
        after_op = next_after_op

    def _emit(words: list[_Token], mid_line: bool) -> None:
        head = words[0]
        line = first_line[bisect.bisect_right(offsets, head.start) - 1]
        pairs = words[1:]
        if not pairs:
            tally["bare-alias"] += 1
            return
        if pairs[0].text.startswith("-"):
            tally["alias-flags"] += 1
            return
        stmt = text[head.start : words[-1].end]
        for idx, pair in enumerate(pairs):
            if not _pair_has_equals(pair.text):
                tally["non-posix-pair"] += 1
                continue
            out.append(RawAliasOccurrence(file_id, line, stmt, idx, mid_line))

    for tok in _lex(text, file_mode=True):
        if tok.kind == "word":
            statement.append(tok)
        elif tok.kind == "op":
            flush(True)
        elif tok.kind == "newline":
            flush(False)
        else:
            tally["unbalanced-quote"] += 1
            if statement and statement[0].text == "alias":
                tally["unbalanced-statement"] += 1
            statement = []
    flush(False)
    return out


def parse_definition(raw: RawAliasOccurrence) -> AliasDefinition:
    """Split one occurrence into name, value and commands."""
    try:
        words = [t.text for t in _lex(raw.text, file_mode=False) if t.kind == "word"]
    except UnbalancedQuote as exc:
        raise MalformedDefinition(str(exc)) from exc
    if not words or words[0] != "alias":
        raise MalformedDefinition("not an alias statement")
    if raw.pair_index + 1 >= len(words):
        raise MalformedDefinition(f"no pair #{raw.pair_index}")
    pair = words[raw.pair_index + 1]
    inner = _whole_span(pair)
    if inner is not None:
        pair = inner
    try:
        eq = _first_unquoted(pair, "=")
    except UnbalancedQuote as exc:
        raise MalformedDefinition(str(exc)) from exc
    if eq < 0:
        raise MalformedDefinition("no '=' in alias pair")
    name = pair[:eq]
    if not name:
        raise MalformedDefinition("empty alias name")
    if any(ch in _BAD_NAME_CHARS for ch in name):
        raise MalformedDefinition(f"invalid alias name {name!r}")
    value = _value_of(pair[eq + 1 :])
    try:
        commands = tokenize_value(value)
    except UnbalancedQuote as exc:
        raise MalformedDefinition(str(exc)) from exc
    return AliasDefinition(
        name=name,
        value=value,
        commands=tuple(commands),
        file_id=raw.file_id,
        line=raw.line,
        pair_index=raw.pair_index,
        mid_line=raw.mid_line,
    )


def _value_of(word: str) -> str:
    if not word:
        return ""
    inner = _whole_span(word)
    if inner is not None:
        return inner
    if "'" not in word and '"' not in word:
        return word
    # concatenated spans such as 'git log --format='"'"'%h'"'"''
    return unquote(word)


def parse_source(
    source_text: str | bytes,
    file_id: Hashable = None,
    tally: Counter | None = None,
) -> list[AliasDefinition]:
    """Extract and parse every alias in a file, tallying malformed ones."""
    tally = tally if tally is not None else Counter()
    out = []
    for raw in extract_aliases(source_text, file_id, tally):
        try:
            out.append(parse_definition(raw))
        except MalformedDefinition:
            tally["malformed"] += 1
    return out


def parse_alias(statement: str) -> AliasDefinition:
    """Parse a single ``alias name=value`` statement given as a string."""
    found = extract_aliases(statement)
    if not found:
        raise MalformedDefinition(f"no alias definition in {statement!r}")
    return parse_definition(found[0])
