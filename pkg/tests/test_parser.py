from __future__ import annotations

from collections import Counter

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from aliasmine.parser import (
    MalformedDefinition,
    RawAliasOccurrence,
    Separator,
    UnbalancedQuote,
    extract_aliases,
    parse_alias,
    parse_definition,
    parse_source,
    render_commands,
    tokenize_value,
    unquote,
)
from oracles import SEP_NAMES, HypothesisChooser, alias_file, gen_alias, spaced_value

IPS = """alias ips="ifconfig | grep 'inet ' | cut -d' ' -f2"\n"""


def test_single_definition_found_on_line_one():
    found = extract_aliases("alias ll='ls -l'\n", "f")
    assert [(o.file_id, o.line, o.text) for o in found] == [("f", 1, "alias ll='ls -l'")]


def test_commented_definition_is_ignored():
    assert extract_aliases("# alias ll='ls -l'\n") == []
    assert extract_aliases("   # alias ll='ls -l'\n") == []


def test_two_pairs_in_one_statement():
    found = extract_aliases("alias a='x' b='y'\n")
    assert [(o.line, o.pair_index) for o in found] == [(1, 0), (1, 1)]
    assert [parse_definition(o).name for o in found] == ["a", "b"]
    assert all(o.text == "alias a='x' b='y'" for o in found)


def test_non_posix_pair_is_skipped_and_tallied():
    tally = Counter()
    assert extract_aliases("alias ll ls\n", tally=tally) == []
    assert tally["non-posix-pair"] == 2


def test_flag_statements_are_skipped():
    tally = Counter()
    assert extract_aliases("alias -p\nalias -g G='| grep'\n", tally=tally) == []
    assert tally["alias-flags"] == 2


def test_mid_line_statements_are_flagged():
    found = extract_aliases("[ -x /usr/bin/vim ] && alias vi=vim; alias ll='ls -l'\n")
    assert [(parse_definition(o).name, o.mid_line) for o in found] == [("vi", True), ("ll", True)]
    assert not extract_aliases("alias a=b\n")[0].mid_line


def test_line_numbers_survive_continuations_and_crlf():
    text = "echo one \\\n  two\r\nalias x='y'\r\n\nalias z='w \\\n q'\n"
    found = extract_aliases(text)
    assert [o.line for o in found] == [3, 5]
    assert parse_definition(found[1]).value == "w  q"


def test_heredoc_bodies_are_not_scanned():
    text = "cat <<EOF\nalias fake='no'\nEOF\nalias real='yes'\n"
    assert [parse_definition(o).name for o in extract_aliases(text)] == ["real"]


def test_invalid_utf8_is_replaced_not_fatal():
    defs = parse_source(b"alias caf\xe9='echo \xff'\nalias ok='true'\n")
    assert [d.name for d in defs][-1] == "ok"


def test_unbalanced_quote_is_tallied_and_parsing_recovers():
    tally = Counter()
    defs = parse_source("alias bad='oops\nalias good='fine'\n", tally=tally)
    assert [d.name for d in defs] == ["good"]
    assert tally["unbalanced-statement"] == 1


def test_ips_decomposition():
    alias = parse_alias(IPS)
    assert alias.name == "ips"
    assert [c.name for c in alias.commands] == ["ifconfig", "grep", "cut"]
    assert [c.arguments for c in alias.commands] == [(), ("'inet '",), ("-d' '", "-f2")]
    assert [c.unquoted_arguments for c in alias.commands][1:] == [("inet ",), ("-d ", "-f2")]
    assert alias.separators == (Separator.PIPE, Separator.PIPE)


def test_empty_value_gives_no_commands():
    alias = parse_alias("alias x=''")
    assert (alias.name, alias.value, alias.commands) == ("x", "", ())


def test_sudo_is_unwrapped():
    (cmd,) = parse_alias("alias agi='sudo apt-get install'").commands
    assert (cmd.name, cmd.arguments, cmd.sudo) == ("apt-get", ("install",), True)


def test_bare_sudo_keeps_its_name():
    (cmd,) = tokenize_value("sudo")
    assert (cmd.name, cmd.sudo) == ("sudo", False)


def test_quoted_span_is_one_argument():
    (cmd,) = tokenize_value('echo "hello world"')
    assert cmd.name == "echo"
    assert cmd.arguments == ('"hello world"',)
    assert cmd.unquoted_arguments == ("hello world",)


def test_ducks_has_three_piped_commands():
    cmds = tokenize_value("du -cksh * | sort -hr | head -n 15")
    assert [c.name for c in cmds] == ["du", "sort", "head"]
    assert [c.separator_after for c in cmds] == [Separator.PIPE, Separator.PIPE, Separator.NONE]


def test_env_prefix_is_collected():
    (cmd,) = tokenize_value("TERM=xterm256color ssh")
    assert (cmd.name, cmd.env_prefixes, cmd.arguments) == ("ssh", ("TERM=xterm256color",), ())


@pytest.mark.parametrize(
    "value, seps",
    [
        ("a |& b", ["pipe-err"]),
        ("a&&b||c", ["and", "or"]),
        ("a & b ; c", ["background", "seq"]),
        ("a 2>&1 | b", ["pipe"]),
        ("a &> /dev/null; b", ["seq"]),
        ("a >| f && b", ["and"]),
        ("x $(a | b; c) | y", ["pipe"]),
        ("x `a | b` && y", ["and"]),
        ("x ${V:-a|b} || y", ["or"]),
        ("echo 'a | b' \"c && d\" \\| e", []),
    ],
)
def test_separators_respect_quoting_and_redirects(value, seps):
    cmds = tokenize_value(value)
    assert [s.value for s in (c.separator_after for c in cmds[:-1])] == seps
    assert len(cmds) == len(seps) + 1


def test_trailing_background_attaches_to_last_command():
    cmds = tokenize_value("firefox &")
    assert [(c.name, c.separator_after) for c in cmds] == [("firefox", Separator.BACKGROUND)]


@pytest.mark.parametrize("value", ["| a", "a |", "a && && b", "a ;; b", "a ||"])
def test_dangling_operators_are_malformed(value):
    with pytest.raises(MalformedDefinition):
        tokenize_value(value)


def test_unbalanced_value_raises():
    with pytest.raises(UnbalancedQuote):
        tokenize_value("echo 'oops")
    with pytest.raises(MalformedDefinition):
        parse_definition(RawAliasOccurrence(None, 1, "alias x='oops"))


@pytest.mark.parametrize(
    "statement",
    ["alias =x", "alias 'a b'=c", "alias a|b=c", "alias a;b=c"],
)
def test_bad_names_are_rejected(statement):
    tally = Counter()
    assert parse_source(statement + "\n", tally=tally) == []
    assert sum(tally.values()) >= 1


def test_backslash_command_keeps_raw_spelling():
    (cmd,) = parse_alias("alias rm='\\rm -i'").commands
    assert (cmd.name, cmd.raw_name) == ("rm", "\\rm")


def test_whole_quoted_pair_is_unwrapped():
    alias = parse_alias("alias 'gs=git status'")
    assert (alias.name, alias.value) == ("gs", "git status")


def test_concatenated_quotes_are_removed_from_value():
    alias = parse_alias("alias q='a '\"'\"'b'\"'\"''")
    assert alias.value == "a 'b'"


def test_unquote_examples():
    assert unquote("-d' '") == "-d "
    assert unquote('"a \\"b\\" \\x"') == 'a "b" \\x'
    assert unquote("a\\ b") == "a b"


def test_parsing_twice_is_identical():
    assert parse_source(IPS * 3) == parse_source(IPS * 3)


# --- properties -------------------------------------------------------------

PROPS = settings(max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def _check_against_generated(parsed, gen):
    assert parsed.name == gen.name
    assert len(parsed.commands) == gen.n_separators + 1
    assert render_commands(parsed.commands) == gen.canonical()
    for pc, gc in zip(parsed.commands, gen.commands):
        assert pc.env_prefixes == gc.env
        assert pc.sudo == gc.sudo
        assert pc.name == gc.name != "sudo"
        assert pc.arguments == tuple(a.text for a in gc.args)
        assert pc.unquoted_arguments == tuple(a.plain for a in gc.args)
        assert pc.separator_after.value == SEP_NAMES.get(gc.sep, "none")


@PROPS
@given(st.data())
def test_generated_files_parse_to_their_construction(data):
    text, expected = alias_file(HypothesisChooser(data), n_lines=4)
    parsed = parse_source(text)
    assert len(parsed) == len(expected)
    for p, g in zip(parsed, expected):
        _check_against_generated(p, g)


@PROPS
@given(st.data())
def test_whitespace_runs_do_not_change_decomposition(data):
    c = HypothesisChooser(data)
    gen = gen_alias(c)
    value = spaced_value(c, gen)
    assert render_commands(tokenize_value(value)) == gen.canonical()


@PROPS
@given(st.data())
def test_command_count_matches_separator_count(data):
    gen = gen_alias(HypothesisChooser(data))
    cmds = tokenize_value(gen.canonical())
    between = [c.separator_after for c in cmds[:-1]]
    assert len(cmds) == len(between) + 1 == gen.n_separators + 1
    assert Separator.NONE not in between


@PROPS
@given(st.text(st.characters(blacklist_categories=("Cs",)), max_size=200))
def test_extraction_never_raises_on_arbitrary_text(text):
    tally = Counter()
    first = parse_source(text, tally=tally)
    assert parse_source(text) == first
    for alias in first:
        assert alias.name and not any(ch in alias.name for ch in " \t=|&;'\"")


@PROPS
@given(st.binary(max_size=200))
def test_extraction_accepts_arbitrary_bytes(blob):
    parse_source(blob)
