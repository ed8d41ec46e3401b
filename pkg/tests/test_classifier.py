from __future__ import annotations

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from aliasmine.classifier import (
    Practice,
    classify,
    compression_ratio,
    is_bookmark,
    is_colorizing,
    is_location,
    is_nickname,
    is_override,
    is_privilege_elevation,
    is_subcommand_abbrev,
    is_subcommand_chain,
    is_substitution,
    is_transform_pipeline,
    practice_kinds,
)
from aliasmine.knowledge import default_kb
from aliasmine.parser import parse_alias
from conftest import load_fixture
from oracles import HypothesisChooser, gen_alias

KB = default_kb()


def kinds_of(a):
    return practice_kinds(classify(a, KB))


def kinds(statement):
    return kinds_of(parse_alias(statement))


def alias(statement):
    return parse_alias(statement)


def test_fixture_is_large_enough():
    assert len(load_fixture()) >= 50


def test_fixture_labels_reproduced():
    wrong = []
    for statement, expected, typo in load_fixture():
        labels = classify(parse_alias(statement), KB)
        got = practice_kinds(labels)
        got_typo = any(l.typo_fix for l in labels)
        if got != expected or got_typo != typo:
            wrong.append((statement, sorted(expected), sorted(got), typo, got_typo))
    assert wrong == []


@pytest.mark.parametrize(
    "statement, expected",
    [
        ("alias gs='git status'", {Practice.ABBREVIATING_SUBCOMMANDS}),
        ("alias df='df -h'", {Practice.OVERRIDING_DEFAULTS}),
        (
            "alias update='sudo apt-get update && sudo apt-get upgrade'",
            {Practice.ELEVATING_PRIVILEGE, Practice.CHAINING_SUBCOMMANDS},
        ),
    ],
)
def test_classify_examples(statement, expected):
    assert kinds(statement) == expected


def test_nickname_and_typo():
    g = is_nickname(alias("alias g=git"), KB)
    got = is_nickname(alias("alias got=git"), KB)
    assert g is not None and not g.typo_fix
    assert got is not None and got.typo_fix
    assert is_nickname(alias("alias ll='ls -l'"), KB) is None


def test_subcommand_abbreviation():
    assert is_subcommand_abbrev(alias("alias gd='git diff'"), KB) is not None
    assert is_subcommand_abbrev(alias("alias gcm='git commit -m'"), KB) is None
    assert is_subcommand_abbrev(alias("alias x='ls status'"), KB) is None
    assert is_subcommand_abbrev(alias("alias gp='git --paginate'"), KB) is None


@pytest.mark.parametrize(
    "arg, expected",
    [
        ("~/Downloads", True),
        ("../..", False),
        ("towel.blinkenlights.nl", True),
        ("192.168.0.1", True),
        ("example.com:8080", True),
        ("/dev/null", False),
        ("origin/master", False),
        ("file.txt", False),
        ("-la", False),
    ],
)
def test_location_rule(arg, expected):
    assert is_location(arg, KB) is expected


def test_bookmark():
    assert is_bookmark(alias("alias onoz='cat /var/log/errors.log'"), KB) is not None
    assert is_bookmark(alias("alias gm='git merge origin/master'"), KB) is None
    assert is_bookmark(alias("alias c=clear"), KB) is None


def test_bookmark_in_env_value_has_its_own_evidence():
    label = is_bookmark(alias("alias e='EDITOR=/usr/bin/vim sudoedit'"), KB)
    assert label is not None and "env" in label.evidence


def test_substitution_and_override():
    assert is_substitution(alias("alias more=less"), KB) is not None
    assert is_substitution(alias("alias vi=vim"), KB) is not None
    assert is_substitution(alias("alias grep='grep --color=auto'"), KB) is None
    assert is_override(alias("alias ls='ls -G'")) is not None
    assert is_override(alias("alias mount='mount | column -t'")) is not None
    assert is_override(alias("alias ls=ls")) is None


def test_colorizing():
    assert is_colorizing(alias("alias grep='grep --color=auto'"), KB) is not None
    assert is_colorizing(alias("alias diff=colordiff"), KB) is not None
    assert is_colorizing(alias("alias ssh='TERM=xterm-256color ssh'"), KB) is not None
    assert is_colorizing(alias("alias log='tail -f x | ccze'"), KB) is not None
    assert is_colorizing(alias("alias mv='mv -i'"), KB) is None


def test_privilege_elevation():
    assert is_privilege_elevation(alias("alias agi='sudo apt-get install'")) is not None
    assert is_privilege_elevation(alias("alias ls=ls")) is None
    assert is_privilege_elevation(alias("alias x='cat f | sudo tee g'")) is not None


def test_transform_pipeline():
    assert is_transform_pipeline(alias("alias ducks='du -cksh * | sort -hr | head -n 15'"))
    assert is_transform_pipeline(alias("alias gp='git stash && git pull && git stash pop'")) is None
    assert is_transform_pipeline(alias("alias l='ls -l'")) is None
    assert is_transform_pipeline(alias("alias e='make |& less'")) is not None


def test_subcommand_chain():
    assert is_subcommand_chain(alias("alias brewup='brew update && brew upgrade'"), KB)
    assert is_subcommand_chain(alias("alias whoops='git reset --hard && git clean -df'"), KB)
    assert is_subcommand_chain(alias("alias b='brew update; brew upgrade'"), KB)
    assert is_subcommand_chain(alias("alias x='ls; ls'"), KB) is None
    assert is_subcommand_chain(alias("alias y='git pull | git log'"), KB) is None


@pytest.mark.parametrize(
    "statement, ratio",
    [("alias gs='git status'", 5.0), ("alias ab=ab", 1.0), ("alias longname=x", 0.125)],
)
def test_compression_ratio(statement, ratio):
    assert compression_ratio(alias(statement)) == ratio


# --- properties -------------------------------------------------------------

PROPS = settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
COMMON = ["ls", "git", "grep", "brew", "sudo", "cat", "vim", "less", "mv", "apt-get"]


def _alias_from(data):
    gen = gen_alias(HypothesisChooser(data))
    # bias names and command words towards real commands so predicates fire
    name = data.draw(st.sampled_from(COMMON + [gen.name]))
    first = data.draw(st.sampled_from(COMMON + [gen.commands[0].name]))
    value = gen.canonical().replace(gen.commands[0].name, first, 1)
    return parse_alias(f"alias {name}={gen.wrapper}{value}{gen.wrapper}")


@PROPS
@given(st.data())
def test_substitution_and_override_are_exclusive(data):
    got = kinds_of(_alias_from(data))
    assert not {Practice.SUBSTITUTING_COMMANDS, Practice.OVERRIDING_DEFAULTS} <= got


@PROPS
@given(st.data())
def test_nickname_excludes_override_and_fixes_ratio(data):
    a = _alias_from(data)
    got = kinds_of(a)
    if Practice.NICKNAMING in got:
        assert Practice.OVERRIDING_DEFAULTS not in got
        assert compression_ratio(a) == len(a.commands[0].name) / len(a.name)


@PROPS
@given(st.data())
def test_pipeline_needs_two_commands_and_classify_is_pure(data):
    a = _alias_from(data)
    first = classify(a, KB)
    assert classify(a, KB) == first
    if Practice.TRANSFORMING_DATA in practice_kinds(first):
        assert len(a.commands) >= 2
    assert (Practice.ELEVATING_PRIVILEGE in practice_kinds(first)) == any(
        c.sudo for c in a.commands
    )
