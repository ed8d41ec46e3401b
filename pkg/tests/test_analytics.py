from __future__ import annotations

import io
import math

from hypothesis import given, settings
from hypothesis import strategies as st

from aliasmine.analytics import (
    Table,
    command_breakdown,
    compression_histogram,
    description_words,
    file_bucket,
    histogram_median,
    pipeline_command_shares,
    pipeline_flows,
    practice_matrix,
    provenance_summary,
    representative_sample,
    top_arguments,
    top_commands,
    top_names,
    write_table,
)
from aliasmine.classifier import classify_store
from aliasmine.corpus import CorpusStore, RepoRecord
from aliasmine.knowledge import default_kb
from oracles import lower_median

MIXED = {
    ".bashrc": "alias gs='git status'\n" * 3 + "alias gst='git status'\nalias gc='git commit -m'\n",
    ".zshrc": "alias ll='ls -l'\nalias la='ls -a'\nalias mv='mv -i'\n" * 2,
    ".bash_aliases": "alias p1='ps aux | sort | head'\nalias p2='ps | sort | head'\n"
    "alias p3='ps | grep x'\nalias up='brew update && brew upgrade'\n",
}


def csv_text(table: Table, fmt: str = "csv") -> str:
    buf = io.StringIO()
    write_table(table, buf, fmt)
    return buf.getvalue()


def column_sum_ok(table: Table, column: str) -> bool:
    values = [r[column] for r in table.records() if r[column] is not None]
    return sum(values) <= 100 + 0.01 * len(values)


def test_top_commands_hand_count(make_store):
    store = make_store({".bashrc": "alias ll='ls -l'\nalias la='ls -a'\n"})
    assert top_commands(store, 5).rows == [("ls", 2, 100.0)]


def test_top_tables_rank_with_lexicographic_ties(make_store):
    store = make_store(MIXED)
    names = top_names(store, 3)
    assert names.rows[0] == ("gs", 3, 20.0)
    assert [r[0] for r in names.rows[1:]] == ["la", "ll"]
    args = top_arguments(store, None)
    assert ("status", 4) == args.rows[0][:2]
    for table, col in ((names, "percent"), (args, "percent"), (top_commands(store, None), "percent")):
        assert column_sum_ok(table, col)


def test_empty_store_gives_empty_tables():
    with CorpusStore() as store:
        for table in (top_names(store), top_commands(store), top_arguments(store)):
            assert table.rows == []
        assert command_breakdown(store, "git").rows == []
        assert pipeline_flows(store).rows == []
        assert practice_matrix(store).rows == []
        _, words = provenance_summary(store)
        assert words.rows == []
        assert [r[2] for r in compression_histogram(store).rows] == [0] * 5


def test_breakdown_alias_shares(make_store):
    store = make_store(MIXED)
    rows = command_breakdown(store, "git").records()
    status = [r for r in rows if r["arguments"] == "status"]
    assert [(r["alias"], r["alias_count"], r["alias_percent"]) for r in status] == [
        ("gs", 3, 75.0), ("gst", 1, 25.0),
    ]
    assert status[0]["count"] == 4 and status[0]["percent"] == 80.0
    assert [r["arguments"] for r in rows][-1] == "commit -m"
    assert command_breakdown(store, "absent").rows == []


def test_single_alias_histogram(make_store):
    table = compression_histogram(make_store({".bashrc": "alias gs='git status'\n"}))
    hits = [(lo, hi) for lo, hi, n, _ in table.rows if n]
    assert len(hits) == 1 and hits[0][0] <= 5.0 < hits[0][1]
    assert sum(1 for r in table.rows if r[3]) == 1


def test_histogram_ratio_one_marker_and_zero_row():
    table = compression_histogram([0.0, 1.0, 0.5, 20.0], log_bins=2)
    assert table.rows[0][:3] == (0.0, 0.0, 1)
    marked = [r for r in table.rows if r[3]]
    assert len(marked) == 1 and marked[0][0] == 1.0 and marked[0][2] == 1
    assert table.meta["total"] == 4


@settings(max_examples=200)
@given(st.lists(st.floats(0.01, 500, allow_nan=False), min_size=1, max_size=60), st.integers(1, 8))
def test_histogram_total_and_median_within_one_bin(ratios, bins):
    table = compression_histogram(ratios, log_bins=bins)
    assert sum(r[2] for r in table.rows) == len(ratios) == table.meta["total"]
    est, exact = histogram_median(table), lower_median(ratios)
    assert abs(math.log10(est) - math.log10(exact)) <= 1 / bins + 1e-9


def test_pipeline_flows_hand_count(make_store):
    store = make_store({
        ".bashrc": "alias a='ps | sort | head'\nalias b='ps -e | sort -r | head -3'\n"
        "alias c='ps | grep x'\nalias d='ps && sort | head'\n",
    })
    flows = pipeline_flows(store, n=3)
    assert flows.meta["pipelines"] == 2
    assert (0, "ps", "sort", 2, 1.0) in flows.rows
    for pos in (0, 1):
        assert sum(r[3] for r in flows.rows if r[0] == pos) == 2
    two = pipeline_flows(store, n=2)
    assert two.rows == [(0, "ps", "grep", 1, 1.0)]


def test_pipeline_min_share_filters_minor_edges(make_store):
    body = "alias a='ps | sort | head'\n" * 9 + "alias b='ps | grep x | head'\n"
    store = make_store({".bashrc": body})
    edges = {(r[1], r[2]) for r in pipeline_flows(store, 3, min_share=0.2).rows}
    assert ("ps", "grep") not in edges and ("ps", "sort") in edges
    shares = pipeline_command_shares(store).records()
    assert shares[0] == {"command": "head", "pipelines": 10, "percent": 100.0}


def test_provenance_tables(make_store):
    store = make_store([
        (".zshrc", "alias a=b\nalias c=d\n", RepoRecord("x/dotfiles", "My dotfiles", 1)),
        (".bashrc", "alias e=f\n", RepoRecord("y/config", "The config of my machine", 2)),
        ("notes.txt", "alias g=h\n", None),
    ])
    patterns, words = provenance_summary(store, default_kb())
    rows = {r["pattern"]: r for r in patterns.records()}
    assert rows["*zshrc*"]["files"] == 1 and rows["*zshrc*"]["aliases"] == 2
    assert rows["*bashrc*"]["aliases_percent"] == 25.0
    assert column_sum_ok(patterns, "files_percent") and column_sum_ok(patterns, "aliases_percent")
    w = {r["word"]: r for r in words.records()}
    assert w["my"]["repos"] == 2 and w["my"]["aliases"] == 3
    assert "the" not in w and "of" not in w


def test_description_words_and_buckets():
    assert description_words("My dotfiles", default_kb().stopwords) == {"my", "dotfiles"}
    assert file_bucket(".zshrc") == "*zshrc*"
    assert file_bucket("README") is None


def test_practice_matrix_hand_count(make_store):
    store = make_store({".bashrc": "alias mv='mv -i'\n" * 4 + "alias g=git\nalias gs='git status'\n"})
    classify_store(store)
    rows = {r["command"]: r for r in practice_matrix(store).records()}
    assert rows["mv"]["OverridingDefaults"] == 100.0
    assert rows["mv"]["Nicknaming"] is None
    assert rows["git"]["Nicknaming"] == 50.0
    assert rows["git"]["AbbreviatingSubcommands"] == 50.0


def test_practice_matrix_needs_labels(make_store):
    assert practice_matrix(make_store({".bashrc": "alias mv='mv -i'\n"})).rows == []


def test_sample_exhausts_small_corpus_without_duplicates(make_store):
    store = make_store(MIXED)
    table = representative_sample(store, long_tail=200, seed=3)
    keys = [(r["name"], r["value"]) for r in table.records()]
    assert len(keys) == len(set(keys))
    distinct = store.conn.execute("SELECT COUNT(DISTINCT name || '=' || value) FROM aliases")
    assert len(keys) == distinct.fetchone()[0]
    assert csv_text(table) == csv_text(representative_sample(store, long_tail=200, seed=3))


def test_sample_long_tail_depends_on_seed(make_store):
    body = "".join(f"alias u{i}='uniq{i} x'\n" for i in range(50))
    store = make_store({".bashrc": body})
    a = representative_sample(store, n_cmds=0, long_tail=5, seed=1)
    b = representative_sample(store, n_cmds=0, long_tail=5, seed=2)
    assert len(a.rows) == len(b.rows) == 5
    assert a.rows != b.rows
    assert all(r[0] == "long-tail" and r[-1] == 1 for r in a.rows)


def test_tables_render_identically_twice(make_store):
    store = make_store(MIXED)
    classify_store(store)
    for build in (
        lambda: top_names(store),
        lambda: command_breakdown(store, "git"),
        lambda: compression_histogram(store),
        lambda: pipeline_flows(store),
        lambda: practice_matrix(store),
        lambda: representative_sample(store, seed=9),
    ):
        for fmt in ("csv", "jsonl"):
            assert csv_text(build(), fmt) == csv_text(build(), fmt)
