from __future__ import annotations

import csv
import io
import json

import pytest

from aliasmine import analytics
from aliasmine.cli import STATS, main
from conftest import SUGGEST_CORPUS

DOTFILES = {
    "a/.bashrc": "alias ll='ls -l'\nalias la='ls -a'\nalias gs='git status'\nalias g=git\n"
    "alias ips=\"ifconfig | grep 'inet ' | cut -d' ' -f2\"\n",
    "b/.zshrc": "alias mv='mv -i'\nalias rm='rm -i'\nalias cp='cp -i'\nalias ..='cd ..'\n"
    "alias ducks='du -cksh * | sort -hr | head -n 15'\nalias grep='grep --color=auto'\n",
    "b/README.md": "alias nope='not scanned'\n",
}


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


@pytest.fixture(autouse=True)
def no_user_config(tmp_path, monkeypatch):
    monkeypatch.setenv("ALIASMINE_CONFIG", str(tmp_path / "absent.conf"))


@pytest.fixture
def store(tmp_path):
    root = tmp_path / "dots"
    for rel, text in DOTFILES.items():
        (root / rel).parent.mkdir(parents=True, exist_ok=True)
        (root / rel).write_text(text)
    db = str(tmp_path / "s.db")
    code, _ = run("scan", str(root), "--store", db)
    assert code == 0
    return db


def test_no_arguments_prints_usage(capsys):
    assert main([]) == 1
    assert "usage:" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [["frobnicate"], ["stats", "nope"], ["scan", "--bogus", "x"]])
def test_unknown_input_is_a_user_error(argv, capsys):
    code, out = run(*argv)
    assert code == 1 and out == ""
    assert "usage:" in capsys.readouterr().err


def test_missing_store_is_a_user_error(tmp_path, capsys):
    code, out = run("stats", "top-names", "--store", str(tmp_path / "none.db"))
    assert code == 1 and out == ""
    assert "scan" in capsys.readouterr().err


def test_scan_reports_counts(tmp_path, store):
    code, out = run("scan", str(tmp_path / "dots"), "--store", store, "--json")
    report = json.loads(out)
    assert code == 0 and report["files_seen"] == 2 and report["duplicates_dropped"] == 2


def test_top_commands_has_requested_rows(store):
    code, out = run("stats", "top-commands", "--top", "5", "--store", store)
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0] == ["command", "count", "percent"] and len(rows) == 6
    assert rows[1:4] == [["git", "2", "13.33"], ["grep", "2", "13.33"], ["ls", "2", "13.33"]]


def test_classify_then_practices(store):
    code, out = run("classify", "--store", store)
    assert code == 0 and "OverridingDefaults" in out
    code, out = run("stats", "practices", "--store", store)
    rows = {r["command"]: r for r in csv.DictReader(io.StringIO(out))}
    assert rows["mv"]["OverridingDefaults"] == "100"
    assert rows["git"]["Nicknaming"] == "50"


@pytest.mark.parametrize("table", STATS)
def test_every_stats_table_is_repeatable(store, table):
    run("classify", "--store", store)
    extra = ["--cmd", "git"] if table == "breakdown" else []
    first = run("stats", table, "--store", store, *extra)
    assert first[0] == 0
    assert run("stats", table, "--store", store, *extra) == first
    as_json = run("stats", table, "--store", store, "--json", *extra)
    for line in as_json[1].splitlines():
        json.loads(line)


def test_breakdown_requires_command(store):
    assert run("stats", "breakdown", "--store", store)[0] == 1


def test_global_flags_work_after_the_subcommand(store):
    assert run("--store", store, "stats", "top-names") == run("stats", "top-names", "--store", store)


def test_export_formats(store, tmp_path):
    code, out = run("export", "arguments", "--store", store, "--format", "jsonl")
    texts = [json.loads(l)["text"] for l in out.splitlines()]
    assert "'inet '" in texts and "-d' '" in texts
    code, out = run("export", "aliases", "--store", store)
    assert out.startswith("id,file,line,")
    code, out = run("export", "--all", str(tmp_path / "dump"), "--store", store)
    assert code == 0 and (tmp_path / "dump" / "labels.jsonl").exists()
    copy = str(tmp_path / "copy.db")
    assert run("import", str(tmp_path / "dump"), "--store", copy)[0] == 0
    assert run("export", "commands", "--store", copy) == run("export", "commands", "--store", store)


def test_suggest_build_and_fix(tmp_path):
    root = tmp_path / "dots"
    root.mkdir()
    for name, text in SUGGEST_CORPUS.items():
        (root / name).write_text(text)
    db, rules = str(tmp_path / "s.db"), str(tmp_path / "rules.jsonl")
    assert run("scan", str(root), "--store", db)[0] == 0
    code, out = run("suggest", "build", "--store", db, "--out", rules)
    assert code == 0
    code, out = run("suggest", "fix", "--rules", rules, "--", "apt-get", "install", "vim")
    assert code == 0
    assert out.splitlines()[0] == "0.9000\tsudo-prefix\tsudo apt-get install vim"
    code, out = run("suggest", "fix", "--rules", rules, "--json", "--", "brew upgrade")
    assert json.loads(out.splitlines()[0])["replacement"] == "brew update && brew upgrade"
    assert run("suggest", "fix", "--rules", rules, "--", "echo 'oops")[0] == 1
    assert run("suggest", "fix", "--rules", str(tmp_path / "none"), "--", "ls")[0] == 1


def test_config_supplies_defaults_and_flags_win(store, tmp_path, monkeypatch):
    conf = tmp_path / "aliasmine.conf"
    conf.write_text(f"# test config\nstore = {store}\nseed = 4\n")
    monkeypatch.setenv("ALIASMINE_CONFIG", str(conf))
    assert run("stats", "top-names") == run("stats", "top-names", "--store", store)
    assert run("stats", "top-names", "--store", str(tmp_path / "none.db"))[0] == 1
    conf.write_text("this is not a setting\n")
    assert run("stats", "top-names")[0] == 1


def test_harvest_plan_and_run(tmp_path):
    code, out = run("harvest", "plan", "--max-size", "300")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[2] == ["101", "200", "alias language:Shell size:101..200"]
    code, out = run("harvest", "plan", "--max-size", "3000", "--json")
    (tmp_path / "plan.json").write_text(out)
    code, out = run(
        "harvest", "run", "--plan", str(tmp_path / "plan.json"), "--sim-files", "500",
        "--out", str(tmp_path / "h.jsonl"), "--report", str(tmp_path / "r.json"),
    )
    assert code == 0 and out == ""
    report = json.loads((tmp_path / "r.json").read_text())
    assert report["coverage"] >= 0.94
    db = str(tmp_path / "h.db")
    code, out = run("import", str(tmp_path / "h.jsonl"), "--store", db, "--json")
    assert json.loads(out)["files_seen"] == report["retrieved"]


def test_internal_failure_exits_two(store, monkeypatch, capsys):
    def boom(*a, **k):
        raise RuntimeError("boom")

    monkeypatch.setattr(analytics, "top_names", boom)
    code, out = run("stats", "top-names", "--store", store)
    assert code == 2 and out == ""
    assert "internal error" in capsys.readouterr().err
