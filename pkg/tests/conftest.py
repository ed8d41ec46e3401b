from __future__ import annotations

import csv
import re
from pathlib import Path

import pytest

from aliasmine.corpus import CorpusStore, FileRecord, RepoRecord, content_hash, ingest


FIXTURE = Path(__file__).parent / "fixtures" / "labelled_aliases.tsv"


def load_fixture():
    """(statement, practice kinds, typo flag) rows of the hand-labelled fixture."""
    from aliasmine.classifier import Practice

    with open(FIXTURE, encoding="utf-8", newline="") as fh:
        rows = list(csv.DictReader(fh, delimiter="\t", quoting=csv.QUOTE_NONE))
    out = []
    for row in rows:
        kinds = frozenset(Practice(k) for k in row["labels"].split("|") if k)
        out.append((row["statement"], kinds, row["typo_fix"] == "true"))
    return out


def fixture_text() -> str:
    return "".join(statement + "\n" for statement, _, _ in load_fixture())


def file_item(path: str, text: str, repo: RepoRecord | None = None):
    data = text.encode("utf-8")
    record = FileRecord(path=path, name=path.rsplit("/", 1)[-1], size=len(data),
                        content_hash=content_hash(data))
    return record, data, repo


def store_from(files, path=":memory:"):
    """A store holding ``files``: a mapping of path to text, or ``(path, text, repo)`` items."""
    store = CorpusStore(path)
    items = files.items() if isinstance(files, dict) else files
    ingest(store, (file_item(*item) for item in items))
    return store


@pytest.fixture
def make_store():
    made = []

    def build(files, path=":memory:"):
        store = store_from(files, path)
        made.append(store)
        return store

    yield build
    for store in made:
        store.close()


SUGGEST_CORPUS = {
    ".bashrc": "".join(f"alias agi{i}='sudo apt-get install'\n" for i in range(9))
    + "alias agi='apt-get install'\n"
    + "".join(f"alias sst{i}='systemctl status svc{i}'\n" for i in range(5))
    + "alias ssd='systemctl start docker'\n",
    ".zshrc": "".join(f"alias brewup{i}='brew update && brew upgrade'\n" for i in range(3))
    + "alias gg='grep --color=auto'\nalias gi='grep -i'\n",
}


@pytest.fixture(scope="session")
def corpus_rules():
    from aliasmine.suggest import build_rules

    store = store_from(SUGGEST_CORPUS)
    yield build_rules(store)
    store.close()


# --- acceptance summary -----------------------------------------------------

_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")
_results: dict[str, tuple[str, str, list]] = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    if report.when == "call" or report.outcome != "passed":
        outcome = "PASS" if report.passed else "FAIL"
        _results[m.group(1)] = (m.group(2).replace("_", " "), outcome, report.user_properties)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_results):
        title, outcome, props = _results[num]
        detail = ", ".join(f"{k}={v}" for k, v in props)
        terminalreporter.write_line(f"criterion {int(num):2d} {outcome} {title}" + (f" ({detail})" if detail else ""))
