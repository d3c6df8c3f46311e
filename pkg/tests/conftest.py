from pathlib import Path

import pytest

from qnacoder.cli import code_corpus
from qnacoder.enrich import load_kb
from qnacoder.extract import load_vocabulary
from qnacoder.grammar import load_schema
from qnacoder.ingest import parse_records

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

# Every category/value pair printed in the worked coding of the sample
# diary's Berlusconi record (paths are '/'-joined with '\/' escapes).
GOLDEN_BERLUSCONI = {
    "Subject": "Presidente della Repubblica",
    "Verb": "incontra",
    "Object": "On. Silvio BERLUSCONI",
    "Internal Politics/Political Organizations/Political Parties": "Leader of party",
    "Internal Politics/Political Organizations/Goverment": "Prodi II",
    "Internal Politics/Political Organizations/Parliamentary\\/Extraparliamentary": "Parliamentary",
    "Internal Politics/Political Organizations/Majority\\/Minority Political Parties": "Minority",
    "Internal Politics/Political Organizations/Party Name": "Forza Italia",
    "Internal Politics/Legislative Power/Chamber of Deputies": "Leader of Minority Group",
    # The printed source lists "7 Giugno 2008", contradicting its own
    # "Prodi II" coding; the sample table's 6/7/06 wins (see ingest docs).
    "Date": "2006-06-07",
    "Place": "Palazzo del Quirinale",
}


@pytest.fixture(scope="session")
def schema():
    return load_schema(FIXTURES / "schema_por.json")


@pytest.fixture(scope="session")
def vocab():
    return load_vocabulary(FIXTURES / "vocab_it.json")


@pytest.fixture(scope="session")
def kb():
    return load_kb(FIXTURES / "kb_it.json")


@pytest.fixture(scope="session")
def table1_records():
    text = (FIXTURES / "diary_sample.tsv").read_text(encoding="utf-8")
    result = parse_records(text)
    assert not result.rejects
    return result.records


@pytest.fixture()
def table1_store(table1_records, vocab, kb, schema):
    return code_corpus(table1_records, vocab, kb, schema)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance criterion at the end of the run."""
    rows = []
    for outcome in ("passed", "failed"):
        for report in terminalreporter.stats.get(outcome, []):
            if "test_acceptance.py" in report.nodeid:
                rows.append((report.nodeid.split("::")[-1], outcome == "passed"))
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok in sorted(rows):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}")
