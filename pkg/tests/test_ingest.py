import datetime as dt

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qnacoder.ingest import (
    DelimiterConfig,
    UnparseableDateError,
    dump_records,
    load_records,
    parse_date,
    parse_records,
)

ROW1 = (
    "5/30/06 | Palazzo del Quirinale | On. Sen. Franco MARINI, Presidente del Senato"
    " della Repubblica, e On. Fausto BERTINOTTI, Presidente della Camera dei Deputati"
)
PIPE = DelimiterConfig(delimiter="|")


def test_sample_row_parses():
    result = parse_records(ROW1, PIPE)
    assert result.rejects == []
    (r,) = result.records
    assert r.record_id == 1
    assert r.date == dt.date(2006, 5, 30)
    assert r.place == "Palazzo del Quirinale"
    assert r.description.startswith("On. Sen. Franco MARINI")
    assert r.description.endswith("Presidente della Camera dei Deputati")


def test_empty_input():
    result = parse_records("")
    assert result.records == [] and result.rejects == []


def test_impossible_date_rejected():
    result = parse_records("13/45/06\tRoma\tqualcosa")
    assert result.records == []
    (rej,) = result.rejects
    assert rej.line_number == 1
    assert "unparseable date" in rej.reason


@pytest.mark.parametrize(
    "text,convention,expected",
    [
        ("5/30/06", "month_first", dt.date(2006, 5, 30)),
        ("6/7/06", "month_first", dt.date(2006, 6, 7)),
        ("30/5/06", "day_first", dt.date(2006, 5, 30)),
        ("5/30/2006", "month_first", dt.date(2006, 5, 30)),
        ("1/1/99", "month_first", dt.date(1999, 1, 1)),
        ("1/1/70", "month_first", dt.date(1970, 1, 1)),
        ("1/1/69", "month_first", dt.date(2069, 1, 1)),
    ],
)
def test_parse_date(text, convention, expected):
    assert parse_date(text, convention) == expected


def test_nonleap_february_errors():
    with pytest.raises(UnparseableDateError):
        parse_date("2/29/07", "month_first")


def test_garbage_date_errors():
    with pytest.raises(UnparseableDateError):
        parse_date("soon", "month_first")


def test_header_comments_and_blanks_are_skipped():
    text = "Date\tPlace\tDescription\n\n# annotation\n6/7/06\tRoma\ttesto\n"
    result = parse_records(text)
    assert result.header_skipped
    assert result.skipped_blank == 1
    assert result.skipped_comment == 1
    assert len(result.records) == 1


def test_header_only_skipped_when_first_column_is_date_word():
    # A first row whose column 1 parses as a date is data, not a header.
    result = parse_records("6/7/06\tRoma\ttesto\n6/8/06\tRoma\taltro\n")
    assert not result.header_skipped
    assert len(result.records) == 2


def test_date_window_rejection():
    cfg = DelimiterConfig(window=(dt.date(2000, 1, 1), dt.date(2010, 12, 31)))
    result = parse_records("6/7/96\tRoma\ttesto", cfg)
    assert result.records == []
    assert "outside window" in result.rejects[0].reason


def test_wrong_column_count_rejected():
    result = parse_records("6/7/06\tRoma")
    assert "expected 3 columns" in result.rejects[0].reason


def test_quoted_mode_keeps_delimiter_inside_quotes():
    cfg = DelimiterConfig(delimiter=",", quoted=True)
    result = parse_records('6/7/06,"Roma, Italia",testo', cfg)
    (r,) = result.records
    assert r.place == "Roma, Italia"


def test_record_ids_are_ordinals_over_accepted_rows():
    text = "6/7/06\tRoma\tuno\nbad row\n6/8/06\tRoma\tdue\n"
    result = parse_records(text)
    assert [r.record_id for r in result.records] == [1, 2]
    assert [r.description for r in result.records] == ["uno", "due"]
    assert result.rejects[0].line_number == 2


_cell = st.text(
    alphabet=st.characters(blacklist_categories=("Cs", "Cc"), blacklist_characters="\t\n\r"),
    max_size=12,
)
_row = st.lists(_cell, min_size=1, max_size=5).map(lambda cells: "\t".join(cells))


@settings(max_examples=120)
@given(st.lists(_row, max_size=25))
def test_conservation_over_fuzzed_rows(rows):
    text = "\n".join(rows)
    result = parse_records(text)
    nonblank = [r for r in text.splitlines() if r.strip()]
    comments = [r for r in nonblank if r.lstrip().startswith("#")]
    expected = len(nonblank) - len(comments) - (1 if result.header_skipped else 0)
    assert len(result.records) + len(result.rejects) == expected


@settings(max_examples=60)
@given(st.lists(_row, max_size=15))
def test_parse_is_deterministic(rows):
    text = "\n".join(rows)
    a = parse_records(text)
    b = parse_records(text)
    assert a.records == b.records
    assert a.rejects == b.rejects


def test_records_file_round_trip(table1_records):
    assert load_records(dump_records(table1_records)) == list(table1_records)
