"""Read raw diary records from local delimited text into validated records.

Input is UTF-8 text with three columns (date, place, description) separated
by a single-character delimiter (tab by default). Row-level problems never
abort a batch: malformed rows are returned as rejects with a reason and the
1-based physical line number.
"""

from __future__ import annotations

import csv
import datetime as _dt
import io
import json
from dataclasses import dataclass, field

DEFAULT_WINDOW = (_dt.date(1900, 1, 1), _dt.date(2100, 12, 31))


class UnparseableDateError(ValueError):
    def __init__(self, text: str, detail: str = ""):
        self.text = text
        super().__init__(f"unparseable date {text!r}" + (f": {detail}" if detail else ""))


@dataclass(frozen=True)
class DiaryRecord:
    """One agenda entry. ``record_id`` is the 1-based ordinal among accepted
    rows; ``description`` is trimmed at the ends but otherwise byte-exact
    (it is re-exported into KML descriptions)."""

    record_id: int
    date: _dt.date
    place: str
    description: str


@dataclass(frozen=True)
class Reject:
    line_number: int
    reason: str
    raw: str


@dataclass(frozen=True)
class DelimiterConfig:
    delimiter: str = "\t"
    date_order: str = "month_first"  # or "day_first"
    pivot_year: int = 1970
    quoted: bool = False  # RFC-4180-style quoting when True
    window: tuple[_dt.date, _dt.date] = DEFAULT_WINDOW


@dataclass
class ParseResult:
    records: list[DiaryRecord] = field(default_factory=list)
    rejects: list[Reject] = field(default_factory=list)
    skipped_blank: int = 0
    skipped_comment: int = 0
    header_skipped: bool = False


def parse_date(text: str, convention: str = "month_first", pivot_year: int = 1970) -> _dt.date:
    """Parse a slash-separated date like ``5/30/06`` or ``30/5/2006``.

    Two-digit years expand via the pivot: the result is the year in
    [pivot, pivot+99] with the same last two digits (pivot 1970 maps "06" to
    2006 and "99" to 1999). Four-digit years pass through.
    """
    parts = text.strip().split("/")
    if len(parts) != 3:
        raise UnparseableDateError(text, "expected three '/'-separated fields")
    try:
        nums = [int(p) for p in parts]
    except ValueError:
        raise UnparseableDateError(text, "non-numeric field") from None
    if convention == "month_first":
        month, day, year = nums
    elif convention == "day_first":
        day, month, year = nums
    else:
        raise ValueError(f"unknown date convention {convention!r}")
    if year < 0:
        raise UnparseableDateError(text, "negative year")
    if year < 100:
        century = pivot_year - pivot_year % 100
        year = century + year
        if year < pivot_year:
            year += 100
    try:
        return _dt.date(year, month, day)
    except ValueError as e:
        raise UnparseableDateError(text, str(e)) from None


def _split_row(line: str, cfg: DelimiterConfig) -> list[str]:
    if cfg.quoted:
        return next(csv.reader(io.StringIO(line), delimiter=cfg.delimiter))
    return line.split(cfg.delimiter)


def _looks_like_header(cols: list[str], cfg: DelimiterConfig) -> bool:
    if len(cols) != 3 or cols[0].strip().lower() != "date":
        return False
    try:
        parse_date(cols[0], cfg.date_order, cfg.pivot_year)
        return False
    except UnparseableDateError:
        return True


def parse_records(text: str, cfg: DelimiterConfig | None = None) -> ParseResult:
    """Parse delimited diary text into records plus rejects.

    Blank lines and lines starting with '#' are skipped and counted
    separately. A header row is skipped when row 1's first column equals
    "Date" case-insensitively and fails date parsing. Row order is
    preserved; record ids are 1-based ordinals over the accepted rows.
    """
    cfg = cfg or DelimiterConfig()
    result = ParseResult()
    first_data_row = True
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            result.skipped_blank += 1
            continue
        if line.lstrip().startswith("#"):
            result.skipped_comment += 1
            continue
        cols = _split_row(line, cfg)
        if first_data_row and _looks_like_header(cols, cfg):
            result.header_skipped = True
            first_data_row = False
            continue
        first_data_row = False
        if len(cols) != 3:
            result.rejects.append(Reject(lineno, f"expected 3 columns, got {len(cols)}", line))
            continue
        raw_date, place, description = cols
        try:
            date = parse_date(raw_date, cfg.date_order, cfg.pivot_year)
        except UnparseableDateError as e:
            result.rejects.append(Reject(lineno, str(e), line))
            continue
        lo, hi = cfg.window
        if not (lo <= date <= hi):
            result.rejects.append(Reject(lineno, f"date {date.isoformat()} outside window", line))
            continue
        place = place.strip()
        description = description.strip()
        if not place:
            result.rejects.append(Reject(lineno, "empty place", line))
            continue
        if not description:
            result.rejects.append(Reject(lineno, "empty description", line))
            continue
        result.records.append(
            DiaryRecord(
                record_id=len(result.records) + 1,
                date=date,
                place=place,
                description=description,
            )
        )
    return result


# ---------------------------------------------------------------------------
# Records file (output of the `ingest` CLI step): newline-delimited JSON.
# ---------------------------------------------------------------------------


def record_to_obj(r: DiaryRecord) -> dict:
    return {
        "record_id": r.record_id,
        "date": r.date.isoformat(),
        "place": r.place,
        "description": r.description,
    }


def record_from_obj(obj: dict) -> DiaryRecord:
    return DiaryRecord(
        record_id=obj["record_id"],
        date=_dt.date.fromisoformat(obj["date"]),
        place=obj["place"],
        description=obj["description"],
    )


def dump_records(records: list[DiaryRecord]) -> str:
    from .grammar import canonical_json

    return "".join(canonical_json(record_to_obj(r)) + "\n" for r in records)


def load_records(text: str) -> list[DiaryRecord]:
    return [record_from_obj(json.loads(line)) for line in text.splitlines() if line.strip()]
