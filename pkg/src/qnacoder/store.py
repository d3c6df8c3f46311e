"""Persist coded events plus an append-only corrections log; answer
conjunctive filtered queries.

Storage is deliberately flat: `events.ndjson` holds the as-coded baseline
(one canonical-JSON event per line), `corrections.ndjson` the ordered
resolution log, and `schema.json` the grammar the events were coded
against. The current state is always baseline replayed through the log, so
crash recovery and audit are the same operation. Desk-scale corpora need no
index; a query is a linear scan.
"""

from __future__ import annotations

import datetime as _dt
import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .grammar import (
    Assignment,
    CategoryPath,
    CodedEvent,
    GrammarSchema,
    Violation,
    canonical_json,
    event_from_obj,
    event_to_obj,
    load_schema,
    resolve_path,
    schema_to_json,
    validate_event,
)

EVENTS_FILE = "events.ndjson"
CORRECTIONS_FILE = "corrections.ndjson"
SCHEMA_FILE = "schema.json"

VERDICTS = frozenset({"accept_as_is", "corrected", "rejected"})


class StoreError(ValueError):
    pass


class UnknownKeyError(KeyError):
    def __init__(self, key):
        self.key = key
        super().__init__(f"no event with key {key}")


class ResolutionValidationError(ValueError):
    """A resolution failed schema validation; carries per-field messages so
    a caller (the review UI) can highlight each offending path."""

    def __init__(self, violations: list[Violation]):
        self.violations = violations
        super().__init__("; ".join(map(str, violations)))


@dataclass(frozen=True)
class ReviewResolution:
    """A verifier's verdict on one flagged event. ``assignments`` replace the
    event's values at each edited path (empty for accept_as_is/rejected)."""

    record_id: int
    ordinal: int
    verdict: str
    assignments: tuple[Assignment, ...] = ()
    verifier_id: str = ""
    timestamp: str = ""
    duplicate: bool = False

    @property
    def key(self) -> tuple[int, int]:
        return (self.record_id, self.ordinal)

    def content_key(self):
        # Identity for duplicate detection: everything except the timestamp.
        return (
            self.key,
            self.verdict,
            tuple((a.path.segments, a.value) for a in self.assignments),
            self.verifier_id,
        )


def resolution_to_obj(r: ReviewResolution) -> dict:
    return {
        "record_id": r.record_id,
        "ordinal": r.ordinal,
        "verdict": r.verdict,
        "assignments": [{"path": list(a.path.segments), "value": a.value} for a in r.assignments],
        "verifier_id": r.verifier_id,
        "timestamp": r.timestamp,
        "duplicate": r.duplicate,
    }


def resolution_from_obj(obj: dict) -> ReviewResolution:
    return ReviewResolution(
        record_id=obj["record_id"],
        ordinal=obj["ordinal"],
        verdict=obj["verdict"],
        assignments=tuple(
            Assignment(CategoryPath(a["path"]), a["value"], "human")
            for a in obj.get("assignments", ())
        ),
        verifier_id=obj.get("verifier_id", ""),
        timestamp=obj.get("timestamp", ""),
        duplicate=obj.get("duplicate", False),
    )


def apply_resolution_to_event(event: CodedEvent, resolution: ReviewResolution) -> CodedEvent:
    """Pure replay step: replace assignments at each edited path (provenance
    becomes "human") and move the status per the verdict."""
    if resolution.verdict == "rejected":
        status = "rejected"
    else:
        status = "resolved"
    assignments = list(event.assignments)
    for edited in resolution.assignments:
        assignments = [a for a in assignments if a.path != edited.path]
        assignments.append(Assignment(edited.path, edited.value, "human"))
    flags = () if status in ("resolved", "rejected") else event.flags
    return CodedEvent(
        record_id=event.record_id,
        ordinal=event.ordinal,
        assignments=tuple(assignments),
        status=status,
        description=event.description,
        span=event.span,
        flags=flags,
    )


@dataclass
class EventStore:
    """Baseline events keyed by (record_id, ordinal), the corrections log,
    and the schema they validate against. ``events`` is the current state:
    baseline with every correction replayed, in insertion order."""

    schema: GrammarSchema
    baseline: dict[tuple[int, int], CodedEvent] = field(default_factory=dict)
    corrections: list[ReviewResolution] = field(default_factory=list)
    events: dict[tuple[int, int], CodedEvent] = field(default_factory=dict)

    def put_events(self, events: list[CodedEvent]) -> None:
        """Insert validated events; on any validation or key problem nothing
        is inserted."""
        problems: list[str] = []
        for e in events:
            if e.key in self.baseline:
                problems.append(f"duplicate key {e.key}")
            for v in validate_event(self.schema, e):
                problems.append(f"event {e.key} {v}")
        if problems:
            raise StoreError("; ".join(problems))
        for e in events:
            self.baseline[e.key] = e
            self.events[e.key] = e

    def record_correction(self, resolution: ReviewResolution) -> CodedEvent:
        """Append to the log and update current state; the caller (review
        service) is responsible for durability and validation."""
        self.corrections.append(resolution)
        if not resolution.duplicate:
            self.events[resolution.key] = apply_resolution_to_event(
                self.events[resolution.key], resolution
            )
        return self.events[resolution.key]

    def counts(self) -> dict[str, int]:
        out = {"auto": 0, "flagged": 0, "resolved": 0, "rejected": 0}
        for e in self.events.values():
            out[e.status] = out.get(e.status, 0) + 1
        return out

    def analysis_events(self) -> list[CodedEvent]:
        """Events analysis flows see: everything not rejected."""
        return [e for e in self.events.values() if e.status != "rejected"]

    def meeting_events(self) -> list[CodedEvent]:
        from .enrich import VERB_PATH

        return [e for e in self.analysis_events() if e.first_value(VERB_PATH) is not None]


def save(store: EventStore, directory) -> None:
    """Write schema, baseline events (key-sorted lines), and the corrections
    log; byte-stable for identical stores."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    (d / SCHEMA_FILE).write_text(schema_to_json(store.schema), encoding="utf-8")
    with open(d / EVENTS_FILE, "w", encoding="utf-8", newline="\n") as f:
        for key in sorted(store.baseline):
            f.write(canonical_json(event_to_obj(store.baseline[key])) + "\n")
    with open(d / CORRECTIONS_FILE, "w", encoding="utf-8", newline="\n") as f:
        for r in store.corrections:
            f.write(canonical_json(resolution_to_obj(r)) + "\n")


def load(directory, schema: GrammarSchema | None = None) -> EventStore:
    """Read a store directory and replay the corrections log onto the
    baseline. Missing files mean an empty store."""
    d = Path(directory)
    if schema is None:
        schema_path = d / SCHEMA_FILE
        if not schema_path.exists():
            raise StoreError(f"{schema_path} not found and no schema given")
        schema = load_schema(schema_path)
    store = EventStore(schema=schema)
    events_path = d / EVENTS_FILE
    if events_path.exists():
        with open(events_path, encoding="utf-8") as f:
            for line in f:
                if not line.strip():
                    continue
                e = event_from_obj(json.loads(line))
                store.baseline[e.key] = e
                store.events[e.key] = e
    corrections_path = d / CORRECTIONS_FILE
    if corrections_path.exists():
        with open(corrections_path, encoding="utf-8") as f:
            for line in f:
                if not line.strip():
                    continue
                r = resolution_from_obj(json.loads(line))
                store.corrections.append(r)
                if not r.duplicate and r.key in store.events:
                    store.events[r.key] = apply_resolution_to_event(store.events[r.key], r)
    return store


def append_correction(directory, resolution: ReviewResolution) -> None:
    """Durable append of one log line (flush + fsync before returning)."""
    path = Path(directory) / CORRECTIONS_FILE
    with open(path, "a", encoding="utf-8", newline="\n") as f:
        f.write(canonical_json(resolution_to_obj(resolution)) + "\n")
        f.flush()
        os.fsync(f.fileno())


# ---------------------------------------------------------------------------
# Queries
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Clause:
    """One predicate on one category path. ``op`` is equals / in_set /
    date_between / exists; a clause matches when any assignment at the path
    satisfies it."""

    path: CategoryPath
    op: str
    value: str = ""
    values: tuple[str, ...] = ()
    lo: str = ""
    hi: str = ""


@dataclass(frozen=True)
class QueryFilter:
    clauses: tuple[Clause, ...] = ()


def validate_filter(schema: GrammarSchema, flt: QueryFilter) -> None:
    for c in flt.clauses:
        node = resolve_path(schema, c.path)  # raises PathNotFoundError
        if c.op == "date_between":
            if node.value_kind != "calendar_date":
                raise StoreError(f"date_between on non-date category {c.path}")
            _dt.date.fromisoformat(c.lo)
            _dt.date.fromisoformat(c.hi)
        elif c.op not in ("equals", "in_set", "exists"):
            raise StoreError(f"unknown filter operator {c.op!r}")


def _matches(event: CodedEvent, clause: Clause) -> bool:
    values = event.values_at(clause.path)
    if clause.op == "exists":
        return bool(values)
    if clause.op == "equals":
        return any(v == clause.value for v in values)
    if clause.op == "in_set":
        return any(v in clause.values for v in values)
    if clause.op == "date_between":
        lo, hi = _dt.date.fromisoformat(clause.lo), _dt.date.fromisoformat(clause.hi)
        out = []
        for v in values:
            try:
                out.append(lo <= _dt.date.fromisoformat(v) <= hi)
            except ValueError:
                out.append(False)
        return any(out)
    raise StoreError(f"unknown filter operator {clause.op!r}")


def query(store: EventStore, flt: QueryFilter) -> list[CodedEvent]:
    """Events satisfying every clause (conjunction), in insertion order,
    with corrections already applied."""
    validate_filter(store.schema, flt)
    return [e for e in store.events.values() if all(_matches(e, c) for c in flt.clauses)]
