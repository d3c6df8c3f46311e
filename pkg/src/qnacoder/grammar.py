"""Hierarchical story grammar: the user-defined tree of coding categories and
the coded events that instantiate it.

A schema is a finite tree of named categories. Inner nodes are pure
containers (value kind ``none``); leaves carry a value kind that constrains
what may be assigned at their path. A coded event is a bag of
(path, value, provenance) assignments for one source record, plus a review
status. Everything here is immutable and free of I/O except the JSON
loaders at the bottom.
"""

from __future__ import annotations

import datetime as _dt
import json
import unicodedata
from dataclasses import dataclass, replace
from typing import Iterator

VALUE_KINDS = frozenset(
    {"none", "free_text", "closed_vocabulary", "entity_reference", "calendar_date", "place_name"}
)
CARDINALITIES = frozenset({"optional", "required", "repeated"})
EVENT_STATUSES = frozenset({"auto", "flagged", "resolved", "rejected"})
PROVENANCES = frozenset({"extracted", "enriched", "human"})

# Guard for the depth-bounded walk; schemas are human-authored trees.
MAX_DEPTH = 64


def normalize_name(text: str) -> str:
    """Canonical form for category names and vocabulary entries: NFC + trim."""
    return unicodedata.normalize("NFC", text).strip()


class PathNotFoundError(LookupError):
    """A category path does not resolve; carries the longest prefix that does."""

    def __init__(self, path: "CategoryPath", prefix: tuple[str, ...]):
        self.path = path
        self.prefix = prefix
        if not path.segments:
            msg = "empty path"
        else:
            msg = f"path {path} not found (longest resolvable prefix: {'/'.join(prefix) or '<root>'})"
        super().__init__(msg)


@dataclass(frozen=True)
class CategoryPath:
    """Sequence of category names from the first level below the root downward."""

    segments: tuple[str, ...]

    def __init__(self, segments=()):
        object.__setattr__(self, "segments", tuple(normalize_name(s) for s in segments))

    @classmethod
    def from_string(cls, text: str) -> "CategoryPath":
        """Parse a '/'-joined path. A backslash escapes a literal '/' inside
        a name (two category names in the shipped schema contain slashes)."""
        segments: list[str] = []
        cur: list[str] = []
        it = iter(text)
        for ch in it:
            if ch == "\\":
                nxt = next(it, "")
                cur.append(nxt)
            elif ch == "/":
                segments.append("".join(cur))
                cur = []
            else:
                cur.append(ch)
        segments.append("".join(cur))
        if segments == [""]:
            segments = []
        return cls(segments)

    def __str__(self) -> str:
        return "/".join(s.replace("\\", "\\\\").replace("/", "\\/") for s in self.segments)

    def __bool__(self) -> bool:
        return bool(self.segments)


@dataclass(frozen=True)
class CategoryDef:
    """One node of the grammar tree.

    ``value_kind == "none"`` marks a pure container; any other kind marks a
    value leaf. ``vocabulary`` is meaningful only for ``closed_vocabulary``.
    """

    name: str
    value_kind: str = "none"
    cardinality: str = "optional"
    vocabulary: tuple[str, ...] = ()
    children: tuple["CategoryDef", ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "name", normalize_name(self.name))
        object.__setattr__(self, "vocabulary", tuple(normalize_name(v) for v in self.vocabulary))
        object.__setattr__(self, "children", tuple(self.children))

    def child(self, name: str) -> "CategoryDef | None":
        wanted = normalize_name(name)
        for c in self.children:
            if c.name == wanted:
                return c
        return None

    @property
    def is_leaf(self) -> bool:
        return not self.children


@dataclass(frozen=True)
class GrammarSchema:
    """The whole coding scheme: a root container (canonically "Event") plus a
    free-form version label."""

    root: CategoryDef
    version: str = ""


@dataclass(frozen=True)
class Assignment:
    """One coded value: which category path, the value text, and whether it
    came from extraction, knowledge-base enrichment, or a human verifier."""

    path: CategoryPath
    value: str
    provenance: str = "extracted"


@dataclass(frozen=True)
class CodedEvent:
    """A validated coding of one (record, actor) pair.

    ``ordinal`` is the 1-based event index within the source record (one per
    actor for meetings, a single 1 for ceremonies). ``description`` carries
    the source text byte-exact because exports re-emit it; ``span`` is the
    surname character span of this event's actor, when there is one.
    ``flags`` lists review reason codes for flagged events.
    """

    record_id: int
    ordinal: int
    assignments: tuple[Assignment, ...] = ()
    status: str = "auto"
    description: str = ""
    span: tuple[int, int] | None = None
    flags: tuple[str, ...] = ()

    @property
    def key(self) -> tuple[int, int]:
        return (self.record_id, self.ordinal)

    def values_at(self, path: CategoryPath) -> list[str]:
        return [a.value for a in self.assignments if a.path == path]

    def first_value(self, path: CategoryPath) -> str | None:
        for a in self.assignments:
            if a.path == path:
                return a.value
        return None

    def with_status(self, status: str) -> "CodedEvent":
        return replace(self, status=status)


@dataclass(frozen=True)
class Violation:
    """One invariant failure, naming the offending path."""

    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.path}: {self.message}" if self.path else self.message


def iter_paths(schema: GrammarSchema) -> Iterator[tuple[CategoryPath, CategoryDef]]:
    """Depth-first walk over every category path (root excluded, as paths
    start below it)."""

    def walk(node: CategoryDef, prefix: tuple[str, ...], depth: int):
        if depth > MAX_DEPTH:
            raise RecursionError(f"schema deeper than {MAX_DEPTH} at {'/'.join(prefix)}")
        for c in node.children:
            p = prefix + (c.name,)
            yield CategoryPath(p), c
            yield from walk(c, p, depth + 1)

    yield from walk(schema.root, (), 0)


def leaf_paths(schema: GrammarSchema) -> list[tuple[CategoryPath, CategoryDef]]:
    return [(p, d) for p, d in iter_paths(schema) if d.is_leaf]


def validate_schema(schema: GrammarSchema) -> list[Violation]:
    """Check every tree invariant; an empty list means the schema is valid.

    Violations are returned rather than raised so a schema editor can show
    all of them at once.
    """
    out: list[Violation] = []

    def check(node: CategoryDef, prefix: tuple[str, ...], depth: int):
        here = "/".join(prefix) or "<root>"
        if depth > MAX_DEPTH:
            out.append(Violation(here, f"tree deeper than {MAX_DEPTH} levels"))
            return
        if not node.name:
            out.append(Violation(here, "category name is empty"))
        if node.value_kind not in VALUE_KINDS:
            out.append(Violation(here, f"unknown value kind {node.value_kind!r}"))
        if node.cardinality not in CARDINALITIES:
            out.append(Violation(here, f"unknown cardinality {node.cardinality!r}"))
        if node.value_kind == "none" and not node.children:
            out.append(Violation(here, "container (value kind 'none') has no children"))
        if node.value_kind != "none" and node.children:
            out.append(Violation(here, "node with a value kind must be a leaf"))
        if node.value_kind == "closed_vocabulary":
            if not node.vocabulary:
                out.append(Violation(here, "closed vocabulary is empty"))
            if len(set(node.vocabulary)) != len(node.vocabulary):
                out.append(Violation(here, "closed vocabulary has duplicates"))
        elif node.vocabulary:
            out.append(Violation(here, "vocabulary given on a non-closed_vocabulary node"))
        seen: set[str] = set()
        for c in node.children:
            if c.name in seen:
                out.append(Violation("/".join(prefix + (c.name,)), "duplicate sibling name"))
            seen.add(c.name)
            check(c, prefix + (c.name,), depth + 1)

    check(schema.root, (), 0)
    return out


def resolve_path(schema: GrammarSchema, path: CategoryPath) -> CategoryDef:
    """Return the unique node at ``path``; raise PathNotFoundError (with the
    longest resolvable prefix) otherwise. The empty path never resolves."""
    if not path.segments:
        raise PathNotFoundError(path, ())
    node = schema.root
    resolved: tuple[str, ...] = ()
    for seg in path.segments:
        # CategoryPath segments and node names are both normalized at
        # construction, so plain equality suffices here.
        nxt = None
        for c in node.children:
            if c.name == seg:
                nxt = c
                break
        if nxt is None:
            raise PathNotFoundError(path, resolved)
        node = nxt
        resolved += (seg,)
    return node


def _check_value(kind: str, vocabulary: tuple[str, ...], value: str) -> str | None:
    if not isinstance(value, str) or not value.strip():
        return "value is empty"
    if kind == "closed_vocabulary":
        if normalize_name(value) not in vocabulary:
            return f"value {value!r} not in the closed vocabulary"
    elif kind == "calendar_date":
        try:
            _dt.date.fromisoformat(value)
        except ValueError:
            return f"value {value!r} is not an ISO calendar date"
    return None


def validate_event(schema: GrammarSchema, event: CodedEvent) -> list[Violation]:
    """Check a coded event against the schema; empty list means valid.

    Required paths are enforced only for status ``resolved``: auto and
    flagged events are allowed to be partial while they await review.
    """
    out: list[Violation] = []
    if not event.record_id or event.record_id < 0:
        out.append(Violation("", "record_id is empty"))
    if event.status not in EVENT_STATUSES:
        out.append(Violation("", f"unknown status {event.status!r}"))

    # Paths repeat across assignments and the cardinality pass; resolve each
    # one once.
    nodes: dict[CategoryPath, CategoryDef | None] = {}

    def lookup(path: CategoryPath) -> CategoryDef | None:
        if path not in nodes:
            try:
                nodes[path] = resolve_path(schema, path)
            except PathNotFoundError:
                nodes[path] = None
        return nodes[path]

    counts: dict[CategoryPath, int] = {}
    for a in event.assignments:
        if a.provenance not in PROVENANCES:
            out.append(Violation(str(a.path), f"unknown provenance {a.provenance!r}"))
        node = lookup(a.path)
        if node is None:
            out.append(Violation(str(a.path), "path does not resolve in the schema"))
            continue
        if node.value_kind == "none":
            out.append(Violation(str(a.path), "cannot assign a value to a container category"))
            continue
        problem = _check_value(node.value_kind, node.vocabulary, a.value)
        if problem:
            out.append(Violation(str(a.path), problem))
        counts[a.path] = counts.get(a.path, 0) + 1

    for path, n in counts.items():
        node = lookup(path)
        if node is not None and node.cardinality != "repeated" and n > 1:
            out.append(Violation(str(path), f"non-repeated category assigned {n} times"))

    if event.status == "resolved":
        present = {a.path for a in event.assignments}
        for path, node in leaf_paths(schema):
            if node.cardinality == "required" and path not in present:
                out.append(Violation(str(path), "required category missing on a resolved event"))
    return out


# ---------------------------------------------------------------------------
# JSON wire format
# ---------------------------------------------------------------------------
#
# Schema file: one JSON document whose top level is the root node. Node =
# {"name", "kind", "cardinality", "vocabulary" (closed_vocabulary only),
#  "children"}; the root object may also carry "version".


def _node_from_obj(obj: dict) -> CategoryDef:
    children = tuple(_node_from_obj(c) for c in obj.get("children", ()))
    kind = obj.get("kind", "none" if children else "free_text")
    return CategoryDef(
        name=obj.get("name", ""),
        value_kind=kind,
        cardinality=obj.get("cardinality", "optional"),
        vocabulary=tuple(obj.get("vocabulary", ())),
        children=children,
    )


def _node_to_obj(node: CategoryDef) -> dict:
    obj: dict = {"name": node.name, "kind": node.value_kind, "cardinality": node.cardinality}
    if node.value_kind == "closed_vocabulary":
        obj["vocabulary"] = list(node.vocabulary)
    if node.children:
        obj["children"] = [_node_to_obj(c) for c in node.children]
    return obj


def schema_from_json(text: str) -> GrammarSchema:
    obj = json.loads(text)
    return GrammarSchema(root=_node_from_obj(obj), version=obj.get("version", ""))


def schema_to_json(schema: GrammarSchema) -> str:
    obj = _node_to_obj(schema.root)
    if schema.version:
        obj["version"] = schema.version
    return json.dumps(obj, ensure_ascii=False, indent=2, sort_keys=True) + "\n"


def load_schema(path) -> GrammarSchema:
    with open(path, encoding="utf-8") as f:
        return schema_from_json(f.read())


# ---------------------------------------------------------------------------
# Coded-event wire format (one canonical-JSON object per store line)
# ---------------------------------------------------------------------------


def event_to_obj(event: CodedEvent) -> dict:
    return {
        "record_id": event.record_id,
        "ordinal": event.ordinal,
        "status": event.status,
        "description": event.description,
        "span": list(event.span) if event.span else None,
        "flags": list(event.flags),
        "assignments": [
            {"path": list(a.path.segments), "value": a.value, "provenance": a.provenance}
            for a in event.assignments
        ],
    }


def event_from_obj(obj: dict) -> CodedEvent:
    return CodedEvent(
        record_id=obj["record_id"],
        ordinal=obj["ordinal"],
        status=obj.get("status", "auto"),
        description=obj.get("description", ""),
        span=tuple(obj["span"]) if obj.get("span") else None,
        flags=tuple(obj.get("flags", ())),
        assignments=tuple(
            Assignment(CategoryPath(a["path"]), a["value"], a.get("provenance", "extracted"))
            for a in obj.get("assignments", ())
        ),
    )


def canonical_json(obj) -> str:
    """Byte-stable JSON used for store lines: sorted keys, no spaces, UTF-8."""
    return json.dumps(obj, ensure_ascii=False, sort_keys=True, separators=(",", ":"))
