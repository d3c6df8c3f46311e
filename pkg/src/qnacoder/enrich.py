"""Join extracted mentions with auxiliary knowledge-base tables and assemble
coded events.

The knowledge base is user-supplied data, never code: government periods,
party attributes per government, person affiliation intervals, and a
gazetteer. Matching a mention to a person fills the grammar categories for
party, alignment, standing, role labels, and the government in office at the
record date. Attributes with no applicable value are simply omitted.

Date intervals are half-open [start, end) so transition days are
unambiguous.
"""

from __future__ import annotations

import datetime as _dt
import json
import unicodedata
from dataclasses import dataclass, field

from .extract import (
    CEREMONY,
    FLAG_AMBIGUOUS,
    FLAG_UNCLASSIFIED,
    FLAG_UNRESOLVED,
    MEETING,
    ActorMention,
    RoleVocabulary,
    flag_reasons,
)
from .grammar import (
    Assignment,
    CategoryPath,
    CodedEvent,
    GrammarSchema,
    validate_event,
)
from .ingest import DiaryRecord

DEFAULT_SUBJECT = "Presidente della Repubblica"

SUBJECT_PATH = CategoryPath(["Subject"])
VERB_PATH = CategoryPath(["Verb"])
OBJECT_PATH = CategoryPath(["Object"])
DATE_PATH = CategoryPath(["Date"])
PLACE_PATH = CategoryPath(["Place"])


def _key(s: str) -> str:
    return unicodedata.normalize("NFC", s).casefold()


class KnowledgeBaseError(ValueError):
    pass


class NoGovernmentError(LookupError):
    def __init__(self, date: _dt.date):
        self.date = date
        super().__init__(f"no government in office on {date.isoformat()}")


class CodingBugError(RuntimeError):
    """A coded event failed schema validation; with consistent shipped
    fixtures this indicates a pipeline bug, not bad data."""

    def __init__(self, key, violations):
        self.key = key
        self.violations = violations
        super().__init__(f"event {key} violates the schema: " + "; ".join(map(str, violations)))


@dataclass(frozen=True)
class GovernmentPeriod:
    name: str
    start: _dt.date  # inclusive
    end: _dt.date  # exclusive

    @property
    def duration_days(self) -> int:
        return (self.end - self.start).days

    def covers(self, date: _dt.date) -> bool:
        return self.start <= date < self.end


@dataclass(frozen=True)
class PartyAttrs:
    alignment: str  # "majority" | "minority"
    standing: str  # "parliamentary" | "extraparliamentary"


@dataclass(frozen=True)
class PartyRecord:
    party_name: str
    by_government: dict[str, PartyAttrs] = field(default_factory=dict)


@dataclass(frozen=True)
class Position:
    """An institutional role carried as data: the grammar path it fills and
    the label to fill it with (e.g. Chamber of Deputies -> Leader of
    Minority Group)."""

    path: CategoryPath
    label: str


@dataclass(frozen=True)
class Affiliation:
    start: _dt.date
    end: _dt.date
    party_name: str
    role_label: str = ""
    power_branch: str = "other"  # legislative | executive | judiciary | other
    positions: tuple[Position, ...] = ()

    def covers(self, date: _dt.date) -> bool:
        return self.start <= date < self.end


@dataclass(frozen=True)
class PersonRecord:
    surname: str
    given_name: str = ""
    affiliations: tuple[Affiliation, ...] = ()


@dataclass(frozen=True)
class EnrichmentTargets:
    """Grammar paths the knowledge-base attributes flow into. Defaults match
    the shipped schema; override via the KB file's "targets" object."""

    government: CategoryPath = CategoryPath(
        ["Internal Politics", "Political Organizations", "Goverment"]
    )
    party_name: CategoryPath = CategoryPath(
        ["Internal Politics", "Political Organizations", "Party Name"]
    )
    alignment: CategoryPath = CategoryPath(
        ["Internal Politics", "Political Organizations", "Majority/Minority Political Parties"]
    )
    standing: CategoryPath = CategoryPath(
        ["Internal Politics", "Political Organizations", "Parliamentary/Extraparliamentary"]
    )
    party_role: CategoryPath = CategoryPath(
        ["Internal Politics", "Political Organizations", "Political Parties"]
    )


@dataclass(frozen=True)
class KnowledgeBase:
    governments: tuple[GovernmentPeriod, ...] = ()
    parties: tuple[PartyRecord, ...] = ()
    persons: tuple[PersonRecord, ...] = ()
    gazetteer: dict[str, tuple[float, float]] = field(default_factory=dict)  # name -> (lat, lon)
    targets: EnrichmentTargets = field(default_factory=EnrichmentTargets)

    def __post_init__(self):
        by_surname: dict[str, list[PersonRecord]] = {}
        for p in self.persons:
            by_surname.setdefault(_key(p.surname), []).append(p)
        object.__setattr__(self, "_by_surname", by_surname)

    def persons_named(self, surname: str) -> list[PersonRecord]:
        return self._by_surname.get(_key(surname), [])

    def party(self, name: str) -> PartyRecord | None:
        for p in self.parties:
            if _key(p.party_name) == _key(name):
                return p
        return None

    def locate(self, place: str) -> tuple[float, float] | None:
        return self.gazetteer.get(unicodedata.normalize("NFC", place))


def validate_kb(kb: KnowledgeBase) -> list[str]:
    problems: list[str] = []
    gov_names = set()
    prev: GovernmentPeriod | None = None
    for g in kb.governments:
        if g.start >= g.end:
            problems.append(f"government {g.name!r}: start is not before end")
        if g.name in gov_names:
            problems.append(f"duplicate government name {g.name!r}")
        gov_names.add(g.name)
        if prev and g.start < prev.end:
            problems.append(f"government {g.name!r} overlaps {prev.name!r}")
        prev = g
    party_names = set()
    for p in kb.parties:
        if _key(p.party_name) in party_names:
            problems.append(f"duplicate party {p.party_name!r}")
        party_names.add(_key(p.party_name))
        for gname in p.by_government:
            if gname not in gov_names:
                problems.append(f"party {p.party_name!r} references unknown government {gname!r}")
    for person in kb.persons:
        affs = sorted(person.affiliations, key=lambda a: a.start)
        for i, a in enumerate(affs):
            if a.start >= a.end:
                problems.append(f"person {person.surname!r}: affiliation interval is empty")
            if i and affs[i - 1].end > a.start:
                problems.append(f"person {person.surname!r}: overlapping affiliation intervals")
            if _key(a.party_name) not in party_names:
                problems.append(
                    f"person {person.surname!r} references unknown party {a.party_name!r}"
                )
    for place, (lat, lon) in kb.gazetteer.items():
        if not (-90.0 <= lat <= 90.0 and -180.0 <= lon <= 180.0):
            problems.append(f"gazetteer {place!r}: coordinates out of range")
    return problems


def government_for_date(kb: KnowledgeBase, date: _dt.date) -> GovernmentPeriod:
    """The unique period with start <= date < end; periods never overlap."""
    for g in kb.governments:
        if g.covers(date):
            return g
    raise NoGovernmentError(date)


@dataclass(frozen=True)
class ResolvedActor:
    """Outcome of a knowledge-base lookup: either a set of enrichment
    assignments or an unresolved marker (a value, not an error)."""

    assignments: tuple[Assignment, ...] = ()
    unresolved_reason: str | None = None  # FLAG_UNRESOLVED | FLAG_AMBIGUOUS

    @property
    def resolved(self) -> bool:
        return self.unresolved_reason is None


def resolve_actor(mention: ActorMention, date: _dt.date, kb: KnowledgeBase) -> ResolvedActor:
    """Match the mention's surname (case-insensitive, NFC) against the KB.

    More than one surname match falls back to the given name; zero or still
    ambiguous matches return an unresolved marker and the pipeline escalates
    the record to flagged.
    """
    matches = kb.persons_named(mention.surname)
    if len(matches) > 1 and mention.given_name:
        matches = [p for p in matches if _key(p.given_name) == _key(mention.given_name)]
    if not matches:
        return ResolvedActor(unresolved_reason=FLAG_UNRESOLVED)
    if len(matches) > 1:
        return ResolvedActor(unresolved_reason=FLAG_AMBIGUOUS)
    person = matches[0]

    t = kb.targets
    out: list[Assignment] = []
    gov: GovernmentPeriod | None
    try:
        gov = government_for_date(kb, date)
    except NoGovernmentError:
        gov = None
    if gov:
        out.append(Assignment(t.government, gov.name, "enriched"))
    aff = next((a for a in person.affiliations if a.covers(date)), None)
    if aff:
        out.append(Assignment(t.party_name, aff.party_name, "enriched"))
        party = kb.party(aff.party_name)
        attrs = party.by_government.get(gov.name) if (party and gov) else None
        if attrs:
            out.append(Assignment(t.alignment, attrs.alignment.capitalize(), "enriched"))
            out.append(Assignment(t.standing, attrs.standing.capitalize(), "enriched"))
        if aff.role_label:
            out.append(Assignment(t.party_role, aff.role_label, "enriched"))
        for pos in aff.positions:
            out.append(Assignment(pos.path, pos.label, "enriched"))
    return ResolvedActor(assignments=tuple(out))


def code_record(
    record: DiaryRecord,
    mentions: list[ActorMention],
    kind: str,
    kb: KnowledgeBase,
    schema: GrammarSchema,
    vocab: RoleVocabulary,
    subject: str = DEFAULT_SUBJECT,
) -> list[CodedEvent]:
    """Assemble coded events for one record.

    Meetings yield one event per mentioned actor so frequency analysis
    reduces to row counting; ceremonies and unclassified records yield a
    single event with no Object. Every produced event must validate against
    the schema; a violation raises CodingBugError.
    """
    base = [
        Assignment(SUBJECT_PATH, subject, "extracted"),
        Assignment(DATE_PATH, record.date.isoformat(), "extracted"),
        Assignment(PLACE_PATH, record.place, "extracted"),
    ]
    events: list[CodedEvent] = []
    if kind == MEETING and mentions:
        for ordinal, m in enumerate(mentions, start=1):
            assignments = [
                base[0],
                Assignment(VERB_PATH, vocab.meeting_verb, "extracted"),
                Assignment(OBJECT_PATH, m.display_name, "extracted"),
                base[1],
                base[2],
            ]
            resolved = resolve_actor(m, record.date, kb)
            assignments.extend(resolved.assignments)
            reasons = flag_reasons([m], kind)
            if not resolved.resolved:
                reasons.append(resolved.unresolved_reason)
            events.append(
                CodedEvent(
                    record_id=record.record_id,
                    ordinal=ordinal,
                    assignments=tuple(assignments),
                    status="flagged" if reasons else "auto",
                    description=record.description,
                    span=m.span,
                    flags=tuple(reasons),
                )
            )
    else:
        reasons = [FLAG_UNCLASSIFIED] if kind != CEREMONY else []
        events.append(
            CodedEvent(
                record_id=record.record_id,
                ordinal=1,
                assignments=tuple(base),
                status="flagged" if reasons else "auto",
                description=record.description,
                span=None,
                flags=tuple(reasons),
            )
        )
    for e in events:
        violations = validate_event(schema, e)
        if violations:
            raise CodingBugError(e.key, violations)
    return events


# ---------------------------------------------------------------------------
# KB file: one JSON document, ISO-8601 dates, half-open intervals.
# ---------------------------------------------------------------------------


def _no_duplicate_keys(pairs):
    keys = [k for k, _ in pairs]
    if len(set(keys)) != len(keys):
        dupes = sorted({k for k in keys if keys.count(k) > 1})
        raise KnowledgeBaseError(f"duplicate JSON keys: {dupes}")
    return dict(pairs)


def kb_from_json(text: str) -> KnowledgeBase:
    obj = json.loads(text, object_pairs_hook=_no_duplicate_keys)
    governments = tuple(
        sorted(
            (
                GovernmentPeriod(
                    name=g["name"],
                    start=_dt.date.fromisoformat(g["start"]),
                    end=_dt.date.fromisoformat(g["end"]),
                )
                for g in obj.get("governments", ())
            ),
            key=lambda g: g.start,
        )
    )
    parties = tuple(
        PartyRecord(
            party_name=p["party_name"],
            by_government={
                gname: PartyAttrs(alignment=a["alignment"], standing=a["standing"])
                for gname, a in p.get("by_government", {}).items()
            },
        )
        for p in obj.get("parties", ())
    )
    persons = tuple(
        PersonRecord(
            surname=p["surname"],
            given_name=p.get("given_name", ""),
            affiliations=tuple(
                Affiliation(
                    start=_dt.date.fromisoformat(a["start"]),
                    end=_dt.date.fromisoformat(a["end"]),
                    party_name=a["party_name"],
                    role_label=a.get("role_label", "") or "",
                    power_branch=a.get("power_branch", "other"),
                    positions=tuple(
                        Position(path=CategoryPath(pos["path"]), label=pos["label"])
                        for pos in a.get("positions", ())
                    ),
                )
                for a in p.get("affiliations", ())
            ),
        )
        for p in obj.get("persons", ())
    )
    raw_gazetteer = obj.get("gazetteer", {})
    gazetteer = {
        unicodedata.normalize("NFC", name): (float(c["lat"]), float(c["lon"]))
        for name, c in raw_gazetteer.items()
    }
    if len(gazetteer) != len(raw_gazetteer):
        raise KnowledgeBaseError("gazetteer keys collide after NFC normalization")
    targets_obj = obj.get("targets", {})
    targets = EnrichmentTargets(
        **{k: CategoryPath(v) for k, v in targets_obj.items()}
    )
    kb = KnowledgeBase(
        governments=governments,
        parties=parties,
        persons=persons,
        gazetteer=gazetteer,
        targets=targets,
    )
    problems = validate_kb(kb)
    if problems:
        raise KnowledgeBaseError("; ".join(problems))
    return kb


def load_kb(path) -> KnowledgeBase:
    with open(path, encoding="utf-8") as f:
        return kb_from_json(f.read())
