"""Deterministic synthetic corpora for the property and acceptance tests.

A corpus bundles diary records in the source style (honorific-led names
with ALL-CAPS surnames, ceremony phrases, deliberate noise), a knowledge
base that resolves only part of the cast (so some records flag for
review), and the schema/vocabulary they are coded against. Same seed,
same corpus, byte for byte.
"""

from __future__ import annotations

import datetime as _dt
import random
from dataclasses import dataclass

from .enrich import (
    Affiliation,
    GovernmentPeriod,
    KnowledgeBase,
    PartyAttrs,
    PartyRecord,
    PersonRecord,
    Position,
)
from .extract import RoleVocabulary
from .grammar import CategoryDef, CategoryPath, GrammarSchema
from .ingest import DiaryRecord
from .presets import default_schema, default_vocabulary

GIVEN_NAMES = (
    "Mario", "Luca", "Anna", "Paolo", "Marco", "Elena", "Franca", "Giulia",
    "Sergio", "Carlo", "Maria", "Pietro",
)
SURNAMES = (
    "ROSSI", "BIANCHI", "FERRARI", "RUSSO", "ESPOSITO", "COLOMBO", "RICCI",
    "MARINO", "GRECO", "BRUNO", "GALLO", "CONTI", "DE LUCA", "D'AMICO",
    "DELLA VALLE", "MORETTI", "BARBIERI", "FONTANA", "SANTORO", "MARIANI",
)
HONORIFICS = ("On.", "Sen.", "Dott.", "Prof.", "Avv.")
# No bare " e " inside role phrases: it is a top-level mention delimiter.
ROLE_PHRASES = (
    "Ministro degli Esteri",
    "Ministro dell'Interno",
    "Presidente della Regione Lazio",
    "Sindaco di Milano",
    "Segretario del partito",
    "Sottosegretario alla Difesa",
    "Capogruppo alla Camera dei Deputati",
    "Presidente della Commissione Bilancio",
)
PLACES = (
    "Palazzo del Quirinale", "Palazzo Chigi", "Palazzo Madama", "Montecitorio",
    "Castelporziano", "Villa Rosebery",
)
CEREMONY_TEXTS = (
    "Intervento alla cerimonia di apertura dell'anno accademico",
    "Visita ufficiale alla sede della FAO",
    "Partecipazione al concerto di fine anno",
    "Cerimonia di consegna delle onorificenze",
    "Inaugurazione della mostra sul Risorgimento",
)
UNCLASSIFIED_TEXTS = (
    "colloquio telefonico riservato",
    "trasferimento verso la residenza estiva",
    "firma di atti e decreti",
)

PARTIES = ("Partito Azzurro", "Partito Verde", "Partito Arancione")


@dataclass(frozen=True)
class SyntheticCorpus:
    records: tuple[DiaryRecord, ...]
    schema: GrammarSchema
    vocab: RoleVocabulary
    kb: KnowledgeBase


def make_kb(rng: random.Random, known_fraction: float = 0.7) -> KnowledgeBase:
    """Governments partition 2000-01-01..2007-12-31 into 2-4 periods; only
    ``known_fraction`` of the surname pool gets a person record."""
    n_gov = rng.randint(2, 4)
    start = _dt.date(2000, 1, 1)
    end = _dt.date(2007, 12, 31)
    cuts = sorted(rng.sample(range(1, (end - start).days), n_gov - 1))
    bounds = [start] + [start + _dt.timedelta(days=c) for c in cuts] + [end]
    governments = tuple(
        GovernmentPeriod(name=f"Gabinetto {i + 1}", start=bounds[i], end=bounds[i + 1])
        for i in range(n_gov)
    )
    parties = tuple(
        PartyRecord(
            party_name=name,
            by_government={
                g.name: PartyAttrs(
                    alignment=rng.choice(("majority", "minority")),
                    standing=rng.choice(("parliamentary", "extraparliamentary")),
                )
                for g in governments
            },
        )
        for name in PARTIES
    )
    chamber = CategoryPath(["Internal Politics", "Legislative Power", "Chamber of Deputies"])
    senate = CategoryPath(["Internal Politics", "Legislative Power", "Senate of the Republic"])
    persons = []
    for surname in SURNAMES:
        if rng.random() > known_fraction:
            continue
        positions = ()
        if rng.random() < 0.5:
            positions = (
                Position(rng.choice((chamber, senate)), rng.choice(("Deputato", "Senatore"))),
            )
        persons.append(
            PersonRecord(
                surname=surname.title(),
                given_name=rng.choice(GIVEN_NAMES),
                affiliations=(
                    Affiliation(
                        start=start,
                        end=end,
                        party_name=rng.choice(PARTIES),
                        role_label=rng.choice(("", "Leader of party", "Membro della direzione")),
                        power_branch=rng.choice(("legislative", "executive", "other")),
                        positions=positions,
                    ),
                ),
            )
        )
    gazetteer = {
        place: (round(rng.uniform(36.0, 47.0), 4), round(rng.uniform(6.0, 18.0), 4))
        for place in PLACES
        if rng.random() < 0.7
    }
    return KnowledgeBase(
        governments=governments, parties=parties, persons=tuple(persons), gazetteer=gazetteer
    )


def schema_for_kb(kb: KnowledgeBase) -> GrammarSchema:
    """The default schema with the government vocabulary rebuilt from the
    KB's period names, so enrichment output always validates."""

    def rebuild(node: CategoryDef) -> CategoryDef:
        if node.name == "Goverment":
            return CategoryDef(
                node.name,
                "closed_vocabulary",
                node.cardinality,
                vocabulary=tuple(g.name for g in kb.governments),
            )
        return CategoryDef(
            node.name,
            node.value_kind,
            node.cardinality,
            vocabulary=node.vocabulary,
            children=tuple(rebuild(c) for c in node.children),
        )

    base = default_schema()
    return GrammarSchema(root=rebuild(base.root), version="synthetic")


def _actor_text(rng: random.Random) -> str:
    parts = []
    if rng.random() < 0.85:
        parts.append(rng.choice(HONORIFICS))
        if rng.random() < 0.3:
            parts.append(rng.choice(HONORIFICS))
    if rng.random() < 0.8:
        parts.append(rng.choice(GIVEN_NAMES))
    parts.append(rng.choice(SURNAMES))
    text = " ".join(parts)
    if rng.random() < 0.85:
        text += ", " + rng.choice(ROLE_PHRASES)
    return text


def _meeting_description(rng: random.Random) -> str:
    return ", e ".join(_actor_text(rng) for _ in range(rng.randint(1, 3)))


def make_corpus(seed: int, n_records: int = 200, kb: KnowledgeBase | None = None) -> SyntheticCorpus:
    rng = random.Random(seed)
    kb = kb or make_kb(rng)
    lo = min(g.start for g in kb.governments)
    hi = max(g.end for g in kb.governments)
    span_days = (hi - lo).days
    records = []
    for i in range(1, n_records + 1):
        roll = rng.random()
        if roll < 0.7:
            description = _meeting_description(rng)
        elif roll < 0.9:
            description = rng.choice(CEREMONY_TEXTS)
        else:
            description = rng.choice(UNCLASSIFIED_TEXTS)
        records.append(
            DiaryRecord(
                record_id=i,
                date=lo + _dt.timedelta(days=rng.randrange(span_days)),
                place=rng.choice(PLACES),
                description=description,
            )
        )
    return SyntheticCorpus(
        records=tuple(records),
        schema=schema_for_kb(kb),
        vocab=default_vocabulary(),
        kb=kb,
    )
