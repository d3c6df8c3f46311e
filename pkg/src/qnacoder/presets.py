"""Builders for the shipped example schema and vocabulary.

These mirror the JSON fixtures in the repository's fixtures/ directory; the
pipeline itself always loads such files, never these builders. Tests use
them to generate synthetic corpora and to pin the fixtures against drift.
"""

from __future__ import annotations

from .extract import RoleVocabulary
from .grammar import CategoryDef, GrammarSchema


def default_schema() -> GrammarSchema:
    """The presidential-diary coding scheme: SVO core, Internal Politics
    subtree (political organizations and legislative power), date, place.

    "Goverment" keeps the source corpus's historical spelling: stores coded
    with it stay queryable by the documented path.
    """
    leaf = CategoryDef
    root = CategoryDef(
        name="Event",
        value_kind="none",
        cardinality="required",
        children=(
            leaf("Subject", "entity_reference", "required"),
            leaf("Verb", "free_text", "optional"),
            leaf("Object", "entity_reference", "optional"),
            CategoryDef(
                "Internal Politics",
                "none",
                "optional",
                children=(
                    CategoryDef(
                        "Political Organizations",
                        "none",
                        "optional",
                        children=(
                            leaf("Political Parties", "free_text", "optional"),
                            leaf(
                                "Goverment",
                                "closed_vocabulary",
                                "optional",
                                vocabulary=("Prodi II", "Berlusconi IV", "Monti"),
                            ),
                            leaf(
                                "Parliamentary/Extraparliamentary",
                                "closed_vocabulary",
                                "optional",
                                vocabulary=("Parliamentary", "Extraparliamentary"),
                            ),
                            leaf(
                                "Majority/Minority Political Parties",
                                "closed_vocabulary",
                                "optional",
                                vocabulary=("Majority", "Minority"),
                            ),
                            leaf("Party Name", "free_text", "optional"),
                        ),
                    ),
                    CategoryDef(
                        "Legislative Power",
                        "none",
                        "optional",
                        children=(
                            leaf("Chamber of Deputies", "free_text", "optional"),
                            leaf("Senate of the Republic", "free_text", "optional"),
                        ),
                    ),
                ),
            ),
            leaf("Date", "calendar_date", "required"),
            leaf("Place", "place_name", "required"),
        ),
    )
    return GrammarSchema(root=root, version="por-1")


def default_vocabulary() -> RoleVocabulary:
    """Italian diary vocabulary: honorific titles with category hints,
    ceremony phrase prefixes, and an acronym stop-list."""
    return RoleVocabulary(
        honorifics=(
            ("On.", "member of parliament"),
            ("Sen.", "senator"),
            ("Presidente", "president or leader"),
            ("Dott.", "doctor"),
            ("Prof.", "professor"),
            ("Avv.", "lawyer"),
            ("Gen.", "general"),
            ("Card.", "cardinal"),
            ("Mons.", "monsignor"),
            ("S.E.", "excellency"),
        ),
        ceremony_markers=(
            "Intervento",
            "Cerimonia",
            "Visita",
            "Partecipazione",
            "Celebrazione",
            "Inaugurazione",
            "Commemorazione",
            "Concerto",
        ),
        org_stoplist=(
            "FAO",
            "NATO",
            "ONU",
            "UE",
            "UNESCO",
            "OCSE",
            "CGIL",
            "CISL",
            "UIL",
            "RAI",
            "ANSA",
        ),
        meeting_verb="incontra",
    )
