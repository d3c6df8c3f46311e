"""Semi-automated coding of diary-style institutional records into a
hierarchical story grammar, with human review, filtered queries,
aggregation, and geographic/network exports."""

from .analyze import (
    CrossTab,
    FrequencyTable,
    MeetingNetwork,
    build_network,
    crosstab,
    frequency_table,
    normalized_counts,
)
from .enrich import (
    KnowledgeBase,
    code_record,
    government_for_date,
    load_kb,
    resolve_actor,
)
from .export import to_dot, to_histogram_svg, to_kml
from .extract import (
    ActorMention,
    RoleVocabulary,
    classify_event,
    extract_actors,
    flag_for_review,
    load_vocabulary,
)
from .grammar import (
    Assignment,
    CategoryDef,
    CategoryPath,
    CodedEvent,
    GrammarSchema,
    load_schema,
    resolve_path,
    validate_event,
    validate_schema,
)
from .ingest import DiaryRecord, parse_date, parse_records
from .review import ReviewServer, apply_resolution, list_pending, progress
from .store import EventStore, QueryFilter, ReviewResolution, load, query, save

__version__ = "0.1.0"
