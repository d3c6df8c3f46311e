"""Command-line pipeline: ingest -> code -> review serve -> query ->
analyze -> export.

Exit codes: 0 success, 1 usage error, 2 data error. Result data goes to
stdout or --out; every diagnostic goes to stderr. All outputs are
deterministic for fixed inputs, so rerunning the pipeline reproduces the
store and export files byte for byte.

Category paths on the command line are '/'-joined exact names; escape a
literal slash inside a name as '\\/' (two shipped category names need it).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import analyze as analyze_mod
from . import export as export_mod
from . import store as store_mod
from .enrich import (
    CodingBugError,
    KnowledgeBase,
    KnowledgeBaseError,
    code_record,
    load_kb,
)
from .extract import RoleVocabulary, VocabularyError, classify_event, extract_actors, load_vocabulary
from .grammar import (
    CategoryPath,
    GrammarSchema,
    PathNotFoundError,
    canonical_json,
    event_to_obj,
    leaf_paths,
    load_schema,
    validate_schema,
)
from .ingest import DelimiterConfig, DiaryRecord, dump_records, load_records, parse_records
from .review import ReviewServer
from .store import Clause, EventStore, QueryFilter, StoreError

_DATA_ERRORS = (
    StoreError,
    KnowledgeBaseError,
    VocabularyError,
    PathNotFoundError,
    CodingBugError,
    analyze_mod.AnalysisError,
    export_mod.ExportError,
    OSError,
    UnicodeDecodeError,
    ValueError,
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def code_corpus(
    records: list[DiaryRecord],
    vocab: RoleVocabulary,
    kb: KnowledgeBase,
    schema: GrammarSchema,
) -> EventStore:
    """Extract, classify, enrich, and validate every record into a fresh
    store. This is the whole automated coding pass."""
    st = EventStore(schema=schema)
    for record in records:
        mentions = extract_actors(record.description, vocab)
        kind = classify_event(record.description, mentions, vocab)
        st.put_events(code_record(record, mentions, kind, kb, schema, vocab))
    return st


def _write_out(text: str, out: str | None):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8", newline="\n")


def _parse_path(text: str) -> CategoryPath:
    return CategoryPath.from_string(text)


def _parse_filters(pairs: list[str]) -> QueryFilter:
    clauses = []
    for pair in pairs:
        if "=" not in pair:
            raise _UsageError(f"--filter needs path=value, got {pair!r}")
        path, value = pair.split("=", 1)
        clauses.append(Clause(path=_parse_path(path), op="equals", value=value))
    return QueryFilter(clauses=tuple(clauses))


def _default_prefixes(schema: GrammarSchema) -> list[CategoryPath]:
    # Depth-1 default: one aggregate per container child of the root.
    return [CategoryPath([c.name]) for c in schema.root.children if c.value_kind == "none"]


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_ingest(args) -> int:
    delim = "\t" if args.format in ("tab", "\\t") else args.format
    if len(delim) != 1:
        raise _UsageError(f"--format must be a single character or 'tab', got {args.format!r}")
    raw = Path(args.input).read_bytes()
    text = raw.decode("utf-8")  # fatal on undecodable input
    cfg = DelimiterConfig(
        delimiter=delim,
        date_order="month_first" if args.date_order == "md" else "day_first",
        pivot_year=args.pivot_year,
        quoted=args.quoted,
    )
    result = parse_records(text, cfg)
    for rej in result.rejects:
        print(f"line {rej.line_number}: rejected: {rej.reason}", file=sys.stderr)
    _write_out(dump_records(result.records), args.out)
    print(f"accepted={len(result.records)} rejected={len(result.rejects)}", file=sys.stderr)
    return 0


def _cmd_code(args) -> int:
    schema = load_schema(args.schema)
    violations = validate_schema(schema)
    if violations:
        raise StoreError("invalid schema: " + "; ".join(map(str, violations)))
    vocab = load_vocabulary(args.vocab)
    kb = load_kb(args.kb)
    records = load_records(Path(args.records).read_text(encoding="utf-8"))
    st = code_corpus(records, vocab, kb, schema)
    store_mod.save(st, args.store)
    counts = st.counts()
    print(f"auto={counts['auto']} flagged={counts['flagged']}")
    return 0


def _cmd_review_serve(args) -> int:
    st = store_mod.load(args.store)
    server = ReviewServer(
        st, args.store, host=args.host, port=args.port, token=args.token, ui_dir=args.ui
    )
    print(f"review service on http://{args.host}:{server.port}/", file=sys.stderr)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    return 0


def _cmd_query(args) -> int:
    flt = _parse_filters(args.filter or [])
    st = store_mod.load(args.store)
    events = store_mod.query(st, flt)
    if args.format == "ndjson":
        _write_out("".join(canonical_json(event_to_obj(e)) + "\n" for e in events), args.out)
    else:
        paths = [p for p, _ in leaf_paths(st.schema)]
        header = ["record_id", "ordinal", "status"] + [str(p) for p in paths]
        lines = [header] + [
            [e.record_id, e.ordinal, e.status] + [e.first_value(p) or "" for p in paths]
            for e in events
        ]
        _write_out(analyze_mod._csv(lines), args.out)
    return 0


def _cmd_analyze(args) -> int:
    if args.what == "norm" and not args.kb:
        raise _UsageError("analyze norm needs --kb")
    if args.what == "crosstab" and (not args.row or not args.col):
        raise _UsageError("analyze crosstab needs --row and --col")
    st = store_mod.load(args.store)
    if args.what == "freq":
        table = analyze_mod.frequency_table(
            st.analysis_events(), [_parse_path(p) for p in args.group_by or []]
        )
        _write_out(analyze_mod.table_to_csv(table), args.out)
    elif args.what == "norm":
        kb = load_kb(args.kb)
        gov_path = kb.targets.government
        events = [e for e in st.meeting_events() if e.first_value(gov_path) is not None]
        table = analyze_mod.normalized_counts(events, kb, unit=args.unit)
        _write_out(analyze_mod.table_to_csv(table), args.out)
    elif args.what == "crosstab":
        tab = analyze_mod.crosstab(
            st.analysis_events(), _parse_path(args.row), _parse_path(args.col)
        )
        _write_out(analyze_mod.crosstab_to_csv(tab), args.out)
    else:  # network
        prefixes = [_parse_path(p) for p in args.depth_prefix or []] or _default_prefixes(st.schema)
        net = analyze_mod.build_network(st.meeting_events(), prefixes)
        _write_out(analyze_mod.network_to_csv(net), args.out)
    return 0


def _cmd_export(args) -> int:
    if args.what == "kml" and not args.kb:
        raise _UsageError("export kml needs --kb")
    if args.what == "svg" and args.normalized and not args.kb:
        raise _UsageError("export svg --normalized needs --kb")
    st = store_mod.load(args.store)
    if args.what == "kml":
        kb = load_kb(args.kb)
        kml, unlocated = export_mod.to_kml(st.analysis_events(), kb.gazetteer)
        for u in unlocated:
            print(f"unlocated: record {u.record_id}#{u.ordinal} place {u.place!r}",
                  file=sys.stderr)
        _write_out(kml, args.out)
    elif args.what == "dot":
        prefixes = [_parse_path(p) for p in args.depth_prefix or []] or _default_prefixes(st.schema)
        net = analyze_mod.build_network(st.meeting_events(), prefixes)
        _write_out(export_mod.to_dot(net), args.out)
    else:  # svg
        if args.normalized:
            kb = load_kb(args.kb)
            gov_path = kb.targets.government
            events = [e for e in st.meeting_events() if e.first_value(gov_path) is not None]
            table = analyze_mod.normalized_counts(events, kb, unit=args.unit)
        else:
            table = analyze_mod.frequency_table(
                st.analysis_events(), [_parse_path(p) for p in args.group_by or []]
            )
        _write_out(export_mod.to_histogram_svg(table), args.out)
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> _Parser:
    p = _Parser(prog="qnacoder", description=__doc__,
                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("ingest", help="parse a delimited diary file into a records file")
    sp.add_argument("--input", required=True)
    sp.add_argument("--format", default="tab", help="column delimiter (single char or 'tab')")
    sp.add_argument("--date-order", choices=("md", "dm"), default="md")
    sp.add_argument("--pivot-year", type=int, default=1970)
    sp.add_argument("--quoted", action="store_true", help="RFC-4180-style quoted columns")
    sp.add_argument("--out", required=True, help="records file (ndjson); '-' for stdout")
    sp.set_defaults(func=_cmd_ingest)

    sp = sub.add_parser("code", help="extract, classify, enrich, and persist coded events")
    sp.add_argument("--records", required=True)
    sp.add_argument("--vocab", required=True)
    sp.add_argument("--kb", required=True)
    sp.add_argument("--schema", required=True)
    sp.add_argument("--store", required=True, help="store directory")
    sp.set_defaults(func=_cmd_code)

    sp = sub.add_parser("review", help="human-verification service")
    rsub = sp.add_subparsers(dest="review_command", required=True)
    rs = rsub.add_parser("serve", help="serve the review API and UI")
    rs.add_argument("--store", required=True)
    rs.add_argument("--host", default="127.0.0.1")
    rs.add_argument("--port", type=int, default=8099)
    rs.add_argument("--token", default=None, help="require X-Auth-Token to match")
    rs.add_argument("--ui", default=None, help="directory of built UI assets")
    rs.set_defaults(func=_cmd_review_serve)

    sp = sub.add_parser("query", help="filter events (conjunction of path=value clauses)")
    sp.add_argument("--store", required=True)
    sp.add_argument("--filter", action="append", metavar="PATH=VALUE")
    sp.add_argument("--format", choices=("csv", "ndjson"), default="ndjson")
    sp.add_argument("--out", default="-")
    sp.set_defaults(func=_cmd_query)

    sp = sub.add_parser(
        "analyze",
        help="freq | norm | crosstab | network (CSV out). freq columns: group paths, count;"
        " norm columns: government, count, normalized (rejected events always excluded;"
        " norm and network count meeting events only)",
    )
    sp.add_argument("what", choices=("freq", "norm", "crosstab", "network"))
    sp.add_argument("--store", required=True)
    sp.add_argument("--group-by", action="append", metavar="PATH")
    sp.add_argument("--row")
    sp.add_argument("--col")
    sp.add_argument("--depth-prefix", action="append", metavar="PATH")
    sp.add_argument("--kb", help="knowledge base (needed by norm)")
    sp.add_argument("--unit", choices=("days", "months"), default="days")
    sp.add_argument("--out", default="-")
    sp.set_defaults(func=_cmd_analyze)

    sp = sub.add_parser("export", help="kml | dot | svg visualization files")
    sp.add_argument("what", choices=("kml", "dot", "svg"))
    sp.add_argument("--store", required=True)
    sp.add_argument("--kb", help="knowledge base (gazetteer for kml, durations for --normalized)")
    sp.add_argument("--depth-prefix", action="append", metavar="PATH")
    sp.add_argument("--group-by", action="append", metavar="PATH")
    sp.add_argument("--normalized", action="store_true", help="svg bars use per-day rates")
    sp.add_argument("--unit", choices=("days", "months"), default="days")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=_cmd_export)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except _UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 1
    except _DATA_ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
