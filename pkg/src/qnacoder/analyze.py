"""Frequency tables, duration-normalized counts, cross-tabulations, and
ego networks over coded events.

Every operation conserves its input: row counts, margins, and edge weights
always sum back to the number of events fed in. Events missing a grouping
value land in an explicit "⟨unset⟩" bucket rather than being dropped.

The counting unit is the coded event, which is per actor for meetings: a
record where the President meets three people contributes three. This
choice changes histogram heights versus per-record counting and is kept
consistent across the whole pipeline.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .enrich import KnowledgeBase
from .grammar import CategoryPath, CodedEvent

UNSET = "⟨unset⟩"  # ⟨unset⟩
EGO = "Presidente della Repubblica"
OTHER = "⟨other⟩"  # ⟨other⟩

DAYS_PER_MONTH = 30.4375  # mean Gregorian month


class AnalysisError(ValueError):
    pass


@dataclass(frozen=True)
class FrequencyRow:
    key: tuple[str, ...]
    count: int
    normalized: float | None = None


@dataclass(frozen=True)
class FrequencyTable:
    group_by: tuple[CategoryPath, ...]
    rows: tuple[FrequencyRow, ...]

    @property
    def total(self) -> int:
        return sum(r.count for r in self.rows)


def _group_value(event: CodedEvent, path: CategoryPath) -> str:
    # Repeated-cardinality paths group by their first value.
    v = event.first_value(path)
    return v if v is not None else UNSET


def frequency_table(events: list[CodedEvent], group_by: list[CategoryPath]) -> FrequencyTable:
    """Count events per tuple of values at the group_by paths.

    Rows come back in lexicographic key order; with an empty group_by the
    table is a single all-events row.
    """
    counts: dict[tuple[str, ...], int] = {}
    for e in events:
        key = tuple(_group_value(e, p) for p in group_by)
        counts[key] = counts.get(key, 0) + 1
    rows = tuple(FrequencyRow(key=k, count=counts[k]) for k in sorted(counts))
    return FrequencyTable(group_by=tuple(group_by), rows=rows)


def normalized_counts(
    events: list[CodedEvent],
    kb: KnowledgeBase,
    unit: str = "days",
) -> FrequencyTable:
    """Per-government counts divided by government duration.

    Every event must carry a government assignment naming a period in the
    KB (filter first; ceremonies carry none). ``unit`` is "days" (rate per
    day) or "months" (rate per mean Gregorian month).
    """
    if unit not in ("days", "months"):
        raise AnalysisError(f"unknown normalization unit {unit!r}")
    path = kb.targets.government
    counts: dict[str, int] = {}
    for e in events:
        name = e.first_value(path)
        if name is None:
            raise AnalysisError(f"event {e.key} has no government assignment")
        counts[name] = counts.get(name, 0) + 1
    periods = {g.name: g for g in kb.governments}
    rows = []
    for name in sorted(counts):
        if name not in periods:
            raise AnalysisError(f"government {name!r} not in the knowledge base")
        days = periods[name].duration_days
        if days <= 0:
            raise AnalysisError(f"government {name!r} has non-positive duration")
        denom = days if unit == "days" else days / DAYS_PER_MONTH
        rows.append(FrequencyRow(key=(name,), count=counts[name], normalized=counts[name] / denom))
    return FrequencyTable(group_by=(path,), rows=tuple(rows))


@dataclass(frozen=True)
class MeetingNetwork:
    """Star network around the fixed ego node: one labeled node per
    aggregate with the number of meetings as edge weight."""

    ego: str
    edges: tuple[tuple[str, int], ...]  # (label, weight), no zero weights

    @property
    def nodes(self) -> list[str]:
        return [self.ego] + [label for label, _ in self.edges]

    @property
    def total_weight(self) -> int:
        return sum(w for _, w in self.edges)


def build_network(
    events: list[CodedEvent],
    depth_prefixes: list[CategoryPath],
    ego: str = EGO,
) -> MeetingNetwork:
    """Attribute each event to the first prefix whose subtree holds at least
    one of its assignments; the node label is that prefix's last segment.

    Events matching no prefix fall into the "⟨other⟩" node. The depth-merge
    property (shallow weights equal grouped deep sums) holds when the deep
    prefixes cover every event the shallow ones match.
    """
    for p in depth_prefixes:
        if not p.segments:
            raise AnalysisError("empty depth prefix")
    weights: dict[str, int] = {}
    order: list[str] = []
    for e in events:
        label = None
        for prefix in depth_prefixes:
            k = len(prefix.segments)
            if any(a.path.segments[:k] == prefix.segments for a in e.assignments):
                label = prefix.segments[-1]
                break
        if label is None:
            label = OTHER
        if label not in weights:
            weights[label] = 0
            order.append(label)
        weights[label] += 1
    edges = tuple((label, weights[label]) for label in sorted(order))
    return MeetingNetwork(ego=ego, edges=edges)


@dataclass(frozen=True)
class CrossTab:
    row_path: CategoryPath
    col_path: CategoryPath
    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    cells: tuple[tuple[int, ...], ...]  # cells[i][j]

    @property
    def row_margins(self) -> tuple[int, ...]:
        return tuple(sum(row) for row in self.cells)

    @property
    def col_margins(self) -> tuple[int, ...]:
        return tuple(sum(self.cells[i][j] for i in range(len(self.row_labels)))
                     for j in range(len(self.col_labels)))

    @property
    def grand_total(self) -> int:
        return sum(self.row_margins)


def crosstab(events: list[CodedEvent], row_path: CategoryPath, col_path: CategoryPath) -> CrossTab:
    """Counts per (row value, column value) with explicit unset buckets, so
    margins and the grand total conserve the event count."""
    counts: dict[tuple[str, str], int] = {}
    for e in events:
        rv = _group_value(e, row_path)
        cv = _group_value(e, col_path)
        counts[(rv, cv)] = counts.get((rv, cv), 0) + 1
    row_labels = tuple(sorted({rv for rv, _ in counts}))
    col_labels = tuple(sorted({cv for _, cv in counts}))
    cells = tuple(
        tuple(counts.get((rv, cv), 0) for cv in col_labels) for rv in row_labels
    )
    return CrossTab(
        row_path=row_path,
        col_path=col_path,
        row_labels=row_labels,
        col_labels=col_labels,
        cells=cells,
    )


# ---------------------------------------------------------------------------
# CSV emission (header row first; see CLI help for column orders)
# ---------------------------------------------------------------------------


def _csv(rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerows(rows)
    return buf.getvalue()


def table_to_csv(table: FrequencyTable) -> str:
    """Columns: one per group path (slash-joined), then count, then
    normalized when any row has one."""
    has_norm = any(r.normalized is not None for r in table.rows)
    header = [str(p) for p in table.group_by] + ["count"] + (["normalized"] if has_norm else [])
    rows: list[list] = [header]
    for r in table.rows:
        row = list(r.key) + [r.count]
        if has_norm:
            row.append(repr(r.normalized) if r.normalized is not None else "")
        rows.append(row)
    return _csv(rows)


def network_to_csv(network: MeetingNetwork) -> str:
    """Columns: source, target, weight; one row per edge."""
    rows: list[list] = [["source", "target", "weight"]]
    for label, weight in network.edges:
        rows.append([network.ego, label, weight])
    return _csv(rows)


def crosstab_to_csv(tab: CrossTab) -> str:
    """First column is the row value, then one column per column value,
    then the row margin; the last line holds column margins and the grand
    total."""
    header = [f"{tab.row_path}\\{tab.col_path}"] + list(tab.col_labels) + ["total"]
    rows: list[list] = [header]
    for label, cell_row, margin in zip(tab.row_labels, tab.cells, tab.row_margins):
        rows.append([label] + list(cell_row) + [margin])
    rows.append(["total"] + list(tab.col_margins) + [tab.grand_total])
    return _csv(rows)
