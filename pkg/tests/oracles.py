"""Independent oracle implementations used to cross-check the real code.

Deliberately naive and self-contained: they re-derive answers from the raw
event structures without calling the query engine or the aggregation code,
so a shared bug cannot hide."""

from __future__ import annotations

import datetime as dt


def _values(event, segments: tuple[str, ...]) -> list[str]:
    return [a.value for a in event.assignments if a.path.segments == tuple(segments)]


def scan_filter(events, clauses) -> list:
    """Full-scan conjunctive filter. Each clause is a dict:
    {"segments": (...), "op": "equals"|"in_set"|"exists"|"date_between", ...}."""
    out = []
    for e in events:
        ok = True
        for c in clauses:
            vals = _values(e, c["segments"])
            op = c["op"]
            if op == "equals":
                hit = c["value"] in vals
            elif op == "in_set":
                hit = any(v in c["values"] for v in vals)
            elif op == "exists":
                hit = len(vals) > 0
            elif op == "date_between":
                lo = dt.date.fromisoformat(c["lo"])
                hi = dt.date.fromisoformat(c["hi"])
                hit = False
                for v in vals:
                    try:
                        hit = hit or (lo <= dt.date.fromisoformat(v) <= hi)
                    except ValueError:
                        pass
            else:
                raise AssertionError(op)
            if not hit:
                ok = False
                break
        if ok:
            out.append(e)
    return out


def brute_force_normalized(events, governments, gov_segments: tuple[str, ...]) -> dict[str, float]:
    """Per-government event tally divided by hand-computed day spans.
    ``governments`` is a list of (name, start_date, end_date)."""
    tally: dict[str, int] = {}
    for e in events:
        vals = _values(e, gov_segments)
        assert len(vals) == 1
        tally[vals[0]] = tally.get(vals[0], 0) + 1
    spans = {name: (end - start).days for name, start, end in governments}
    return {name: count / spans[name] for name, count in tally.items()}
