"""Random conjunctive-filter generator shared by the store tests and the
acceptance suite. Produces each filter in two forms: the package's Clause
and the plain dict the independent oracle consumes."""

from __future__ import annotations

from qnacoder.grammar import CategoryPath, leaf_paths
from qnacoder.store import Clause


def build_value_pool(events) -> dict[tuple, list[str]]:
    pool: dict[tuple, list[str]] = {}
    for e in events:
        for a in e.assignments:
            pool.setdefault(a.path.segments, []).append(a.value)
    return {k: sorted(set(v))[:8] for k, v in pool.items()}


def random_clause(rng, paths, value_pool):
    path = rng.choice(paths)
    op = rng.choice(["equals", "in_set", "exists", "date_between"])
    values = value_pool.get(path.segments, ["x"])
    if op == "equals":
        value = rng.choice(values + ["no-such-value"])
        return (
            Clause(path, "equals", value=value),
            {"segments": path.segments, "op": "equals", "value": value},
        )
    if op == "in_set":
        chosen = tuple(rng.sample(values, k=min(len(values), rng.randint(1, 3))))
        return (
            Clause(path, "in_set", values=chosen),
            {"segments": path.segments, "op": "in_set", "values": chosen},
        )
    if op == "date_between":
        lo = f"200{rng.randint(0, 7)}-01-01"
        hi = f"200{rng.randint(0, 7)}-12-31"
        date_path = CategoryPath(["Date"])
        return (
            Clause(date_path, "date_between", lo=lo, hi=hi),
            {"segments": date_path.segments, "op": "date_between", "lo": lo, "hi": hi},
        )
    return Clause(path, "exists"), {"segments": path.segments, "op": "exists"}


def schema_leaf_paths(schema):
    return [p for p, _ in leaf_paths(schema)]
