"""Independent grammar-based reader for the DOT subset the exporter emits.

Written against the DOT language reference, not against the exporter: a
recursive-descent parser over a token stream. Understands
``graph id { node; ... a -- b [k=v, ...]; ... }`` with quoted or bare
identifiers and backslash escapes inside quotes."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

_BARE = re.compile(r"[A-Za-z0-9_.-￿][A-Za-z0-9_.-￿-]*")
_PUNCT = {"{", "}", "[", "]", "=", ";", ","}


class DotSyntaxError(ValueError):
    pass


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens: list[tuple[str, str]] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch == '"':
            i += 1
            out = []
            while i < n and text[i] != '"':
                if text[i] == "\\" and i + 1 < n:
                    out.append(text[i + 1])
                    i += 2
                else:
                    out.append(text[i])
                    i += 1
            if i >= n:
                raise DotSyntaxError("unterminated quoted string")
            i += 1
            tokens.append(("id", "".join(out)))
        elif text.startswith("--", i):
            tokens.append(("edgeop", "--"))
            i += 2
        elif ch in _PUNCT:
            tokens.append((ch, ch))
            i += 1
        else:
            m = _BARE.match(text, i)
            if not m:
                raise DotSyntaxError(f"unexpected character {ch!r} at {i}")
            tokens.append(("id", m.group(0)))
            i = m.end()
    return tokens


@dataclass
class DotGraph:
    name: str
    nodes: set = field(default_factory=set)
    edges: list = field(default_factory=list)  # (a, b, {attr: value})


def parse_dot(text: str) -> DotGraph:
    toks = _tokenize(text)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else ("eof", "")

    def take(kind=None):
        nonlocal pos
        tok = peek()
        if kind is not None and tok[0] != kind:
            raise DotSyntaxError(f"expected {kind}, got {tok}")
        pos += 1
        return tok

    head = take("id")
    if head[1] != "graph":
        raise DotSyntaxError(f"expected 'graph', got {head[1]!r}")
    name = ""
    if peek()[0] == "id":
        name = take("id")[1]
    take("{")
    graph = DotGraph(name=name)
    while peek()[0] != "}":
        a = take("id")[1]
        if peek()[0] == "edgeop":
            take("edgeop")
            b = take("id")[1]
            attrs = _parse_attrs(peek, take)
            graph.edges.append((a, b, attrs))
            graph.nodes.update((a, b))
        else:
            attrs = _parse_attrs(peek, take)
            graph.nodes.add(a)
        take(";")
    take("}")
    if peek()[0] != "eof":
        raise DotSyntaxError("trailing content after graph")
    return graph


def _parse_attrs(peek, take) -> dict:
    attrs: dict = {}
    if peek()[0] != "[":
        return attrs
    take("[")
    while peek()[0] != "]":
        k = take("id")[1]
        take("=")
        v = take("id")[1]
        attrs[k] = v
        if peek()[0] == ",":
            take(",")
    take("]")
    return attrs
