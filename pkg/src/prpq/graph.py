"""In-memory property graphs and the line-oriented ``.pg`` text format.

A graph file holds one record per line::

    # comment
    N alice Person name="Alice" age=25
    E e1 alice bob follow since=2020

Quoted values are strings (``\\"`` and ``\\\\`` escapes), unquoted values are
decimal literals that load as exact :class:`fractions.Fraction` values.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

Value = Union[str, Fraction]

FORWARD = "forward"
BACKWARD = "backward"


class GraphFormatError(ValueError):
    """Raised when a ``.pg`` document cannot be loaded."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Node:
    id: str
    label: str
    attrs: Mapping[str, Value]


@dataclass(frozen=True)
class Edge:
    id: str
    src: str
    dst: str
    label: str
    attrs: Mapping[str, Value]


@dataclass(frozen=True)
class PropertyGraph:
    """Immutable labeled multigraph with label-indexed adjacency.

    ``out_index[(v, label)]`` lists the ids of edges leaving ``v`` with that
    label, ``in_index[(v, label)]`` the ones entering it, both in load order.
    """

    nodes: Mapping[str, Node]
    edges: Mapping[str, Edge]
    out_index: Mapping[tuple[str, str], tuple[str, ...]] = field(repr=False)
    in_index: Mapping[tuple[str, str], tuple[str, ...]] = field(repr=False)

    def __len__(self) -> int:
        return len(self.nodes)

    def node(self, v: str) -> Node:
        try:
            return self.nodes[v]
        except KeyError:
            raise KeyError(f"unknown node id {v!r}") from None

    def neighbors(self, v: str, label: str, direction: str = FORWARD) -> list[tuple[str, str]]:
        """``(edge id, other endpoint)`` pairs of ``v`` for one edge label."""
        if v not in self.nodes:
            raise KeyError(f"unknown node id {v!r}")
        if direction == FORWARD:
            return [(e, self.edges[e].dst) for e in self.out_index.get((v, label), ())]
        if direction == BACKWARD:
            return [(e, self.edges[e].src) for e in self.in_index.get((v, label), ())]
        raise ValueError(f"bad direction {direction!r}")

    def node_labels(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for n in self.nodes.values():
            counts[n.label] = counts.get(n.label, 0) + 1
        return counts

    def edge_labels(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for e in self.edges.values():
            counts[e.label] = counts.get(e.label, 0) + 1
        return counts


def neighbors(g: PropertyGraph, v: str, label: str, direction: str = FORWARD) -> list[tuple[str, str]]:
    return g.neighbors(v, label, direction)


class GraphBuilder:
    """Accumulates nodes and edges, then freezes them into a PropertyGraph."""

    def __init__(self) -> None:
        self._nodes: dict[str, Node] = {}
        self._edges: dict[str, Edge] = {}
        self._edge_lines: dict[str, int | None] = {}

    def add_node(self, id: str, label: str, attrs: Mapping[str, Value] | None = None,
                 line: int | None = None) -> None:
        if id in self._nodes:
            raise GraphFormatError(f"duplicate node id {id!r}", line)
        self._nodes[id] = Node(id, label, dict(attrs or {}))

    def add_edge(self, id: str, src: str, dst: str, label: str,
                 attrs: Mapping[str, Value] | None = None, line: int | None = None) -> None:
        if id in self._edges:
            raise GraphFormatError(f"duplicate edge id {id!r}", line)
        self._edges[id] = Edge(id, src, dst, label, dict(attrs or {}))
        self._edge_lines[id] = line

    def build(self) -> PropertyGraph:
        out_index: dict[tuple[str, str], list[str]] = {}
        in_index: dict[tuple[str, str], list[str]] = {}
        for e in self._edges.values():
            for end in (e.src, e.dst):
                if end not in self._nodes:
                    raise GraphFormatError(
                        f"edge {e.id!r} references unknown node {end!r}", self._edge_lines[e.id])
            out_index.setdefault((e.src, e.label), []).append(e.id)
            in_index.setdefault((e.dst, e.label), []).append(e.id)
        return PropertyGraph(
            nodes=dict(self._nodes),
            edges=dict(self._edges),
            out_index={k: tuple(v) for k, v in out_index.items()},
            in_index={k: tuple(v) for k, v in in_index.items()},
        )


# ---------------------------------------------------------------------------
# text format

_DECIMAL = r"-?\d+(?:\.\d+)?"
_ATTR_RE = re.compile(r'([^\s=]+)=("(?:[^"\\]|\\.)*"|' + _DECIMAL + r")(?=[ \t]|$)")
_DECIMAL_RE = re.compile(_DECIMAL + r"\Z")
_TOKEN_RE = re.compile(r"[^ \t]+")


def parse_decimal(text: str) -> Fraction:
    if not _DECIMAL_RE.match(text):
        raise ValueError(f"malformed decimal literal {text!r}")
    return Fraction(text)


def format_decimal(x: Fraction) -> str:
    """Exact decimal rendering; fails for rationals without a finite expansion."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    d = x.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        raise ValueError(f"{x} has no finite decimal expansion")
    places = max(twos, fives)
    scaled = abs(x.numerator) * 10**places // x.denominator
    digits = str(scaled).rjust(places + 1, "0")
    sign = "-" if x < 0 else ""
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


def _unescape(body: str) -> str:
    return re.sub(r"\\(.)", r"\1", body)


def _escape(text: str) -> str:
    if "\n" in text or "\r" in text:
        raise ValueError(f"string value {text!r} contains a line break and cannot be serialized")
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _parse_attrs(rest: str, lineno: int) -> dict[str, Value]:
    attrs: dict[str, Value] = {}
    pos = 0
    while True:
        while pos < len(rest) and rest[pos] in " \t":
            pos += 1
        if pos >= len(rest):
            return attrs
        m = _ATTR_RE.match(rest, pos)
        if m is None:
            bad = _TOKEN_RE.match(rest, pos).group(0)
            if "=" not in bad:
                raise GraphFormatError(f"malformed attribute {bad!r}", lineno)
            raise GraphFormatError(f"malformed value literal in {bad!r}", lineno)
        key, raw = m.group(1), m.group(2)
        if key in attrs:
            raise GraphFormatError(f"attribute {key!r} given twice", lineno)
        attrs[key] = _unescape(raw[1:-1]) if raw.startswith('"') else Fraction(raw)
        pos = m.end()


def _split_head(line: str, count: int, lineno: int) -> tuple[list[str], str]:
    head = []
    pos = 0
    for _ in range(count):
        m = _TOKEN_RE.search(line, pos)
        if m is None:
            raise GraphFormatError("truncated record", lineno)
        head.append(m.group(0))
        pos = m.end()
    return head, line[pos:]


def load_graph(text: str) -> PropertyGraph:
    """Parse a ``.pg`` document. Loading is all-or-nothing."""
    builder = GraphBuilder()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip(" \t\r")
        if not line or line.startswith("#"):
            continue
        kind = line.split(None, 1)[0]
        if kind == "N":
            (_, id, label), rest = _split_head(line, 3, lineno)
            builder.add_node(id, label, _parse_attrs(rest, lineno), lineno)
        elif kind == "E":
            (_, id, src, dst, label), rest = _split_head(line, 5, lineno)
            builder.add_edge(id, src, dst, label, _parse_attrs(rest, lineno), lineno)
        else:
            raise GraphFormatError(f"unknown record type {kind!r}", lineno)
    return builder.build()


def load_graph_file(path: str) -> PropertyGraph:
    with open(path, encoding="utf-8") as fh:
        return load_graph(fh.read())


def _format_attrs(attrs: Mapping[str, Value]) -> str:
    parts = []
    for k, v in attrs.items():
        parts.append(f"{k}={_escape(v) if isinstance(v, str) else format_decimal(v)}")
    return "".join(" " + p for p in parts)


def iter_lines(g: PropertyGraph) -> Iterator[str]:
    for n in g.nodes.values():
        yield f"N {n.id} {n.label}{_format_attrs(n.attrs)}\n"
    for e in g.edges.values():
        yield f"E {e.id} {e.src} {e.dst} {e.label}{_format_attrs(e.attrs)}\n"


def dump_graph(g: PropertyGraph) -> str:
    return "".join(iter_lines(g))


def graph_from_records(nodes: Iterable[tuple], edges: Iterable[tuple]) -> PropertyGraph:
    """Build a graph from ``(id, label, attrs)`` and ``(id, src, dst, label, attrs)`` tuples."""
    b = GraphBuilder()
    for rec in nodes:
        b.add_node(*rec)
    for rec in edges:
        b.add_edge(*rec)
    return b.build()


# ---------------------------------------------------------------------------
# paths


@dataclass(frozen=True)
class Path:
    """Alternating node/edge sequence.

    ``nodes`` has one more entry than ``edges`` (or both are empty); every
    edge is a ``(edge id, direction)`` pair.
    """

    nodes: tuple[str, ...]
    edges: tuple[tuple[str, str], ...] = ()

    def __len__(self) -> int:
        return len(self.edges)

    def elements(self) -> list[str]:
        out: list[str] = []
        for i, v in enumerate(self.nodes):
            if i:
                out.append(self.edges[i - 1][0])
            out.append(v)
        return out

    def is_well_formed(self, g: PropertyGraph) -> bool:
        if not self.nodes:
            return not self.edges
        if len(self.nodes) != len(self.edges) + 1:
            return False
        if any(v not in g.nodes for v in self.nodes):
            return False
        for i, (eid, direction) in enumerate(self.edges):
            e = g.edges.get(eid)
            if e is None:
                return False
            a, b = self.nodes[i], self.nodes[i + 1]
            if direction == FORWARD and (e.src, e.dst) != (a, b):
                return False
            if direction == BACKWARD and (e.src, e.dst) != (b, a):
                return False
            if direction not in (FORWARD, BACKWARD):
                return False
        return True

    def to_json(self) -> list:
        out: list = []
        for i, v in enumerate(self.nodes):
            if i:
                eid, direction = self.edges[i - 1]
                out.append({"edge": eid, "direction": direction})
            out.append(v)
        return out
