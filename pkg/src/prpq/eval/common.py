"""Shared pieces of the evaluators: options, results, search states, transitions."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, NamedTuple, Optional, Union

from ..automaton import ParametricAutomaton
from ..graph import BACKWARD, FORWARD, Path, PropertyGraph
from ..oracle import Oracle, make_oracle
from ..query import Constraint

ALGORITHMS = ("naive", "optimized", "bruteforce")
SEMANTICS = ("walk", "simple")
VISITED = ("paper", "store-digest")

CHECK_EVERY = 256


class EvalError(ValueError):
    pass


@dataclass
class EvalOptions:
    algorithm: str = "optimized"
    semantics: str = "walk"
    visited: str = "store-digest"
    timeout: Optional[float] = 10.0  # seconds; None disables
    walk_cap: int = 12  # bruteforce only: maximum number of edges
    oracle: Union[str, Oracle, None] = "builtin"
    audit: bool = False  # re-check every enqueued store (testing aid)

    def __post_init__(self):
        if self.visited == "store":
            self.visited = "store-digest"
        if self.algorithm not in ALGORITHMS:
            raise EvalError(f"unknown algorithm {self.algorithm!r}")
        if self.semantics not in SEMANTICS:
            raise EvalError(f"unknown path semantics {self.semantics!r}")
        if self.visited not in VISITED:
            raise EvalError(f"unknown visited mode {self.visited!r}")

    def make_oracle(self) -> Oracle:
        if isinstance(self.oracle, Oracle):
            return self.oracle
        return make_oracle(self.oracle)


@dataclass
class Stats:
    oracle_calls: int = 0
    states_expanded: int = 0
    states_enqueued: int = 0
    time_ms: float = 0.0
    timed_out: bool = False
    cap_exceeded: bool = False

    def to_json(self) -> dict:
        return {
            "oracle_calls": self.oracle_calls,
            "states_expanded": self.states_expanded,
            "states_enqueued": self.states_enqueued,
            "time_ms": round(self.time_ms, 3),
            "timed_out": self.timed_out,
        }


@dataclass
class QueryResult:
    answer: Optional[bool]  # None when the run timed out
    path: Optional[Path] = None
    model: Optional[dict[str, Fraction]] = None
    stats: Stats = field(default_factory=Stats)

    @property
    def timed_out(self) -> bool:
        return self.stats.timed_out

    def to_json(self) -> dict[str, Any]:
        if self.stats.timed_out:
            answer: Any = "timeout"
        else:
            answer = bool(self.answer)
        model = None
        if self.model is not None:
            model = {p: {"num": v.numerator, "den": v.denominator} for p, v in sorted(self.model.items())}
        return {
            "answer": answer,
            "path": self.path.to_json() if self.path is not None else None,
            "model": model,
            "stats": self.stats.to_json(),
        }


class SearchState:
    """A BFS node; ``payload`` is the accumulated atom set or a bound store."""

    __slots__ = ("v", "q", "e", "direction", "prev", "payload")

    def __init__(self, v, q, e, direction, prev, payload):
        self.v = v
        self.q = q
        self.e = e
        self.direction = direction
        self.prev = prev
        self.payload = payload

    def __repr__(self) -> str:
        return f"SearchState(v={self.v!r}, q={self.q}, e={self.e!r})"


MacroState = SearchState


class EdgeStep(NamedTuple):
    node: str
    edge: str
    state: int
    constraint: Constraint
    direction: str


def trans_node(v: str, q: int, g: PropertyGraph, aut: ParametricAutomaton) -> list[tuple[int, Constraint]]:
    label = g.nodes[v].label
    return [(t.dst, t.constraint) for t in aut.outgoing(q) if t.label == label and not t.inverse]


def trans_edge(v: str, q: int, g: PropertyGraph, aut: ParametricAutomaton) -> list[EdgeStep]:
    out = []
    for t in aut.outgoing(q):
        if t.inverse:
            for eid in g.in_index.get((v, t.label), ()):
                out.append(EdgeStep(g.edges[eid].src, eid, t.dst, t.constraint, BACKWARD))
        else:
            for eid in g.out_index.get((v, t.label), ()):
                out.append(EdgeStep(g.edges[eid].dst, eid, t.dst, t.constraint, FORWARD))
    return out


def get_path(state: SearchState) -> Path:
    nodes = []
    edges = []
    s: Optional[SearchState] = state
    while s is not None:
        nodes.append(s.v)
        if s.e is not None:
            edges.append((s.e, s.direction))
        s = s.prev
    nodes.reverse()
    edges.reverse()
    return Path(tuple(nodes), tuple(edges))


def on_path(state: Optional[SearchState], v: str) -> bool:
    while state is not None:
        if state.v == v:
            return True
        state = state.prev
    return False


def path_nodes(state: Optional[SearchState]) -> frozenset:
    out = []
    while state is not None:
        out.append(state.v)
        state = state.prev
    return frozenset(out)


class Clock:
    """Deadline bookkeeping; the clock is consulted every ``CHECK_EVERY`` ticks."""

    def __init__(self, timeout: Optional[float]):
        self.start = time.perf_counter()
        self.deadline = None if timeout is None else self.start + timeout
        self.ticks = 0

    def expired(self) -> bool:
        self.ticks += 1
        if self.deadline is None or self.ticks % CHECK_EVERY:
            return False
        return time.perf_counter() > self.deadline

    def elapsed_ms(self) -> float:
        return (time.perf_counter() - self.start) * 1000.0


def check_start(g: PropertyGraph, start: str) -> None:
    if start not in g.nodes:
        raise EvalError(f"unknown start node {start!r}")
