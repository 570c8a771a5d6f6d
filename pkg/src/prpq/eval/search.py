"""Breadth-first search over the product of the graph and the automaton.

Both the naive and the optimized evaluator share this skeleton; they differ
in the payload carried by a state and in when the oracle is consulted.
"""
from __future__ import annotations

from collections import deque
from typing import Callable, Optional

from ..automaton import ParametricAutomaton, compile_pattern
from ..graph import Path, PropertyGraph
from ..oracle import Oracle
from ..query import PrpqQuery
from .common import (
    Clock, EvalOptions, QueryResult, SearchState, Stats, check_start, get_path, on_path,
    path_nodes, trans_edge, trans_node,
)


class Strategy:
    """Payload handling plugged into :func:`bfs`."""

    initial: object

    def __init__(self, oracle):
        self.oracle = oracle

    def extend(self, payload, phi, attrs, cache_key):
        """New payload after crossing an element, or ``None`` to prune."""
        raise NotImplementedError

    def accept(self, payload) -> Optional[dict]:
        """Model when a final state with ``payload`` is accepted, else ``None``."""
        raise NotImplementedError

    def key(self, payload):
        raise NotImplementedError


def bfs(g: PropertyGraph, query: PrpqQuery, opts: EvalOptions,
        make_strategy: Callable[[object], Strategy],
        aut: Optional[ParametricAutomaton] = None) -> QueryResult:
    check_start(g, query.start)
    clock = Clock(opts.timeout)
    oracle = opts.make_oracle()
    owned = not isinstance(opts.oracle, Oracle)
    calls_before = oracle.calls
    stats = Stats()
    try:
        result = _run(g, query, opts, make_strategy(oracle), aut, clock, stats)
    finally:
        stats.oracle_calls = oracle.calls - calls_before
        stats.time_ms = clock.elapsed_ms()
        if owned:
            oracle.close()
    return result


def _run(g, query, opts, strat, aut, clock, stats) -> QueryResult:
    if aut is None:
        aut = compile_pattern(query.pattern)
    start = query.start
    finals = aut.finals
    if aut.accepts_empty:
        return QueryResult(True, Path((start,)), {}, stats)

    nodes, edges = g.nodes, g.edges
    simple = opts.semantics == "simple"
    edge_keyed = opts.visited == "paper"
    visited: set = set()
    queue: deque = deque()

    def success(state: SearchState, model: dict) -> QueryResult:
        return QueryResult(True, get_path(state), model, stats)

    def push(state: SearchState) -> None:
        if edge_keyed:
            k = (state.v, state.q, state.e)
        else:
            k = (state.v, state.q, strat.key(state.payload))
            if simple:
                k += (path_nodes(state),)
        if k in visited:
            return
        visited.add(k)
        if opts.audit:
            strat.audit(state.payload)
        queue.append(state)
        stats.states_enqueued += 1

    start_attrs = nodes[start].attrs
    for q1, phi in trans_node(start, aut.initial, g, aut):
        payload = strat.extend(strat.initial, phi, start_attrs, ("n", start))
        if payload is None:
            continue
        s = SearchState(start, q1, None, None, None, payload)
        if q1 in finals:
            model = strat.accept(payload)
            if model is not None:
                return success(s, model)
        push(s)

    while queue:
        if clock.expired():
            stats.timed_out = True
            return QueryResult(None, stats=stats)
        s = queue.popleft()
        stats.states_expanded += 1
        for step in trans_edge(s.v, s.q, g, aut):
            v2 = step.node
            if simple and on_path(s, v2):
                continue
            p1 = strat.extend(s.payload, step.constraint, edges[step.edge].attrs, ("e", step.edge))
            if p1 is None:
                continue
            attrs = nodes[v2].attrs
            for q2, phi in trans_node(v2, step.state, g, aut):
                p2 = strat.extend(p1, phi, attrs, ("n", v2))
                if p2 is None:
                    continue
                ns = SearchState(v2, q2, step.edge, step.direction, s, p2)
                if q2 in finals:
                    model = strat.accept(p2)
                    if model is not None:
                        return success(ns, model)
                push(ns)
    return QueryResult(False, stats=stats)
