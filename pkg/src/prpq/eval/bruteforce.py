"""Exhaustive reference evaluator for small graphs.

Every walk (or simple path) from the start node up to the length cap is
paired with every automaton run over it; a pair is an answer when the
collected constraints are feasible according to Fourier-Motzkin.
"""
from __future__ import annotations

from typing import Optional

from ..automaton import ParametricAutomaton, compile_pattern
from ..constraints import BoundStore, ground, rewrite
from ..graph import Path, PropertyGraph
from ..oracle import fm_feasible, get_model
from ..query import PrpqQuery
from .common import (
    Clock, EvalOptions, QueryResult, SearchState, Stats, check_start, get_path, on_path,
    trans_edge, trans_node,
)


class _Timeout(Exception):
    pass


class _Found(Exception):
    def __init__(self, state, model):
        self.state = state
        self.model = model


def eval_bruteforce(g: PropertyGraph, query: PrpqQuery, opts: Optional[EvalOptions] = None,
                    aut: Optional[ParametricAutomaton] = None) -> QueryResult:
    opts = opts or EvalOptions(algorithm="bruteforce")
    check_start(g, query.start)
    clock = Clock(opts.timeout)
    stats = Stats()
    if aut is None:
        aut = compile_pattern(query.pattern)
    start = query.start
    if aut.accepts_empty:
        stats.time_ms = clock.elapsed_ms()
        return QueryResult(True, Path((start,)), {}, stats)

    simple = opts.semantics == "simple"
    cap = opts.walk_cap
    memo: dict[frozenset, bool] = {}

    def feasible(atoms: frozenset) -> bool:
        hit = memo.get(atoms)
        if hit is None:
            stats.oracle_calls += 1
            hit = memo[atoms] = fm_feasible([n for a in atoms for n in rewrite(a)])
        return hit

    def visit(s: SearchState, atoms: frozenset, depth: int) -> None:
        if clock.expired():
            raise _Timeout
        stats.states_expanded += 1
        if s.q in aut.finals and feasible(atoms):
            store = BoundStore.from_atoms(n for a in atoms for n in rewrite(a))
            raise _Found(s, get_model(store))
        steps = trans_edge(s.v, s.q, g, aut)
        if depth >= cap:
            if steps:
                stats.cap_exceeded = True
            return
        for step in steps:
            if simple and on_path(s, step.node):
                continue
            on_edge = ground(step.constraint, g.edges[step.edge].attrs)
            if on_edge is None:
                continue
            for q2, phi in trans_node(step.node, step.state, g, aut):
                on_node = ground(phi, g.nodes[step.node].attrs)
                if on_node is None:
                    continue
                ns = SearchState(step.node, q2, step.edge, step.direction, s, None)
                stats.states_enqueued += 1
                visit(ns, atoms | frozenset(on_edge) | frozenset(on_node), depth + 1)

    try:
        for q1, phi in trans_node(start, aut.initial, g, aut):
            atoms = ground(phi, g.nodes[start].attrs)
            if atoms is None:
                continue
            stats.states_enqueued += 1
            visit(SearchState(start, q1, None, None, None, None), frozenset(atoms), 0)
    except _Found as hit:
        stats.time_ms = clock.elapsed_ms()
        return QueryResult(True, get_path(hit.state), hit.model, stats)
    except _Timeout:
        stats.timed_out = True
        stats.time_ms = clock.elapsed_ms()
        return QueryResult(None, stats=stats)
    stats.time_ms = clock.elapsed_ms()
    return QueryResult(False, stats=stats)
