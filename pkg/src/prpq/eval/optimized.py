"""Macro-state evaluator: bounds are tightened and checked at every step."""
from __future__ import annotations

from typing import Optional

from ..automaton import ParametricAutomaton
from ..constraints import BoundStore, instantiate
from ..graph import PropertyGraph
from ..oracle import check_feasible
from ..query import PrpqQuery
from .common import EvalOptions, QueryResult
from .search import Strategy, bfs


class StoreStrategy(Strategy):
    initial = BoundStore()

    def __init__(self, oracle):
        super().__init__(oracle)
        self._inst: dict = {}

    def extend(self, store, phi, attrs, cache_key):
        k = (id(phi), cache_key)
        atoms = self._inst.get(k, self)
        if atoms is self:
            atoms = self._inst[k] = instantiate(phi, attrs)
        if atoms is None:
            return None
        if not atoms:
            return store
        nxt, changed = store.tighten_all(atoms)
        if changed and not self.oracle.check(nxt):
            return None
        return nxt

    def accept(self, store):
        # stores are kept feasible on the way, so no re-check here
        return self.oracle.model(store)

    def key(self, store):
        return store.key()

    def audit(self, store):
        if not check_feasible(store):
            raise AssertionError(f"infeasible store enqueued: {store!r}")


def eval_optimized(g: PropertyGraph, query: PrpqQuery, opts: Optional[EvalOptions] = None,
                   aut: Optional[ParametricAutomaton] = None) -> QueryResult:
    return bfs(g, query, opts or EvalOptions(), StoreStrategy, aut)
