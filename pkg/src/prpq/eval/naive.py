"""Accumulate-and-check evaluator: ground atoms pile up, the oracle runs at finals."""
from __future__ import annotations

from typing import Optional

from ..automaton import ParametricAutomaton
from ..constraints import BoundStore, ground, rewrite
from ..graph import PropertyGraph
from ..query import PrpqQuery
from .common import EvalOptions, QueryResult
from .search import Strategy, bfs


class AtomSetStrategy(Strategy):
    initial: frozenset = frozenset()

    def __init__(self, oracle):
        super().__init__(oracle)
        self._inst: dict = {}

    def extend(self, atoms, phi, attrs, cache_key):
        k = (id(phi), cache_key)
        new = self._inst.get(k, self)
        if new is self:
            new = self._inst[k] = ground(phi, attrs)
        if new is None:
            return None
        if not new or atoms.issuperset(new):
            return atoms
        return atoms.union(new)

    def accept(self, atoms):
        if not atoms:
            return {}
        store = BoundStore.from_atoms(n for a in atoms for n in rewrite(a))
        if not self.oracle.check(store):
            return None
        return self.oracle.model(store)

    def key(self, atoms):
        return atoms

    def audit(self, atoms):
        pass


def eval_naive(g: PropertyGraph, query: PrpqQuery, opts: Optional[EvalOptions] = None,
               aut: Optional[ParametricAutomaton] = None) -> QueryResult:
    return bfs(g, query, opts or EvalOptions(algorithm="naive"), AtomSetStrategy, aut)
