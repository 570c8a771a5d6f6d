"""Query evaluation."""
from __future__ import annotations

from typing import Optional

from ..graph import PropertyGraph
from ..query import PrpqQuery
from .bruteforce import eval_bruteforce
from .common import (
    EdgeStep, EvalError, EvalOptions, MacroState, QueryResult, SearchState, Stats, get_path,
    trans_edge, trans_node,
)
from .naive import eval_naive
from .optimized import eval_optimized
from .verify import constraint_holds, verify_answer

_DISPATCH = {"naive": eval_naive, "optimized": eval_optimized, "bruteforce": eval_bruteforce}


def evaluate(g: PropertyGraph, query: PrpqQuery, opts: Optional[EvalOptions] = None) -> QueryResult:
    opts = opts or EvalOptions()
    return _DISPATCH[opts.algorithm](g, query, opts)


__all__ = [
    "EdgeStep", "EvalError", "EvalOptions", "MacroState", "QueryResult", "SearchState", "Stats",
    "constraint_holds", "eval_bruteforce", "eval_naive", "eval_optimized", "evaluate", "get_path",
    "trans_edge", "trans_node", "verify_answer",
]
