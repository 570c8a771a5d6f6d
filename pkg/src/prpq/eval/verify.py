"""Independent check of a returned witness.

Constraints are evaluated straight from the query AST with the model plugged
in, so none of the instantiation, rewriting, or oracle code is involved.
"""
from __future__ import annotations

import operator
from fractions import Fraction
from typing import Mapping, Optional

from ..automaton import compile_pattern
from ..graph import BACKWARD, Path, PropertyGraph
from ..query import Constraint, LinCmp, PrpqQuery, StringEq

_OPS = {
    "<": operator.lt, ">": operator.gt, "<=": operator.le, ">=": operator.ge,
    "=": operator.eq, "!=": operator.ne,
}


def constraint_holds(phi: Constraint, attrs: Mapping, model: Mapping[str, Fraction]) -> bool:
    for atom in phi.atoms:
        if isinstance(atom, StringEq):
            v = attrs.get(atom.attr)
            if not isinstance(v, str) or v != atom.value:
                return False
            continue
        assert isinstance(atom, LinCmp)
        total = Fraction(0)
        params: dict[str, Fraction] = {}
        for expr, sign in ((atom.left, 1), (atom.right, -1)):
            for coef, var in expr.terms:
                coef = coef * sign
                if var is None:
                    total += coef
                elif var.param:
                    params[var.name] = params.get(var.name, 0) + coef
                else:
                    v = attrs.get(var.name)
                    if v is None or isinstance(v, str):
                        return False
                    total += coef * v
        for name, coef in params.items():
            if not coef:
                continue
            if name not in model:
                return False
            total += coef * model[name]
        if not _OPS[atom.op](total, 0):
            return False
    return True


def verify_answer(g: PropertyGraph, query: PrpqQuery, path: Optional[Path],
                  model: Optional[Mapping[str, Fraction]], semantics: str = "walk") -> bool:
    if path is None or model is None:
        return False
    if not path.nodes or path.nodes[0] != query.start or not path.is_well_formed(g):
        return False
    if semantics == "simple" and len(set(path.nodes)) != len(path.nodes):
        return False
    aut = compile_pattern(query.pattern)
    if not path.edges and aut.initial in aut.finals:
        return True

    current = {aut.initial}
    for i, v in enumerate(path.nodes):
        if i:
            eid, direction = path.edges[i - 1]
            e = g.edges[eid]
            inverse = direction == BACKWARD
            current = {
                t.dst for q in current for t in aut.outgoing(q)
                if t.label == e.label and t.inverse == inverse
                and constraint_holds(t.constraint, e.attrs, model)
            }
        node = g.nodes[v]
        current = {
            t.dst for q in current for t in aut.outgoing(q)
            if t.label == node.label and not t.inverse
            and constraint_holds(t.constraint, node.attrs, model)
        }
        if not current:
            return False
    return bool(current & aut.finals)
