"""Feasibility and model extraction for bound stores.

The polyhedron given by the ``up``/``low`` bounds is decided by the simplex
kernel. An excluded value ``t != c`` only makes the system infeasible when
the whole polyhedron lies inside the hyperplane ``t = c``; a nonempty convex
set is never covered by finitely many hyperplanes unless it sits inside one
of them. Containment is tested by probing both open half-spaces.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Optional

from ..constraints import BoundStore, DeltaRational, LinTerm, NormAtom, LE, GE
from . import _kernel

_Z = Fraction(0)
_ONE = Fraction(1)


class OracleError(RuntimeError):
    """Base class for oracle failures."""


class _Problem:
    __slots__ = ("params", "n", "rows", "lower", "upper", "var_of")

    def __init__(self, store: BoundStore):
        terms = store.terms()
        params = sorted({p for t in terms for p, _ in t})
        col = {p: i for i, p in enumerate(params)}
        n = len(params)
        var_of: dict[LinTerm, int] = {}
        rows = []
        for t in terms:
            if len(t) == 1 and t[0][1] == 1:
                var_of[t] = col[t[0][0]]
                continue
            row = [_Z] * n
            for p, c in t:
                row[col[p]] = c
            var_of[t] = n + len(rows)
            rows.append(row)
        lower: list = [None] * (n + len(rows))
        upper: list = [None] * (n + len(rows))
        for t, b in store.low.items():
            lower[var_of[t]] = b
        for t, b in store.up.items():
            upper[var_of[t]] = b
        self.params = params
        self.n = n
        self.rows = rows
        self.lower = lower
        self.upper = upper
        self.var_of = var_of

    def solve(self, extra: Optional[tuple[int, str, tuple]] = None):
        lower, upper = self.lower, self.upper
        if extra is not None:
            j, op, b = extra
            if op == LE:
                upper = list(upper)
                if upper[j] is None or b < upper[j]:
                    upper[j] = b
            else:
                lower = list(lower)
                if lower[j] is None or b > lower[j]:
                    lower[j] = b
        return _kernel.solve(self.n, self.rows, lower, upper)


def _value(problem: _Problem, values, t: LinTerm):
    return values[problem.var_of[t]]


def _contained(problem: _Problem, values, t: LinTerm, c: Fraction) -> bool:
    """True when the polyhedron lies inside ``t = c``."""
    if tuple(_value(problem, values, t)) != (c, _Z):
        return False
    j = problem.var_of[t]
    if problem.solve((j, LE, (c, -_ONE)))[0]:
        return False
    if problem.solve((j, GE, (c, _ONE)))[0]:
        return False
    return True


def _solve_store(store: BoundStore):
    problem = _Problem(store)
    ok, values, _ = problem.solve()
    if not ok:
        return problem, None
    for t, cs in store.neq.items():
        for c in cs:
            if _contained(problem, values, t, c):
                return problem, None
    return problem, values


def check_feasible(store: BoundStore) -> bool:
    """Does some assignment (with a positive infinitesimal) satisfy the store?"""
    if not store:
        return True
    return _solve_store(store)[1] is not None


def _pick_eps(problem: _Problem, values, store: BoundStore) -> Fraction:
    eps = _ONE
    for j, v in enumerate(values):
        for bound, is_low in ((problem.lower[j], True), (problem.upper[j], False)):
            if bound is None:
                continue
            ds = (v[0] - bound[0]) if is_low else (bound[0] - v[0])
            de = (v[1] - bound[1]) if is_low else (bound[1] - v[1])
            # ds + de*eps >= 0 must hold
            if de < 0 and ds > 0:
                eps = min(eps, ds / -de)
    # steer clear of excluded values that the infinitesimal would land on
    hits = []
    for t, cs in store.neq.items():
        s, e = _value(problem, values, t)
        if e:
            hits.extend((c - s) / e for c in cs)
    while any(0 < h <= eps for h in hits):
        eps = min(h for h in hits if 0 < h <= eps) / 2
    return eps


def get_model(store: BoundStore, with_eps: bool = False):
    """A concrete rational assignment satisfying every atom of a feasible store.

    With ``with_eps`` the concrete value chosen for the infinitesimal is
    returned as well, as ``(model, eps)``.
    """
    if not store:
        return ({}, _ONE) if with_eps else {}
    problem, values = _solve_store(store)
    if values is None:
        raise OracleError("get_model called on an infeasible store")
    eps = _pick_eps(problem, values, store)
    mu = {p: values[i][0] + values[i][1] * eps for i, p in enumerate(problem.params)}
    for t, cs in sorted(store.neq.items()):
        s = sum((coef * mu[p] for p, coef in t), _Z)
        if s not in cs:
            continue
        c = s
        for op, bound in ((LE, DeltaRational(c, -_ONE)), (GE, DeltaRational(c, _ONE))):
            branch, _ = store.tighten(NormAtom(t, op, bound))
            if check_feasible(branch):
                return get_model(branch, with_eps)
        raise OracleError("no branch of a feasible disequality split is feasible")
    return (mu, eps) if with_eps else mu
