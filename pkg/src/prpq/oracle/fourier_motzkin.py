"""Fourier-Motzkin elimination, used as an independent feasibility check.

Rows are ``sum(coeffs) <= bound`` (or ``<`` when strict) with delta-rational
bounds. Disequalities are split into their two strict half-spaces and every
combination of sides is tried.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from ..constraints import DeltaRational, NormAtom

MAX_VARS = 6
MAX_ROWS = 20000

_Z = Fraction(0)
_ZERO_D = DeltaRational(_Z, _Z)


class SizeGuardExceeded(ValueError):
    pass


# a row: (coeffs as sorted tuple of (var, coef)), bound DeltaRational, strict flag


def _row(coeffs: Mapping[str, Fraction], bound: DeltaRational, strict: bool):
    items = tuple(sorted((v, Fraction(c)) for v, c in coeffs.items() if c))
    if items:
        scale = abs(items[0][1])
        if scale != 1:
            items = tuple((v, c / scale) for v, c in items)
            bound = DeltaRational(bound[0] / scale, bound[1] / scale)
    return items, DeltaRational(*bound), strict


def _trivially_ok(bound: DeltaRational, strict: bool) -> bool:
    return bound > _ZERO_D if strict else bound >= _ZERO_D


def _dedupe(rows):
    best: dict = {}
    for coeffs, bound, strict in rows:
        cur = best.get(coeffs)
        if cur is None or bound < cur[0] or (bound == cur[0] and strict and not cur[1]):
            best[coeffs] = (bound, strict)
    return [(c, b, s) for c, (b, s) in best.items()]


def _eliminate(rows) -> bool:
    rows = list(rows)
    while True:
        live = []
        for coeffs, bound, strict in rows:
            if not coeffs:
                if not _trivially_ok(bound, strict):
                    return False
            else:
                live.append((coeffs, bound, strict))
        if not live:
            return True
        rows = _dedupe(live)
        if len(rows) > MAX_ROWS:
            raise SizeGuardExceeded("Fourier-Motzkin row blow-up")
        variables = sorted({v for coeffs, _, _ in rows for v, _ in coeffs})

        def cost(v):
            pos = sum(1 for c, _, _ in rows if dict(c).get(v, 0) > 0)
            neg = sum(1 for c, _, _ in rows if dict(c).get(v, 0) < 0)
            return pos * neg - pos - neg, v

        x = min(variables, key=cost)
        pos, neg, rest = [], [], []
        for coeffs, bound, strict in rows:
            d = dict(coeffs)
            a = d.get(x, _Z)
            if a > 0:
                pos.append((d, a, bound, strict))
            elif a < 0:
                neg.append((d, a, bound, strict))
            else:
                rest.append((coeffs, bound, strict))
        for (dp, ap, bp, sp), (dn, an, bn, sn) in itertools.product(pos, neg):
            combined: dict[str, Fraction] = {}
            for v, c in dp.items():
                combined[v] = combined.get(v, _Z) + c * -an
            for v, c in dn.items():
                combined[v] = combined.get(v, _Z) + c * ap
            combined.pop(x, None)
            bound = DeltaRational(bp[0] * -an + bn[0] * ap, bp[1] * -an + bn[1] * ap)
            rest.append(_row(combined, bound, sp or sn))
        rows = rest


def _system_feasible(rows, disequalities) -> bool:
    """``disequalities``: list of (coeffs, value, split_kind) tried both ways."""
    if not disequalities:
        return _eliminate(rows)
    for sides in itertools.product((0, 1), repeat=len(disequalities)):
        extra = []
        for (coeffs, value, delta), side in zip(disequalities, sides):
            if side == 0:  # t < value
                if delta:
                    extra.append(_row(coeffs, DeltaRational(value, Fraction(-1)), False))
                else:
                    extra.append(_row(coeffs, DeltaRational(value), True))
            else:  # t > value, i.e. -t < -value
                neg = {v: -c for v, c in coeffs.items()}
                if delta:
                    extra.append(_row(neg, DeltaRational(-value, Fraction(-1)), False))
                else:
                    extra.append(_row(neg, DeltaRational(-value), True))
        if _eliminate(list(rows) + extra):
            return True
    return False


def _check_size(names: Iterable[str]) -> None:
    if len(set(names)) > MAX_VARS:
        raise SizeGuardExceeded(f"more than {MAX_VARS} variables")


def fm_feasible(atoms: Sequence[NormAtom]) -> bool:
    """Feasibility of bound atoms, with delta-rational bounds kept symbolic."""
    rows = []
    diseq = []
    names = []
    for term, op, bound in atoms:
        coeffs = dict(term)
        names.extend(coeffs)
        if op == "<=":
            rows.append(_row(coeffs, bound, False))
        elif op == ">=":
            rows.append(_row({v: -c for v, c in coeffs.items()}, -bound, False))
        elif op == "!=":
            diseq.append((coeffs, bound[0], True))
        else:
            raise ValueError(f"unknown bound operator {op!r}")
    _check_size(names)
    return _system_feasible(rows, diseq)


def fm_feasible_strict(constraints: Iterable[tuple[Mapping[str, Fraction], str, Fraction]]) -> bool:
    """Feasibility of ``sum(coeffs) op const`` with strictness tracked explicitly.

    ``op`` ranges over ``< > <= >= = !=``; no infinitesimal is involved, so
    this decides the original strict system directly.
    """
    rows = []
    diseq = []
    names = []
    for coeffs, op, const in constraints:
        coeffs = {v: Fraction(c) for v, c in coeffs.items()}
        names.extend(coeffs)
        const = Fraction(const)
        neg = {v: -c for v, c in coeffs.items()}
        if op in ("<=", "<", "="):
            rows.append(_row(coeffs, DeltaRational(const), op == "<"))
        if op in (">=", ">", "="):
            rows.append(_row(neg, DeltaRational(-const), op == ">"))
        if op == "!=":
            diseq.append((coeffs, const, False))
        elif op not in ("<=", "<", "=", ">=", ">"):
            raise ValueError(f"unknown comparator {op!r}")
    _check_size(names)
    return _system_feasible(rows, diseq)
