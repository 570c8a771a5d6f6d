"""3-SAT instances as query evaluation problems.

Clause ``i`` is matched at node ``v_i`` of a chain; each literal becomes a
node atom over the shared parameter of its variable (``?x != 0`` for a
positive literal, ``?x = 0`` for a negative one). The query is satisfiable
exactly when the formula is.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from ..graph import GraphBuilder, PropertyGraph
from ..query import PrpqQuery, parse_query


class CnfError(ValueError):
    pass


def parse_dimacs(text: str) -> tuple[int, list[list[int]]]:
    """``(variable count, clauses)`` from DIMACS CNF text."""
    nvars = 0
    clauses: list[list[int]] = []
    current: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise CnfError(f"line {lineno}: bad problem line {line!r}")
            nvars = int(parts[2])
            continue
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise CnfError(f"line {lineno}: bad literal {tok!r}") from None
            if lit == 0:
                clauses.append(current)
                current = []
            else:
                current.append(lit)
                nvars = max(nvars, abs(lit))
    if current:
        clauses.append(current)
    return nvars, clauses


def format_dimacs(clauses: Sequence[Sequence[int]], nvars: int | None = None) -> str:
    if nvars is None:
        nvars = max((abs(l) for c in clauses for l in c), default=0)
    lines = [f"p cnf {nvars} {len(clauses)}"]
    lines += [" ".join(str(l) for l in c) + " 0" for c in clauses]
    return "\n".join(lines) + "\n"


def _clause(lits: Iterable[int]) -> str:
    atoms = []
    for lit in lits:
        op = "!=" if lit > 0 else "="
        atoms.append(f"[v, ?x{abs(lit)} {op} 0]")
    body = " | ".join(atoms)
    return f"({body})" if len(atoms) > 1 else body


def gen_3sat_text(cnf: Sequence[Sequence[int]]) -> tuple[PropertyGraph, str]:
    if not cnf:
        raise CnfError("need at least one clause")
    for c in cnf:
        if not c:
            raise CnfError("empty clause")
        if any(l == 0 for l in c):
            raise CnfError("literal 0 is not allowed")
    m = len(cnf)
    b = GraphBuilder()
    for i in range(1, m + 1):
        b.add_node(f"v{i}", "v", {"a": Fraction(1)})
    for i in range(1, m):
        b.add_edge(f"e{i}", f"v{i}", f"v{i + 1}", "e")
    pattern = " / [e] / ".join(_clause(c) for c in cnf)
    return b.build(), f"FROM v1 MATCH {pattern}"


def gen_3sat(cnf: Sequence[Sequence[int]]) -> tuple[PropertyGraph, PrpqQuery]:
    g, text = gen_3sat_text(cnf)
    return g, parse_query(text)
