"""Generators and independent reference checks shared by the tests."""
from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Iterator, Mapping, Optional, Sequence

from prpq.constraints import BoundStore, DeltaRational, NormAtom, norm
from prpq.graph import GraphBuilder, PropertyGraph
from prpq.query import (
    Alt, Atom, Concat, Constraint, Epsilon, Inverse, LinCmp, LinExpr, Opt, Plus, Star, StringEq,
    Var,
)

F = Fraction

# ---------------------------------------------------------------------------
# random bound stores


def random_atoms(rng: random.Random, params: int = 3, atoms: int = 8, neqs: int = 3,
                 coef: int = 5, bound: int = 20, strict: bool = True,
                 canonical: bool = False) -> list[NormAtom]:
    """``canonical`` limits ε offsets to the shapes strict comparisons produce."""
    names = [f"p{i}" for i in range(rng.randint(1, params))]
    out: list[NormAtom] = []
    n_neq = rng.randint(0, neqs)
    for i in range(rng.randint(1, atoms)):
        coeffs = {}
        while not any(coeffs.values()):
            k = rng.randint(1, len(names))
            coeffs = {p: rng.randint(-coef, coef) for p in rng.sample(names, k)}
        c = rng.randint(-bound, bound)
        if i < n_neq:
            out.append(norm(coeffs, "!=", c))
        else:
            op = rng.choice(("<=", ">="))
            eps = rng.choice((-1, 0, 1)) if strict else 0
            if canonical:
                eps = -abs(eps) if op == "<=" else abs(eps)
            out.append(norm(coeffs, op, c, eps))
    return out


def store_of(atoms: Sequence[NormAtom]) -> BoundStore:
    return BoundStore.from_atoms(atoms)


def model_satisfies_at(atoms: Sequence[NormAtom], mu: Mapping[str, Fraction], eps: Fraction) -> bool:
    return all(a.holds(mu, eps) for a in atoms)


# ---------------------------------------------------------------------------
# strict systems (before the ε rewrite)

OPS = ("<", ">", "<=", ">=", "=", "!=")


def random_strict_system(rng: random.Random, params: int = 3, atoms: int = 8):
    names = [f"p{i}" for i in range(rng.randint(1, params))]
    out = []
    for _ in range(rng.randint(1, atoms)):
        coeffs = {}
        while not any(coeffs.values()):
            coeffs = {p: F(rng.randint(-4, 4)) for p in rng.sample(names, rng.randint(1, len(names)))}
        op = rng.choice(OPS if rng.random() < 0.2 else OPS[:4])
        out.append((coeffs, op, F(rng.randint(-10, 10))))
    return out


# ---------------------------------------------------------------------------
# random ASTs

LABELS = ("a", "b", "Person", "follow")
ATTRS = ("age", "since", "x")
PARAMS = ("p", "q", "r")
DECIMALS = (F(1), F(2), F(-1), F(-3), F(1, 2), F(-5, 4), F(0), F(7), F(25, 10))


def random_linexp(rng: random.Random) -> LinExpr:
    terms = []
    for _ in range(rng.randint(1, 3)):
        r = rng.random()
        coef = rng.choice(DECIMALS)
        if r < 0.25:
            terms.append((coef, None))
        elif r < 0.6:
            terms.append((coef, Var(rng.choice(ATTRS), False)))
        else:
            terms.append((coef, Var(rng.choice(PARAMS), True)))
    return LinExpr(tuple(terms))


def random_constraint(rng: random.Random, max_atoms: int = 3) -> Constraint:
    atoms = []
    for _ in range(rng.randint(0, max_atoms)):
        if rng.random() < 0.2:
            atoms.append(StringEq(rng.choice(("name", "kind")), rng.choice(("x", 'q"t', "a\\b", ""))))
        else:
            atoms.append(LinCmp(random_linexp(rng), rng.choice(OPS), random_linexp(rng)))
    return Constraint(tuple(atoms))


def random_ast(rng: random.Random, depth: int = 4, constraints: bool = True):
    if depth <= 0 or rng.random() < 0.3:
        if rng.random() < 0.05:
            return Epsilon()
        phi = random_constraint(rng) if constraints else Constraint()
        return Atom(rng.choice(LABELS), phi)
    kind = rng.choice(("concat", "alt", "star", "plus", "opt", "inv"))
    if kind in ("concat", "alt"):
        cls = Concat if kind == "concat" else Alt
        return cls(random_ast(rng, depth - 1, constraints), random_ast(rng, depth - 1, constraints))
    cls = {"star": Star, "plus": Plus, "opt": Opt, "inv": Inverse}[kind]
    return cls(random_ast(rng, depth - 1, constraints))


# ---------------------------------------------------------------------------
# reference language semantics


def _push_inverse(ast, inv: bool = False):
    """Rewrite to an inverse-free tree whose atoms carry their direction."""
    if isinstance(ast, Atom):
        return ("atom", ast.label, ast.constraint, inv)
    if isinstance(ast, Epsilon):
        return ("eps",)
    if isinstance(ast, Inverse):
        return _push_inverse(ast.child, not inv)
    if isinstance(ast, Concat):
        a, b = _push_inverse(ast.left, inv), _push_inverse(ast.right, inv)
        return ("cat", b, a) if inv else ("cat", a, b)
    if isinstance(ast, Alt):
        return ("alt", _push_inverse(ast.left, inv), _push_inverse(ast.right, inv))
    if isinstance(ast, Star):
        return ("star", _push_inverse(ast.child, inv))
    if isinstance(ast, Plus):
        c = _push_inverse(ast.child, inv)
        return ("cat", c, ("star", c))
    if isinstance(ast, Opt):
        return ("alt", _push_inverse(ast.child, inv), ("eps",))
    raise TypeError(ast)


def _derive(node, seq, i) -> Iterator[tuple[int, tuple]]:
    kind = node[0]
    if kind == "eps":
        yield i, ()
    elif kind == "atom":
        _, label, phi, inv = node
        if i < len(seq) and seq[i][0] == label and bool(seq[i][1]) == inv:
            yield i + 1, ((phi, seq[i][2]),)
    elif kind == "cat":
        for k, c1 in _derive(node[1], seq, i):
            for j, c2 in _derive(node[2], seq, k):
                yield j, c1 + c2
    elif kind == "alt":
        yield from _derive(node[1], seq, i)
        yield from _derive(node[2], seq, i)
    elif kind == "star":
        yield i, ()
        for k, c1 in _derive(node[1], seq, i):
            if k > i:
                for j, c2 in _derive(node, seq, k):
                    yield j, c1 + c2


def ground_linear(phi: Constraint, attrs: Mapping) -> Optional[list]:
    """``[(coeffs, op, const)]`` over parameters, or ``None`` when ``phi`` fails outright."""
    out = []
    for a in phi.atoms:
        if isinstance(a, StringEq):
            v = attrs.get(a.attr)
            if not isinstance(v, str) or v != a.value:
                return None
            continue
        coeffs: dict[str, Fraction] = {}
        const = F(0)
        for expr, sign in ((a.left, 1), (a.right, -1)):
            for c, var in expr.terms:
                c = c * sign
                if var is None:
                    const -= c
                elif var.param:
                    coeffs[var.name] = coeffs.get(var.name, F(0)) + c
                else:
                    v = attrs.get(var.name)
                    if v is None or isinstance(v, str):
                        return None
                    const -= c * v
        coeffs = {p: c for p, c in coeffs.items() if c}
        if not coeffs:
            ok = {"<": 0 < const, ">": 0 > const, "<=": 0 <= const, ">=": 0 >= const,
                  "=": const == 0, "!=": const != 0}[a.op]
            if not ok:
                return None
            continue
        out.append((coeffs, a.op, const))
    return out


def reference_accepts(ast, seq) -> bool:
    """Membership by enumerating derivations, feasibility by Fourier-Motzkin."""
    from prpq.oracle import fm_feasible_strict

    tree = _push_inverse(ast)
    seen = set()
    for j, cons in _derive(tree, seq, 0):
        if j != len(seq):
            continue
        key = tuple((id(phi), id(attrs)) for phi, attrs in cons)
        if key in seen:
            continue
        seen.add(key)
        system = []
        for phi, attrs in cons:
            g = ground_linear(phi, attrs)
            if g is None:
                break
            system.extend(g)
        else:
            if fm_feasible_strict(system):
                return True
    return False


# ---------------------------------------------------------------------------
# small graphs


def random_graph(rng: random.Random, nodes: int, edges: int, *, acyclic: bool = False,
                 node_labels=("A", "B"), edge_labels=("a", "b", "c"), attr_range=(0, 10)) -> PropertyGraph:
    b = GraphBuilder()
    lo, hi = attr_range
    for i in range(nodes):
        b.add_node(f"n{i}", rng.choice(node_labels),
                   {"x": F(rng.randint(lo, hi)), "y": F(rng.randint(lo, hi))})
    for j in range(edges):
        if nodes < 2:
            break
        u, v = rng.sample(range(nodes), 2)
        if acyclic and u > v:
            u, v = v, u
        b.add_edge(f"e{j}", f"n{u}", f"n{v}", rng.choice(edge_labels), {"w": F(rng.randint(lo, hi))})
    return b.build()


def cnf_satisfiable(clauses: Sequence[Sequence[int]]) -> bool:
    nvars = max((abs(l) for c in clauses for l in c), default=0)
    for bits in itertools.product((False, True), repeat=nvars):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in clauses):
            return True
    return False


def random_cnf(rng: random.Random, max_vars: int = 6, max_clauses: int = 8) -> list[list[int]]:
    n = rng.randint(1, max_vars)
    out = []
    for _ in range(rng.randint(1, max_clauses)):
        k = rng.randint(1, min(3, n))
        out.append([v if rng.random() < 0.5 else -v for v in rng.sample(range(1, n + 1), k)])
    return out


# ---------------------------------------------------------------------------
# queries shaped for random_graph

NODE_PHIS = ("", "?p <= x", "?q >= y", "?p <= x && ?q >= x", "?q - ?p <= 2", "?p + ?q < x + y",
             "?p != x", "x > 3", "?p = y", "2*?p - ?q >= x - 4", "?r > x && ?r < y")
EDGE_PHIS = ("", "", "w > 2", "?p <= w", "?q - w >= 1", "?r = w", "?r != w")


def _step(rng: random.Random, node_labels=("A", "B")) -> str:
    label = rng.choice(("a", "b", "c"))
    edge = f"[{label}{', ' + e if (e := rng.choice(EDGE_PHIS)) else ''}]"
    if rng.random() < 0.2:
        edge = "^" + edge
    nl = rng.choice(node_labels)
    n = rng.choice(NODE_PHIS)
    return f"{edge} / [{nl}{', ' + n if n else ''}]"


def _regex(rng: random.Random, depth: int, node_labels=("A", "B")) -> str:
    if depth <= 0 or rng.random() < 0.35:
        return _step(rng, node_labels)
    kind = rng.choice(("concat", "concat", "alt", "star", "plus", "opt"))
    if kind == "concat":
        return f"{_regex(rng, depth - 1, node_labels)} / {_regex(rng, depth - 1, node_labels)}"
    if kind == "alt":
        return f"({_regex(rng, depth - 1, node_labels)} | {_regex(rng, depth - 1, node_labels)})"
    suffix = {"star": "*", "plus": "+", "opt": "?"}[kind]
    return f"({_regex(rng, depth - 1, node_labels)}){suffix}"


def random_query_text(rng: random.Random, g: PropertyGraph, depth: int = 3, node_labels=("A", "B")) -> str:
    sources = sorted({e.src for e in g.edges.values()})
    start = rng.choice(sources if sources and rng.random() < 0.8 else sorted(g.nodes))
    label = g.nodes[start].label
    first = rng.choice(NODE_PHIS)
    head = f"[{label}{', ' + first if first else ''}]"
    return f"FROM {start} MATCH {head} / {_regex(rng, depth, node_labels)}"
