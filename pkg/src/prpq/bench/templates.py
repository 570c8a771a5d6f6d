"""Query templates: regular skeletons woven with data constraints.

Every edge atom ``a`` of a skeleton becomes ``[a] / N`` where ``N`` is a node
atom carrying the data constraint, and the whole pattern is prefixed with a
first node atom ``N0`` (for D4 and D5 that one pins ``?p`` and ``?q`` to the
start node's attributes).
"""
from __future__ import annotations

import random
import re
import statistics
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from ..graph import PropertyGraph, format_decimal
from ..query import Alt, Atom, Concat, Opt, Plus, Pregex, Star, parse_pattern

K = 3

SKELETONS = {
    "Q1": "(a1 | a2 | a3)*",
    "Q2": "a*",
    "Q3": "a1 / a2 / a3",
    "Q4": "a* / b",
    "Q5": "a1 | a2 | a3",
    "Q6": "a+",
    "Q7": "a1? / a2? / a3?",
    "Q8": "a / (b1 | b2 | b3)",
    "Q9": "a1 / a2? / a3?",
    "Q10": "(a / b*) | c",
    "Q11": "a* / b?",
    "Q12": "a / b / c*",
}

CATEGORY = {q: "frequent" for q in ("Q1", "Q2", "Q3", "Q4")}
CATEGORY.update({q: "occasional" for q in ("Q5", "Q6", "Q7")})
CATEGORY.update({q: "rare" for q in ("Q8", "Q9", "Q10", "Q11", "Q12")})

Q_TEMPLATES = tuple(SKELETONS)
D_TEMPLATES = ("D1", "D2", "D3", "D4", "D5")
COMPLEX = ("D3", "D4", "D5")


class TemplateError(ValueError):
    pass


@dataclass(frozen=True)
class TemplateId:
    q: str
    d: str
    k: int = K

    def __post_init__(self):
        if self.q not in SKELETONS or self.d not in D_TEMPLATES:
            raise TemplateError(f"unknown template {self.q}/{self.d}")
        if self.k != K:
            raise TemplateError("only k=3 is supported")

    @classmethod
    def parse(cls, text: str) -> "TemplateId":
        q, _, d = text.replace("/", ":").partition(":")
        return cls(q.strip().upper(), d.strip().upper())

    def __str__(self) -> str:
        return f"{self.q}:{self.d}"

    @property
    def category(self) -> str:
        return CATEGORY[self.q]


def _skeleton(q: str) -> Pregex:
    # placeholders are bare words; wrap them as atoms for the parser
    return parse_pattern(re.sub(r"\b([a-c]\d?)\b", r"[\1]", SKELETONS[q]))


def _placeholders(ast: Pregex, out: list) -> list:
    if isinstance(ast, Atom):
        if ast.label not in out:
            out.append(ast.label)
    elif isinstance(ast, (Concat, Alt)):
        _placeholders(ast.left, out)
        _placeholders(ast.right, out)
    else:
        _placeholders(ast.child, out)
    return out


def _weave(ast: Pregex, labels: dict, node: str) -> str:
    if isinstance(ast, Atom):
        return f"[{labels[ast.label]}] / {node}"
    if isinstance(ast, Concat):
        return f"{_weave(ast.left, labels, node)} / {_weave(ast.right, labels, node)}"
    if isinstance(ast, Alt):
        return f"({_weave(ast.left, labels, node)} | {_weave(ast.right, labels, node)})"
    suffix = {Star: "*", Plus: "+", Opt: "?"}[type(ast)]
    return f"({_weave(ast.child, labels, node)}){suffix}"


def _threshold(values: list[Fraction], rng: random.Random) -> Fraction:
    if len(values) < 2:
        return Fraction(1)
    q1, _, q3 = statistics.quantiles(values, n=4)
    # thresholds are widths: anywhere from 1 up to the interquartile range
    return Fraction(rng.randint(1, max(1, int(q3 - q1))))


def data_constraints(d: str, attr1: str, attr2: str, c: Fraction, c1: Fraction, c2: Fraction) -> tuple[str, str]:
    """(first node constraint, constraint for every later node)."""
    c, c1, c2 = (format_decimal(x) for x in (c, c1, c2))
    if d == "D1":
        body = f"?p - {attr1} <= {c} && {attr1} - ?p <= {c}"
        return body, body
    if d == "D2":
        body = f"?p <= {attr1} && ?q >= {attr1}"
        return body, body
    if d == "D3":
        body = f"?p <= {attr1} && ?q >= {attr1} && ?q - ?p <= {c}"
        return body, body
    pin = f"?p = {attr1} && ?q = {attr2}"
    if d == "D4":
        return pin, f"0.5*?p + {c1} <= {attr1} && ?q - {attr2} <= {c2} && {attr2} - ?q <= {c2}"
    if d == "D5":
        return pin, (
            f"?p - {attr1} + ?q - {attr2} <= {c} && {attr1} - ?q + ?p - {attr2} <= {c}"
            f" && {attr1} - ?q + {attr2} - ?p <= {c} && ?q - {attr1} + {attr2} - ?p <= {c}"
        )
    raise TemplateError(f"unknown data template {d!r}")


def top_edge_labels(g: PropertyGraph) -> list[str]:
    counts = g.edge_labels()
    return sorted(counts, key=lambda l: (-counts[l], l))


def instantiate_template(t: TemplateId, g: PropertyGraph, seed: int, start: Optional[str] = None) -> str:
    """Concrete query text for template ``t`` on ``g``; deterministic in ``seed``."""
    rng = random.Random(f"{t}:{seed}")
    skel = _skeleton(t.q)
    holders = _placeholders(skel, [])
    top = top_edge_labels(g)
    need = min(len(holders), t.k)
    if len(top) < need:
        raise TemplateError(f"{t.q} needs {need} edge labels, graph has {len(top)}")
    pool = top[: max(t.k, len(holders))]
    chosen = rng.sample(pool, min(len(pool), len(holders)))
    labels = {h: chosen[i % len(chosen)] for i, h in enumerate(holders)}

    node_ids = list(g.nodes)
    if start is None:
        start = node_ids[rng.randrange(len(node_ids))]
    node = g.nodes[start]
    numeric = sorted(k for k, v in node.attrs.items() if not isinstance(v, str))
    if not numeric:
        raise TemplateError(f"start node {start!r} has no numeric attribute")
    attr1 = numeric[0]
    attr2 = numeric[1] if len(numeric) > 1 else numeric[0]
    values = [n.attrs[attr1] for n in g.nodes.values() if not isinstance(n.attrs.get(attr1, ""), str)]
    c, c1, c2 = (_threshold(values, rng) for _ in range(3))

    first, rest = data_constraints(t.d, attr1, attr2, c, c1, c2)
    lv = node.label
    n0 = f"[{lv}, {first}]"
    nn = f"[{lv}, {rest}]"
    return f"FROM {start} MATCH {n0} / {_weave(skel, labels, nn)}"
