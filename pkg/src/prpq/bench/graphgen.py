"""Seeded synthetic property graphs."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from ..graph import GraphBuilder, PropertyGraph


@dataclass(frozen=True)
class GraphGenSpec:
    nodes: int = 1000
    degree: float = 4.0
    node_labels: int = 1
    edge_labels: int = 3
    numeric_attrs: tuple[tuple[str, int, int], ...] = (("x", 0, 100), ("y", 0, 100))
    string_attrs: tuple[tuple[str, tuple[str, ...]], ...] = ()
    edge_numeric_attrs: tuple[tuple[str, int, int], ...] = ()
    acyclic: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.nodes < 1 or self.node_labels < 1 or self.edge_labels < 1:
            raise ValueError("node count and label alphabets must be at least 1")
        if self.degree < 0:
            raise ValueError("degree must be non-negative")

    @classmethod
    def from_dict(cls, d: dict) -> "GraphGenSpec":
        d = dict(d)
        for key in ("numeric_attrs", "edge_numeric_attrs"):
            if key in d:
                d[key] = tuple(tuple(x) for x in d[key])
        if "string_attrs" in d:
            d["string_attrs"] = tuple((name, tuple(pool)) for name, pool in d["string_attrs"])
        return cls(**d)


# the LDBC01 shape at a tenth of its size
L0_LIKE = GraphGenSpec(nodes=18000, degree=4.17, node_labels=15, edge_labels=8)


def gen_graph(spec: GraphGenSpec) -> PropertyGraph:
    rng = random.Random(spec.seed)
    b = GraphBuilder()
    n = spec.nodes
    for i in range(n):
        attrs: dict = {name: Fraction(rng.randint(lo, hi)) for name, lo, hi in spec.numeric_attrs}
        for name, pool in spec.string_attrs:
            attrs[name] = rng.choice(pool)
        b.add_node(f"n{i}", f"V{rng.randrange(spec.node_labels)}", attrs)
    m = round(n * spec.degree)
    if spec.acyclic:
        m = min(m, n * (n - 1) // 2)
    for j in range(m):
        if spec.acyclic:
            src, dst = sorted(rng.sample(range(n), 2))
        elif n > 1:
            src, dst = rng.sample(range(n), 2)
        else:
            src = dst = 0
        attrs = {name: Fraction(rng.randint(lo, hi)) for name, lo, hi in spec.edge_numeric_attrs}
        b.add_edge(f"e{j}", f"n{src}", f"n{dst}", f"E{rng.randrange(spec.edge_labels)}", attrs)
    return b.build()
