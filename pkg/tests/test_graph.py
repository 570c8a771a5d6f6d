import random
from fractions import Fraction

import pytest

from prpq.graph import (
    BACKWARD, FORWARD, GraphFormatError, Path, dump_graph, format_decimal, load_graph, neighbors,
    parse_decimal,
)
from helpers import random_graph


def test_load_small_graph():
    g = load_graph("N a Person age=25\nN b Person age=30\nE e1 a b follow since=2020")
    assert len(g.nodes) == 2 and len(g.edges) == 1
    assert list(g.out_index[("a", "follow")]) == ["e1"]
    assert g.nodes["a"].attrs["age"] == 25
    assert g.edges["e1"].attrs["since"] == Fraction(2020)


def test_social_counts(social):
    assert len(social.nodes) == 4
    assert len(social.edges) == 7
    assert sorted(n.attrs["age"] for n in social.nodes.values()) == [25, 28, 30, 32]


def test_neighbors_in_load_order(social):
    assert neighbors(social, "alice", "follow", FORWARD) == [("e1", "bob"), ("e5", "charlie")]
    assert neighbors(social, "alice", "favorite", FORWARD) == []
    assert neighbors(social, "bob", "follow", BACKWARD) == [("e1", "alice")]


def test_neighbors_unknown_node(social):
    with pytest.raises(KeyError):
        neighbors(social, "zed", "follow")


def test_decimals_are_exact():
    g = load_graph("N a X v=0.5 w=-3.25 s=\"hi \\\"there\\\" \\\\ ok\"")
    assert g.nodes["a"].attrs["v"] == Fraction(1, 2)
    assert g.nodes["a"].attrs["w"] == Fraction(-13, 4)
    assert g.nodes["a"].attrs["s"] == 'hi "there" \\ ok'
    assert parse_decimal("10.250") == Fraction(41, 4)
    assert format_decimal(Fraction(-1, 8)) == "-0.125"
    with pytest.raises(ValueError):
        format_decimal(Fraction(1, 3))


@pytest.mark.parametrize("text, line", [
    ("N a X\nN a Y", 2),
    ("N a X\nE e a b l", 2),
    ("N a X\n\nQ zzz", 3),
    ("N a X v=1.", 1),
    ("N a X v=abc", 1),
    ("N a X\nN b X\nE e a b l\nE e b a l", 4),
    ("N a", 1),
])
def test_errors_carry_line_numbers(text, line):
    with pytest.raises(GraphFormatError) as info:
        load_graph(text)
    assert info.value.line == line
    assert f"line {line}" in str(info.value)


def test_comments_and_tabs():
    g = load_graph("# hi\n\nN\ta\tX\t k=1\n  # indented comment\n")
    assert g.nodes["a"].attrs == {"k": 1}


def test_indices_cover_each_edge_once():
    g = random_graph(random.Random(3), 12, 40)
    for e in g.edges.values():
        outs = [k for k, ids in g.out_index.items() if e.id in ids]
        ins = [k for k, ids in g.in_index.items() if e.id in ids]
        assert outs == [(e.src, e.label)]
        assert ins == [(e.dst, e.label)]


def test_round_trip_is_byte_identical():
    g = random_graph(random.Random(5), 10, 25)
    text = dump_graph(g)
    g2 = load_graph(text)
    assert dump_graph(g2) == text
    assert g2 == g


def test_path_well_formedness(social):
    p = Path(("alice", "bob"), (("e1", FORWARD),))
    assert p.is_well_formed(social)
    assert not Path(("alice", "bob"), (("e1", BACKWARD),)).is_well_formed(social)
    assert Path(("bob", "alice"), (("e1", BACKWARD),)).is_well_formed(social)
    assert Path(("alice",)).is_well_formed(social)
    assert Path(()).is_well_formed(social)
    assert p.to_json() == ["alice", {"edge": "e1", "direction": "forward"}, "bob"]
