import random
from fractions import Fraction

from hypothesis import given, strategies as st

from prpq.constraints import (
    BoundStore, DeltaRational, LinAtom, NormAtom, canonical_atom, digest, ground, instantiate, norm,
    rewrite, tighten,
)
from prpq.oracle import fm_feasible, fm_feasible_strict
from prpq.query import parse_pattern
from helpers import random_atoms, random_strict_system

F = Fraction
P = (("p", F(1)),)


def phi(text):
    return parse_pattern(f"[x, {text}]").constraint


def test_delta_rational_order():
    assert DeltaRational(F(5), F(-1)) < DeltaRational(F(5)) < DeltaRational(F(5), F(1)) < DeltaRational(F(6), F(-9))
    assert DeltaRational(F(1), F(2)) + DeltaRational(F(3), F(-1)) == (4, 1)
    assert DeltaRational(F(1), F(2)) * 3 == (3, 6)


def test_instantiate_ground_true_edge():
    assert instantiate(phi("since > 2019"), {"since": F(2020)}) == ()
    assert instantiate(phi("since > 2019"), {"since": F(2019)}) is None


def test_instantiate_param_bounds():
    assert instantiate(phi("?p <= age"), {"age": F(25)}) == (NormAtom(P, "<=", DeltaRational(F(25))),)
    assert instantiate(phi("?p < age"), {"age": F(25)}) == (NormAtom(P, "<=", DeltaRational(F(25), F(-1))),)
    assert instantiate(phi("?p > age"), {"age": F(25)}) == (NormAtom(P, ">=", DeltaRational(F(25), F(1))),)
    eq = instantiate(phi("?p = age"), {"age": F(3)})
    assert eq == (NormAtom(P, "<=", DeltaRational(F(3))), NormAtom(P, ">=", DeltaRational(F(3))))


def test_instantiate_rejects():
    assert instantiate(phi("?p <= age"), {}) is None
    assert instantiate(phi("?p <= age"), {"age": "old"}) is None
    assert instantiate(parse_pattern('[x, name = "bo"]').constraint, {"name": "al"}) is None
    assert instantiate(parse_pattern('[x, name = "bo"]').constraint, {"name": F(1)}) is None
    assert instantiate(parse_pattern('[x, name = "bo"]').constraint, {"name": "bo"}) == ()


def test_canonical_terms_merge():
    a = instantiate(phi("?q - ?p <= 7"), {})
    b = instantiate(phi("2*?p - 2*?q >= -14"), {})
    assert a == b
    (atom,) = a
    assert atom.term == (("p", F(1)), ("q", F(-1)))
    assert atom.op == ">=" and atom.bound == (-7, 0)


def test_parameter_on_both_sides():
    (atom,) = instantiate(phi("?p + age <= ?q"), {"age": F(4)})
    assert atom == NormAtom((("p", F(1)), ("q", F(-1))), "<=", DeltaRational(F(-4)))


def test_cancelled_parameter_is_ground():
    assert instantiate(phi("?p - ?p <= 1"), {}) == ()
    assert instantiate(phi("?p - ?p >= 1"), {}) is None


def test_rewrite_at_most_two():
    for op in ("<", ">", "<=", ">=", "=", "!="):
        out = rewrite(LinAtom(P, op, F(1)))
        assert 1 <= len(out) <= 2
        assert all(a.op != "!=" or a.bound.eps == 0 for a in out)


def test_tighten_examples():
    s, changed = tighten(BoundStore(), norm({"p": 1}, "<=", 5))
    assert changed and s.up[P] == (5, 0)
    s2, changed = tighten(s, norm({"p": 1}, "<=", 7))
    assert not changed and s2 is s
    s3, _ = tighten(BoundStore(), norm({"p": 1}, "!=", 3))
    s4, _ = tighten(s3, norm({"p": 1}, "!=", 4))
    assert s4.neq[P] == {F(3), F(4)}
    assert s3.neq[P] == {F(3)}  # persistent


def test_digest_examples():
    assert digest(BoundStore()) == digest(BoundStore())
    atoms = [norm({"p": 1}, "<=", 5), norm({"p": 1, "q": 2}, ">=", 1, 1), norm({"q": 1}, "!=", 0)]
    assert digest(BoundStore.from_atoms(atoms)) == digest(BoundStore.from_atoms(reversed(atoms)))
    a = BoundStore.from_atoms([norm({"p": 1}, "<=", 5)])
    b = BoundStore.from_atoms([norm({"p": 1}, "<=", 5), norm({"p": 1}, ">=", 1)])
    assert digest(a) != digest(b)


@given(st.integers(min_value=0, max_value=10**9))
def test_tightening_is_monotone_and_idempotent(seed):
    rng = random.Random(seed)
    store = BoundStore()
    for a in random_atoms(rng, atoms=12):
        nxt, changed = store.tighten(a)
        for t, b in store.up.items():
            assert nxt.up[t] <= b
        for t, b in store.low.items():
            assert nxt.low[t] >= b
        for t, vs in store.neq.items():
            assert vs <= nxt.neq[t]
        again, changed2 = nxt.tighten(a)
        assert not changed2 and again == nxt
        assert changed == (nxt != store)
        store = nxt


@given(st.integers(min_value=0, max_value=10**9))
def test_digest_order_independent(seed):
    rng = random.Random(seed)
    atoms = random_atoms(rng, atoms=10)
    shuffled = list(atoms)
    rng.shuffle(shuffled)
    assert BoundStore.from_atoms(atoms).digest() == BoundStore.from_atoms(shuffled).digest()


def rewritten(system):
    out = []
    for coeffs, op, const in system:
        out.extend(rewrite(canonical_atom(coeffs, op, const)))
    return out


def explicit_eps(system):
    """The rewritten system with the infinitesimal as an ordinary variable ``e > 0``."""
    rows = [({"e": F(1)}, ">", F(0))]
    for coeffs, op, const in system:
        if op == "<":
            rows.append(({**coeffs, "e": F(1)}, "<=", const))
        elif op == ">":
            rows.append(({**coeffs, "e": F(-1)}, ">=", const))
        elif op == "=":
            rows += [(coeffs, "<=", const), (coeffs, ">=", const)]
        else:
            rows.append((coeffs, op, const))
    return rows


@given(st.integers(min_value=0, max_value=10**9))
def test_rewriting_preserves_satisfiability(seed):
    system = random_strict_system(random.Random(seed))
    want = fm_feasible_strict(system)
    assert fm_feasible(rewritten(system)) == want
    assert fm_feasible_strict(explicit_eps(system)) == want


def test_ground_returns_strict_atoms():
    (a,) = ground(phi("?p < 3"), {})
    assert a.op == "<" and a.const == 3
