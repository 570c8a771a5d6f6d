import os
import random
import shutil
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from prpq.constraints import BoundStore, DeltaRational, norm
from prpq.oracle import (
    BACKEND, Oracle, OracleError, SizeGuardExceeded, check_feasible, fm_feasible, get_model,
    make_oracle,
)
from prpq.oracle import _kernel, _simplex_py
from helpers import model_satisfies_at, random_atoms, store_of

F = Fraction
Z3 = shutil.which("z3")


def S(*atoms):
    return BoundStore.from_atoms(atoms)


def test_examples():
    assert check_feasible(BoundStore())
    assert not check_feasible(S(norm({"p": 1}, ">=", 3), norm({"p": 1}, "<=", 2)))
    s = S(norm({"p": 1}, "<=", 25), norm({"q": 1}, ">=", 32), norm({"q": 1, "p": -1}, "<=", 7))
    assert check_feasible(s)
    assert get_model(s) == {"p": 25, "q": 32}
    assert not check_feasible(S(norm({"p": 1}, "<=", 5, -1), norm({"p": 1}, ">=", 5)))


def test_forced_point_and_strict_model():
    assert get_model(S(norm({"p": 1}, "<=", 5), norm({"p": 1}, ">=", 5))) == {"p": 5}
    mu = get_model(S(norm({"p": 1}, ">=", 3, 1)))
    assert mu["p"] > 3


def test_disequality_containment():
    # a point excluded by a disequality
    assert not check_feasible(S(norm({"p": 1}, "<=", 3), norm({"p": 1}, ">=", 3), norm({"p": 1}, "!=", 3)))
    # a segment minus one point is fine
    s = S(norm({"p": 1}, "<=", 4), norm({"p": 1}, ">=", 3), norm({"p": 1}, "!=", 3), norm({"p": 1}, "!=", 4))
    assert check_feasible(s)
    mu = get_model(s)
    assert 3 < mu["p"] < 4
    # a line inside the hyperplane p - q = 0
    s = S(norm({"p": 1, "q": -1}, "<=", 0), norm({"p": 1, "q": -1}, ">=", 0), norm({"q": 1, "p": -1}, "!=", 0))
    assert not check_feasible(s)


def test_get_model_rejects_infeasible():
    with pytest.raises(OracleError):
        get_model(S(norm({"p": 1}, ">=", 3), norm({"p": 1}, "<=", 2)))


def test_fm_examples():
    assert fm_feasible([])
    assert not fm_feasible([norm({"p": 1}, "<=", 2), norm({"p": 1}, ">=", 3)])
    with pytest.raises(SizeGuardExceeded):
        fm_feasible([norm({f"x{i}": 1}, "<=", 0) for i in range(7)])


@settings(max_examples=400)
@given(st.integers(min_value=0, max_value=10**9))
def test_simplex_agrees_with_fourier_motzkin(seed):
    atoms = random_atoms(random.Random(seed), params=4, atoms=12, neqs=3)
    store = store_of(atoms)
    ok = check_feasible(store)
    assert ok == fm_feasible(store.atoms())
    if ok:
        mu, eps = get_model(store, with_eps=True)
        assert eps > 0
        assert model_satisfies_at(store.atoms(), mu, eps)


@given(st.integers(min_value=0, max_value=10**9))
def test_model_satisfies_strict_reading(seed):
    # atoms shaped like rewritten comparisons hold strictly, dominated ones included
    atoms = random_atoms(random.Random(seed), params=4, atoms=12, neqs=3, canonical=True)
    store = store_of(atoms)
    if not check_feasible(store):
        return
    mu = get_model(store)
    for t, op, b in atoms:
        lhs = sum(c * mu[p] for p, c in t)
        if op == "<=":
            assert lhs < b.std if b.eps else lhs <= b.std
        elif op == ">=":
            assert lhs > b.std if b.eps else lhs >= b.std
        else:
            assert lhs != b.std


@given(st.integers(min_value=0, max_value=10**9))
def test_infeasibility_is_monotone(seed):
    rng = random.Random(seed)
    store = store_of(random_atoms(rng))
    if check_feasible(store):
        return
    for a in random_atoms(rng, atoms=4):
        assert not check_feasible(store.tighten(a)[0])


@given(st.integers(min_value=0, max_value=10**9))
def test_pivot_ceiling(seed):
    rng = random.Random(seed)
    store = store_of(random_atoms(rng, params=4, atoms=12, neqs=0))
    from prpq.oracle.simplex import _Problem

    prob = _Problem(store)
    ok, _, pivots = _simplex_py.solve(prob.n, prob.rows, prob.lower, prob.upper)
    assert pivots <= 10 * (len(prob.rows) + prob.n) ** 2


@pytest.mark.skipif(_kernel.solve_c is None, reason="compiled kernel not built")
@given(st.integers(min_value=0, max_value=10**9))
def test_kernels_agree(seed):
    from prpq.oracle.simplex import _Problem

    store = store_of(random_atoms(random.Random(seed), params=4, atoms=12, neqs=0))
    prob = _Problem(store)
    a = _simplex_py.solve(prob.n, prob.rows, prob.lower, prob.upper)
    b = _kernel.solve_c(prob.n, prob.rows, prob.lower, prob.upper)
    assert a[0] == b[0] and a[2] == b[2]
    if a[0]:
        assert [tuple(x) for x in a[1]] == [tuple(x) for x in b[1]]


@pytest.mark.skipif(_kernel.solve_c is None, reason="compiled kernel not built")
def test_overflow_falls_back_to_exact_kernel():
    big = F(2**70 + 1, 3)
    s = S(norm({"p": 1}, ">=", big), norm({"p": 1, "q": 1}, "<=", big * 2))
    assert check_feasible(s)
    with pytest.raises(OverflowError):
        from prpq.oracle.simplex import _Problem

        prob = _Problem(s)
        _kernel.solve_c(prob.n, prob.rows, prob.lower, prob.upper)


def test_backend_name():
    assert BACKEND in ("cython", "python")


def test_oracle_counts_calls():
    o = Oracle()
    o.check(BoundStore())
    o.check(S(norm({"p": 1}, "<=", 1)))
    assert o.calls == 2
    assert make_oracle("builtin").calls == 0
    with pytest.raises(ValueError):
        make_oracle("bogus")


# --- SMT-LIB2 adapter ---------------------------------------------------------

from prpq.oracle.smtlib import (  # noqa: E402
    SmtLibOracle, SolverLaunchError, SolverProtocolError, SolverUnknownError, encode, parse_model,
    smtlib_check,
)


def test_encode_declares_eps():
    text = encode(S(norm({"p": 1}, "<=", 5, -1)))
    assert "(declare-const eps Real)" in text and "(assert (> eps 0.0))" in text
    assert "(declare-const |?p| Real)" in text


def test_parse_model_forms():
    text = """(
      (define-fun |?p| () Real (/ 1.0 3.0))
      (define-fun |?q| () Real (- 2.0))
      (define-fun eps () Real (- (/ 1 2)))
      (define-fun |?r| () Real 7)
    )"""
    m = parse_model(text)
    assert m == {"?p": F(1, 3), "?q": F(-2), "eps": F(-1, 2), "?r": F(7)}
    with pytest.raises(SolverProtocolError):
        parse_model("((define-fun p () Real (* 2 3)))")


def test_launch_failure_is_distinct():
    with pytest.raises(SolverLaunchError):
        smtlib_check(BoundStore(), "definitely-not-a-solver-binary")


def test_protocol_failure_is_distinct(tmp_path):
    script = tmp_path / "fake.sh"
    script.write_text("#!/bin/sh\nwhile read line; do case \"$line\" in *check-sat*) echo banana;; esac; done\n")
    script.chmod(0o755)
    with pytest.raises(SolverProtocolError):
        smtlib_check(BoundStore(), str(script))


def test_unknown_is_distinct(tmp_path):
    script = tmp_path / "unknown.sh"
    script.write_text("#!/bin/sh\nwhile read line; do case \"$line\" in *check-sat*) echo unknown;; esac; done\n")
    script.chmod(0o755)
    with pytest.raises(SolverUnknownError):
        smtlib_check(BoundStore(), str(script))


@pytest.mark.skipif(Z3 is None, reason="z3 not installed")
def test_z3_examples():
    assert smtlib_check(BoundStore(), "z3 -in -smt2")[0]
    assert not smtlib_check(S(norm({"p": 1}, ">=", 3), norm({"p": 1}, "<=", 2)), "z3 -in -smt2")[0]


@pytest.mark.skipif(Z3 is None, reason="z3 not installed")
def test_z3_agrees_with_simplex():
    rng = random.Random(11)
    oracle = SmtLibOracle("z3 -in -smt2")
    try:
        for _ in range(60):
            atoms = random_atoms(rng, params=3, atoms=8, neqs=2)
            store = store_of(atoms)
            ok, mu = oracle.solve(store)
            assert ok == check_feasible(store)
            if ok:
                assert model_satisfies_at(store.atoms(), mu, oracle.last_eps)
    finally:
        oracle.close()


@pytest.mark.skipif(Z3 is None, reason="z3 not installed")
def test_z3_eps_is_infinitesimal():
    # holds at eps = 1 but not for small eps
    s = S(norm({"p": 1}, "<=", 0, 1), norm({"p": 1}, ">=", 1, -1))
    assert not check_feasible(s)
    assert not smtlib_check(s, "z3 -in -smt2")[0]
