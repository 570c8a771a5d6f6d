"""Parametric automata and their construction from pattern ASTs.

The construction is epsilon-free: concatenation copies every transition that
enters a final state of the left operand onto the right operand's initial
state, alternation fuses the two initial states into a fresh one, and star
routes completed iterations back into a (possibly fresh) accepting initial
state. Unreachable and non-co-reachable states are pruned at the end.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Sequence

from .query import (
    Alt, Atom, Concat, Constraint, Epsilon, Inverse, Opt, Plus, Pregex, Star, render_constraint,
)


class Transition(NamedTuple):
    src: int
    label: str
    constraint: Constraint
    inverse: bool
    dst: int


@dataclass(frozen=True)
class ParametricAutomaton:
    states: tuple[int, ...]
    initial: int
    finals: frozenset[int]
    transitions: tuple[Transition, ...]

    def outgoing(self, q: int) -> tuple[Transition, ...]:
        return self._out.get(q, ())

    def __post_init__(self):
        out: dict[int, list[Transition]] = {}
        for t in self.transitions:
            out.setdefault(t.src, []).append(t)
        object.__setattr__(self, "_out", {q: tuple(ts) for q, ts in out.items()})

    @property
    def accepts_empty(self) -> bool:
        return self.initial in self.finals

    def dump(self) -> str:
        """Deterministic text listing for golden tests and debugging."""
        lines = [
            f"states {len(self.states)}",
            f"initial q{self.initial}",
            "finals " + " ".join(f"q{q}" for q in sorted(self.finals)),
        ]
        for t in self.transitions:
            phi = render_constraint(t.constraint) if not t.constraint.trivial else "true"
            inv = " inverse" if t.inverse else ""
            lines.append(f"q{t.src} -[{t.label}{inv} | {phi}]-> q{t.dst}")
        return "\n".join(lines) + "\n"

    def constraint_count(self) -> int:
        """Number of (in)equality atoms over all transitions, equalities counted twice."""
        n = 0
        for t in self.transitions:
            for a in t.constraint.atoms:
                if getattr(a, "op", None) is not None:
                    n += 2 if a.op == "=" else 1
        return n


class _Nfa:
    """Mutable intermediate used during construction."""

    __slots__ = ("initial", "finals", "trans")

    def __init__(self, initial: int, finals: set[int], trans: list[tuple]):
        self.initial = initial
        self.finals = finals
        self.trans = trans  # (src, label, constraint, inverse, dst)


class _Builder:
    def __init__(self) -> None:
        self.counter = 0

    def fresh(self) -> int:
        self.counter += 1
        return self.counter - 1

    def build(self, ast: Pregex) -> _Nfa:
        if isinstance(ast, Atom):
            q0, qf = self.fresh(), self.fresh()
            return _Nfa(q0, {qf}, [(q0, ast.label, ast.constraint, False, qf)])
        if isinstance(ast, Epsilon):
            q = self.fresh()
            return _Nfa(q, {q}, [])
        if isinstance(ast, Concat):
            return self.concat(self.build(ast.left), self.build(ast.right))
        if isinstance(ast, Alt):
            return self.alt(self.build(ast.left), self.build(ast.right))
        if isinstance(ast, Star):
            return self.star(self.build(ast.child))
        if isinstance(ast, Plus):
            return self.concat(self.build(ast.child), self.star(self.build(ast.child)))
        if isinstance(ast, Opt):
            return self.alt(self.build(ast.child), self.build(Epsilon()))
        if isinstance(ast, Inverse):
            return self.inverse(self.build(ast.child))
        raise TypeError(f"not a pattern: {ast!r}")

    def concat(self, a: _Nfa, b: _Nfa) -> _Nfa:
        trans = list(a.trans)
        trans += [(s, l, c, i, b.initial) for (s, l, c, i, d) in a.trans if d in a.finals]
        if a.initial in a.finals:
            trans += [(a.initial, l, c, i, d) for (s, l, c, i, d) in b.trans if s == b.initial]
        trans += b.trans
        finals = set(b.finals)
        if a.initial in a.finals and b.initial in b.finals:
            finals.add(a.initial)
        return _Nfa(a.initial, finals, trans)

    def alt(self, a: _Nfa, b: _Nfa) -> _Nfa:
        q0 = self.fresh()
        trans = [(q0, l, c, i, d) for (s, l, c, i, d) in a.trans if s == a.initial]
        trans += [(q0, l, c, i, d) for (s, l, c, i, d) in b.trans if s == b.initial]
        trans += a.trans + b.trans
        finals = a.finals | b.finals
        if a.initial in a.finals or b.initial in b.finals:
            finals.add(q0)
        return _Nfa(q0, finals, trans)

    def star(self, a: _Nfa) -> _Nfa:
        q0 = a.initial
        if q0 in a.finals:
            # every arrival at q0 already completes an iteration
            trans = list(a.trans)
            trans += [(s, l, c, i, q0) for (s, l, c, i, d) in a.trans if d in a.finals]
            return _Nfa(q0, set(a.finals), trans)
        if not any(d == q0 for (_, _, _, _, d) in a.trans):
            trans = list(a.trans)
            trans += [(s, l, c, i, q0) for (s, l, c, i, d) in a.trans if d in a.finals]
            return _Nfa(q0, {q0}, trans)
        s0 = self.fresh()
        trans = [(s0, l, c, i, d) for (s, l, c, i, d) in a.trans if s == q0]
        trans += a.trans
        trans += [(s, l, c, i, s0) for (s, l, c, i, d) in trans if d in a.finals]
        return _Nfa(s0, {s0}, trans)

    def inverse(self, a: _Nfa) -> _Nfa:
        # reverse every transition and flip its direction flag
        rev = [(d, l, c, not i, s) for (s, l, c, i, d) in a.trans]
        s0 = self.fresh()
        trans = [(s0, l, c, i, d) for (s, l, c, i, d) in rev if s in a.finals]
        trans += rev
        finals = {a.initial}
        if a.initial in a.finals:
            finals.add(s0)
        return _Nfa(s0, finals, trans)


def _prune(nfa: _Nfa) -> ParametricAutomaton:
    trans = list(dict.fromkeys(nfa.trans))  # dedupe, keep construction order
    succ: dict[int, set[int]] = {}
    pred: dict[int, set[int]] = {}
    for s, _, _, _, d in trans:
        succ.setdefault(s, set()).add(d)
        pred.setdefault(d, set()).add(s)

    def closure(seeds: Iterable[int], edges: dict[int, set[int]]) -> set[int]:
        seen = set(seeds)
        stack = list(seen)
        while stack:
            for n in edges.get(stack.pop(), ()):
                if n not in seen:
                    seen.add(n)
                    stack.append(n)
        return seen

    reach = closure([nfa.initial], succ)
    coreach = closure(nfa.finals, pred)
    live = (reach & coreach) | {nfa.initial}
    trans = [t for t in trans if t[0] in live and t[4] in live]

    # renumber in breadth-first order from the initial state
    order = {nfa.initial: 0}
    queue = [nfa.initial]
    by_src: dict[int, list[tuple]] = {}
    for t in trans:
        by_src.setdefault(t[0], []).append(t)
    for q in queue:
        for t in by_src.get(q, ()):
            if t[4] not in order:
                order[t[4]] = len(order)
                queue.append(t[4])
    transitions = tuple(
        Transition(order[s], l, c, i, order[d]) for (s, l, c, i, d) in trans
    )
    finals = frozenset(order[q] for q in nfa.finals if q in order)
    return ParametricAutomaton(tuple(range(len(order))), 0, finals, transitions)


def compile_pattern(ast: Pregex) -> ParametricAutomaton:
    """Compile a pattern into an epsilon-free automaton with one initial state."""
    return _prune(_Builder().build(ast))


compile = compile_pattern  # noqa: A001 - module-level name mirrors the operation


def accepts_sequence(aut: ParametricAutomaton, seq: Sequence[tuple], oracle=None) -> Optional[dict]:
    """Decide whether ``aut`` accepts an element sequence under some assignment.

    ``seq`` holds ``(label, inverse, attrs)`` triples. Returns an assignment
    witnessing acceptance or ``None``. ``oracle`` defaults to a fresh
    built-in one.
    """
    from .constraints import BoundStore, instantiate
    from .oracle import Oracle

    if oracle is None:
        oracle = Oracle()
    n = len(seq)
    seen: set = set()
    stack = [(aut.initial, 0, BoundStore())]
    while stack:
        q, i, store = stack.pop()
        key = (q, i, store.key())
        if key in seen:
            continue
        seen.add(key)
        if i == n:
            if q in aut.finals:
                return oracle.model(store)
            continue
        label, inv, attrs = seq[i]
        for t in reversed(aut.outgoing(q)):
            if t.label != label or t.inverse != bool(inv):
                continue
            atoms = instantiate(t.constraint, attrs)
            if atoms is None:
                continue
            nxt, changed = store.tighten_all(atoms)
            if changed and not oracle.check(nxt):
                continue
            stack.append((t.dst, i + 1, nxt))
    return None
