"""Exact constraint machinery shared by the evaluators.

Linear atoms are kept with all parameters on the left and a constant on the
right, scaled so that the coefficient of the alphabetically first parameter is
exactly 1. That makes ``?q - ?p <= 7`` and ``2*?p - 2*?q >= -14`` the same
term with the same bound, which keeps bound stores small and digests stable.

Strict comparisons are encoded with a symbolic positive infinitesimal: the
bound of ``t < c`` is ``DeltaRational(c, -1)``, read as ``c - eps``.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Optional

from .graph import Value
from .query import Constraint, LinCmp, StringEq

ZERO = Fraction(0)
ONE = Fraction(1)

LE, GE, NE = "<=", ">=", "!="

#: parameter name -> value
Assignment = dict

#: canonical linear term: ``((param, coef), ...)`` sorted by name, first coef 1
LinTerm = tuple


class DeltaRational(NamedTuple):
    """``std + eps * k`` for a symbolic ``k > 0``; ordered lexicographically."""

    std: Fraction
    eps: Fraction = ZERO

    def __add__(self, other):  # type: ignore[override]
        return DeltaRational(self.std + other[0], self.eps + other[1])

    def __sub__(self, other):
        return DeltaRational(self.std - other[0], self.eps - other[1])

    def __neg__(self):
        return DeltaRational(-self.std, -self.eps)

    def __mul__(self, k):  # type: ignore[override]
        return DeltaRational(self.std * k, self.eps * k)

    __rmul__ = __mul__

    def concretize(self, eps: Fraction) -> Fraction:
        return self.std + self.eps * eps

    def __str__(self) -> str:
        if not self.eps:
            return str(self.std)
        sign = "+" if self.eps > 0 else "-"
        k = abs(self.eps)
        return f"{self.std}{sign}{'' if k == 1 else k}ε"


def term_str(term: LinTerm) -> str:
    parts = []
    for i, (p, c) in enumerate(term):
        if i == 0:
            parts.append(f"?{p}" if c == 1 else f"{c}*?{p}")
        else:
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            parts.append(f" {sign} " + (f"?{p}" if mag == 1 else f"{mag}*?{p}"))
    return "".join(parts)


def term_params(term: LinTerm) -> list[str]:
    return [p for p, _ in term]


def eval_term(term: LinTerm, mu: Mapping[str, Fraction]) -> Fraction:
    return sum((c * mu[p] for p, c in term), ZERO)


class LinAtom(NamedTuple):
    """An instantiated comparison ``term op const`` over parameters only.

    ``op`` is one of ``< > <= >= = !=``; strictness is still explicit.
    """

    term: LinTerm
    op: str
    const: Fraction

    def __str__(self) -> str:
        return f"{term_str(self.term)} {self.op} {self.const}"

    def holds(self, mu: Mapping[str, Fraction]) -> bool:
        return compare(eval_term(self.term, mu), self.op, self.const)


class NormAtom(NamedTuple):
    """``term op bound`` with ``op`` in ``<= >= !=``."""

    term: LinTerm
    op: str
    bound: DeltaRational

    def __str__(self) -> str:
        return f"{term_str(self.term)} {self.op} {self.bound}"

    def holds(self, mu: Mapping[str, Fraction], eps: Fraction) -> bool:
        lhs = eval_term(self.term, mu)
        rhs = self.bound.concretize(eps)
        if self.op == LE:
            return lhs <= rhs
        if self.op == GE:
            return lhs >= rhs
        return lhs != rhs


_FLIP = {"<": ">", ">": "<", "<=": ">=", ">=": "<=", "=": "=", "!=": "!="}


def compare(a: Fraction, op: str, b: Fraction) -> bool:
    if op == "<":
        return a < b
    if op == ">":
        return a > b
    if op == "<=":
        return a <= b
    if op == ">=":
        return a >= b
    if op == "=":
        return a == b
    if op == "!=":
        return a != b
    raise ValueError(f"unknown comparator {op!r}")


def canonical_atom(coeffs: Mapping[str, Fraction], op: str, const: Fraction) -> LinAtom:
    """Scale ``sum(coeffs) op const`` so the leading coefficient is 1."""
    items = sorted((p, c) for p, c in coeffs.items() if c)
    lead = items[0][1]
    if lead != 1:
        items = [(p, c / lead) for p, c in items]
        const = const / lead
        if lead < 0:
            op = _FLIP[op]
    return LinAtom(tuple(items), op, const)


def rewrite(atom: LinAtom) -> tuple[NormAtom, ...]:
    """Strict and equality comparisons to bound form (at most two atoms out)."""
    t, op, c = atom
    if op == "<=":
        return (NormAtom(t, LE, DeltaRational(c)),)
    if op == ">=":
        return (NormAtom(t, GE, DeltaRational(c)),)
    if op == "<":
        return (NormAtom(t, LE, DeltaRational(c, -ONE)),)
    if op == ">":
        return (NormAtom(t, GE, DeltaRational(c, ONE)),)
    if op == "=":
        return (NormAtom(t, LE, DeltaRational(c)), NormAtom(t, GE, DeltaRational(c)))
    if op == "!=":
        return (NormAtom(t, NE, DeltaRational(c)),)
    raise ValueError(f"unknown comparator {op!r}")


# ---------------------------------------------------------------------------
# instantiation


class _Compiled(NamedTuple):
    strings: tuple[tuple[str, str], ...]
    # (param coeffs, attr coeffs, constant, op) with everything moved left:
    #   sum(params) + sum(attrs) + const  op  0
    linear: tuple[tuple[tuple[tuple[str, Fraction], ...], tuple[tuple[str, Fraction], ...], Fraction, str], ...]


_compiled_cache: dict[Constraint, _Compiled] = {}


def _compile(phi: Constraint) -> _Compiled:
    hit = _compiled_cache.get(phi)
    if hit is not None:
        return hit
    strings = []
    linear = []
    for a in phi.atoms:
        if isinstance(a, StringEq):
            strings.append((a.attr, a.value))
            continue
        params: dict[str, Fraction] = {}
        attrs: dict[str, Fraction] = {}
        const = ZERO
        for side, sign in ((a.left, 1), (a.right, -1)):
            for coef, var in side.terms:
                coef = coef * sign
                if var is None:
                    const += coef
                elif var.param:
                    params[var.name] = params.get(var.name, ZERO) + coef
                else:
                    attrs[var.name] = attrs.get(var.name, ZERO) + coef
        linear.append((tuple(params.items()), tuple(attrs.items()), const, a.op))
    out = _Compiled(tuple(strings), tuple(linear))
    _compiled_cache[phi] = out
    return out


def ground(phi: Constraint, attrs: Mapping[str, Value]) -> Optional[tuple[LinAtom, ...]]:
    """Substitute element attributes into ``phi``.

    Ground atoms are decided on the spot; ``None`` means the element can
    never satisfy ``phi`` (a false ground atom, a missing attribute, or a
    string used in arithmetic). Otherwise the remaining parameter atoms are
    returned in canonical form.
    """
    comp = _compile(phi)
    for attr, value in comp.strings:
        if attrs.get(attr) != value or not isinstance(attrs.get(attr), str):
            return None
    out = []
    for params, attr_coeffs, const, op in comp.linear:
        total = const
        for name, coef in attr_coeffs:
            v = attrs.get(name)
            if v is None or isinstance(v, str):
                return None
            total += coef * v
        live = {p: c for p, c in params if c}
        if not live:
            if not compare(total, op, ZERO):
                return None
            continue
        out.append(canonical_atom(live, op, -total))
    return tuple(out)


def instantiate(phi: Constraint, attrs: Mapping[str, Value]) -> Optional[tuple[NormAtom, ...]]:
    """Ground ``phi`` against an element and rewrite to bound atoms (``None`` = reject)."""
    atoms = ground(phi, attrs)
    if atoms is None:
        return None
    out: list[NormAtom] = []
    for a in atoms:
        out.extend(rewrite(a))
    return tuple(out)


# ---------------------------------------------------------------------------
# bound store


class BoundStore:
    """Tightest bounds per canonical term plus excluded values.

    Stores are immutable; :meth:`tighten` returns a new store (sharing the
    untouched maps) or ``self`` when nothing changed.
    """

    __slots__ = ("up", "low", "neq", "_key")

    def __init__(self, up=None, low=None, neq=None):
        self.up: dict[LinTerm, DeltaRational] = up or {}
        self.low: dict[LinTerm, DeltaRational] = low or {}
        self.neq: dict[LinTerm, frozenset] = neq or {}
        self._key = None

    def tighten(self, atom: NormAtom) -> tuple["BoundStore", bool]:
        t, op, b = atom
        if op == LE:
            cur = self.up.get(t)
            if cur is not None and cur <= b:
                return self, False
            up = dict(self.up)
            up[t] = b
            return BoundStore(up, self.low, self.neq), True
        if op == GE:
            cur = self.low.get(t)
            if cur is not None and cur >= b:
                return self, False
            low = dict(self.low)
            low[t] = b
            return BoundStore(self.up, low, self.neq), True
        if op == NE:
            cur = self.neq.get(t, frozenset())
            if b.std in cur:
                return self, False
            neq = dict(self.neq)
            neq[t] = cur | {b.std}
            return BoundStore(self.up, self.low, neq), True
        raise ValueError(f"unknown bound operator {op!r}")

    def tighten_all(self, atoms: Iterable[NormAtom]) -> tuple["BoundStore", bool]:
        store, changed = self, False
        for a in atoms:
            store, c = store.tighten(a)
            changed |= c
        return store, changed

    @classmethod
    def from_atoms(cls, atoms: Iterable[NormAtom]) -> "BoundStore":
        return cls().tighten_all(atoms)[0]

    def key(self) -> tuple:
        """Hashable canonical form; equal stores have equal keys."""
        if self._key is None:
            self._key = (
                tuple(sorted(self.up.items())),
                tuple(sorted(self.low.items())),
                tuple(sorted((t, tuple(sorted(v))) for t, v in self.neq.items())),
            )
        return self._key

    def digest(self) -> bytes:
        up, low, neq = self.key()

        def term(t):
            return ",".join(f"{p}:{c}" for p, c in t)

        lines = [f"U {term(t)} {b.std} {b.eps}" for t, b in up]
        lines += [f"L {term(t)} {b.std} {b.eps}" for t, b in low]
        lines += [f"N {term(t)} " + " ".join(str(x) for x in vs) for t, vs in neq]
        return "\n".join(lines).encode()

    def __eq__(self, other) -> bool:
        return isinstance(other, BoundStore) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __bool__(self) -> bool:
        return bool(self.up or self.low or self.neq)

    def atoms(self) -> list[NormAtom]:
        out = [NormAtom(t, LE, b) for t, b in self.up.items()]
        out += [NormAtom(t, GE, b) for t, b in self.low.items()]
        out += [NormAtom(t, NE, DeltaRational(c)) for t, vs in self.neq.items() for c in sorted(vs)]
        return out

    def terms(self) -> list[LinTerm]:
        seen = dict.fromkeys(self.up)
        seen.update(dict.fromkeys(self.low))
        seen.update(dict.fromkeys(self.neq))
        return sorted(seen)

    def params(self) -> list[str]:
        return sorted({p for t in self.terms() for p, _ in t})

    def __repr__(self) -> str:
        return "BoundStore(" + ", ".join(str(a) for a in self.atoms()) + ")"


def tighten(store: BoundStore, atom: NormAtom) -> tuple[BoundStore, bool]:
    return store.tighten(atom)


def digest(store: BoundStore) -> bytes:
    return store.digest()


def norm(coeffs: Mapping[str, Fraction | int], op: str, const, eps: int = 0) -> NormAtom:
    """Convenience constructor: canonicalize ``coeffs op const (+ eps*ε)``."""
    coeffs = {p: Fraction(c) for p, c in coeffs.items()}
    items = sorted((p, c) for p, c in coeffs.items() if c)
    lead = items[0][1]
    bound = DeltaRational(Fraction(const), Fraction(eps))
    if lead != 1:
        items = [(p, c / lead) for p, c in items]
        bound = bound * (1 / lead)
        if lead < 0:
            op = {LE: GE, GE: LE, NE: NE}[op]
            if op == NE:
                bound = DeltaRational(bound.std)
    if bound.eps:
        bound = DeltaRational(bound.std, Fraction((bound.eps > 0) - (bound.eps < 0)))
    return NormAtom(tuple(items), op, bound)
