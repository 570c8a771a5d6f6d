"""Surface syntax for parametric regular path queries.

    FROM v0 MATCH ([Person, ?p <= age && ?q >= age] / [follow, since > 2019])* / [Person]

Atoms are ``[label]`` or ``[label, constraint]``. Operators by decreasing
precedence: postfix ``* + ?``, prefix inverse ``^``, concatenation ``/``,
alternation ``|``. ``()`` denotes the empty pattern.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .graph import format_decimal

COMPARATORS = ("<", ">", "<=", ">=", "=", "!=")


class QuerySyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        self.position = position
        super().__init__(f"{message} at position {position}")


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Var:
    name: str
    param: bool  # ``?name`` when true, attribute otherwise

    def __str__(self) -> str:
        return ("?" if self.param else "") + self.name


@dataclass(frozen=True)
class LinExpr:
    """Sum of ``(coefficient, var)`` terms in source order; ``var`` None is a constant."""

    terms: tuple[tuple[Fraction, Optional[Var]], ...]


@dataclass(frozen=True)
class StringEq:
    attr: str
    value: str


@dataclass(frozen=True)
class LinCmp:
    left: LinExpr
    op: str
    right: LinExpr


ConstraintAtom = Union[StringEq, LinCmp]


@dataclass(frozen=True)
class Constraint:
    atoms: tuple[ConstraintAtom, ...] = ()

    def __bool__(self) -> bool:  # an empty conjunction is still a constraint
        return True

    @property
    def trivial(self) -> bool:
        return not self.atoms

    def params(self) -> set[str]:
        out = set()
        for a in self.atoms:
            if isinstance(a, LinCmp):
                for side in (a.left, a.right):
                    out.update(v.name for _, v in side.terms if v is not None and v.param)
        return out


TRUE = Constraint()


@dataclass(frozen=True)
class Atom:
    label: str
    constraint: Constraint = TRUE


@dataclass(frozen=True)
class Inverse:
    child: "Pregex"


@dataclass(frozen=True)
class Concat:
    left: "Pregex"
    right: "Pregex"


@dataclass(frozen=True)
class Alt:
    left: "Pregex"
    right: "Pregex"


@dataclass(frozen=True)
class Star:
    child: "Pregex"


@dataclass(frozen=True)
class Plus:
    child: "Pregex"


@dataclass(frozen=True)
class Opt:
    child: "Pregex"


@dataclass(frozen=True)
class Epsilon:
    pass


Pregex = Union[Atom, Inverse, Concat, Alt, Star, Plus, Opt, Epsilon]


@dataclass(frozen=True)
class PrpqQuery:
    start: str
    pattern: Pregex


def count_atoms(ast: Pregex) -> int:
    if isinstance(ast, Atom):
        return 1
    if isinstance(ast, (Concat, Alt)):
        return count_atoms(ast.left) + count_atoms(ast.right)
    if isinstance(ast, (Inverse, Star, Plus, Opt)):
        return count_atoms(ast.child)
    return 0


def count_alts(ast: Pregex) -> int:
    if isinstance(ast, Alt):
        return 1 + count_alts(ast.left) + count_alts(ast.right)
    if isinstance(ast, Concat):
        return count_alts(ast.left) + count_alts(ast.right)
    if isinstance(ast, (Inverse, Star, Plus, Opt)):
        return count_alts(ast.child)
    return 0


# ---------------------------------------------------------------------------
# lexer

_TOKEN_SPEC = [
    ("WS", r"[ \t\r\n]+"),
    ("STRING", r'"(?:[^"\\]|\\.)*"'),
    ("NUMBER", r"\d+(?:\.\d+)?"),
    ("PARAM", r"\?[A-Za-z_][A-Za-z0-9_]*"),
    ("IDENT", r"[A-Za-z_][A-Za-z0-9_]*"),
    ("OP", r"&&|<=|>=|==|!=|[<>=()\[\],/|^*+?\-]"),
]
_LEX_RE = re.compile("|".join(f"(?P<{name}>{pat})" for name, pat in _TOKEN_SPEC))


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


def tokenize(text: str, start: int = 0) -> list[Token]:
    tokens = []
    pos = start
    while pos < len(text):
        m = _LEX_RE.match(text, pos)
        if m is None:
            if text[pos] == "!":
                raise QuerySyntaxError("unknown comparator '!'", pos)
            raise QuerySyntaxError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "WS":
            tokens.append(Token(m.lastgroup, m.group(0), pos))
        pos = m.end()
    tokens.append(Token("EOF", "", len(text)))
    return tokens


# ---------------------------------------------------------------------------
# parser


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, offset: int = 1) -> Token:
        return self.toks[min(self.i + offset, len(self.toks) - 1)]

    def advance(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def at(self, text: str) -> bool:
        return self.tok.kind == "OP" and self.tok.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise QuerySyntaxError(f"expected {text!r}, found {self.tok.text or 'end of input'!r}", self.tok.pos)
        return self.advance()

    def expr(self) -> Pregex:
        node = self.concat()
        while self.at("|"):
            self.advance()
            node = Alt(node, self.concat())
        return node

    def concat(self) -> Pregex:
        node = self.unary()
        while self.at("/"):
            self.advance()
            node = Concat(node, self.unary())
        return node

    def unary(self) -> Pregex:
        if self.at("^"):
            self.advance()
            return Inverse(self.unary())
        return self.postfix()

    def postfix(self) -> Pregex:
        node = self.base()
        while self.tok.kind == "OP" and self.tok.text in ("*", "+", "?"):
            op = self.advance().text
            node = {"*": Star, "+": Plus, "?": Opt}[op](node)
        return node

    def base(self) -> Pregex:
        if self.at("("):
            self.advance()
            if self.at(")"):
                self.advance()
                return Epsilon()
            node = self.expr()
            self.expect(")")
            return node
        if self.at("["):
            self.advance()
            if self.tok.kind != "IDENT":
                raise QuerySyntaxError("expected a label", self.tok.pos)
            label = self.advance().text
            constraint = TRUE
            if self.at(","):
                self.advance()
                constraint = self.constraint()
            self.expect("]")
            return Atom(label, constraint)
        raise QuerySyntaxError(f"unexpected {self.tok.text or 'end of input'!r}", self.tok.pos)

    def constraint(self) -> Constraint:
        atoms = [self.atom()]
        while self.at("&&"):
            self.advance()
            atoms.append(self.atom())
        return Constraint(tuple(atoms))

    def atom(self) -> ConstraintAtom:
        if (self.tok.kind == "IDENT" and self.peek().kind == "OP"
                and self.peek().text in ("=", "==") and self.peek(2).kind == "STRING"):
            attr = self.advance().text
            self.advance()
            raw = self.advance().text
            return StringEq(attr, re.sub(r"\\(.)", r"\1", raw[1:-1]))
        left = self.linexp()
        if self.tok.kind != "OP" or self.tok.text not in ("<", ">", "<=", ">=", "=", "==", "!="):
            raise QuerySyntaxError(f"unknown comparator {self.tok.text or 'end of input'!r}", self.tok.pos)
        op = self.advance().text
        if op == "==":
            op = "="
        if self.tok.kind == "STRING":
            raise QuerySyntaxError("string constants compare only against attributes", self.tok.pos)
        return LinCmp(left, op, self.linexp())

    def linexp(self) -> LinExpr:
        terms = [self.term(Fraction(1))]
        while self.at("+") or self.at("-"):
            sign = Fraction(-1) if self.advance().text == "-" else Fraction(1)
            terms.append(self.term(sign))
        return LinExpr(tuple(terms))

    def term(self, sign: Fraction) -> tuple[Fraction, Optional[Var]]:
        negative = False
        if self.at("-"):
            self.advance()
            negative = True
        if self.tok.kind == "NUMBER":
            coef = Fraction(self.advance().text)
            if negative:
                coef = -coef
            if self.at("*"):
                self.advance()
                return sign * coef, self.var()
            return sign * coef, None
        if negative:
            # ``-x`` is read as ``-1*x``
            return -sign, self.var()
        return sign, self.var()

    def var(self) -> Var:
        t = self.tok
        if t.kind == "PARAM":
            self.advance()
            return Var(t.text[1:], True)
        if t.kind == "IDENT":
            self.advance()
            return Var(t.text, False)
        raise QuerySyntaxError(f"expected a variable, found {t.text or 'end of input'!r}", t.pos)


_HEAD_RE = re.compile(r"\s*FROM\s+(\S+)\s+MATCH(?=\s|\Z|[(\[^])")


def parse_pattern(text: str) -> Pregex:
    p = _Parser(tokenize(text))
    ast = p.expr()
    if p.tok.kind != "EOF":
        raise QuerySyntaxError(f"unexpected {p.tok.text!r}", p.tok.pos)
    return ast


def parse_query(text: str) -> PrpqQuery:
    m = _HEAD_RE.match(text)
    if m is None:
        raise QuerySyntaxError("expected 'FROM <node> MATCH <pattern>'", 0)
    p = _Parser(tokenize(text, m.end()))
    ast = p.expr()
    if p.tok.kind != "EOF":
        raise QuerySyntaxError(f"unexpected {p.tok.text!r}", p.tok.pos)
    return PrpqQuery(m.group(1), ast)


# ---------------------------------------------------------------------------
# rendering

_PREC = {Alt: 0, Concat: 1, Inverse: 2, Star: 3, Plus: 3, Opt: 3, Atom: 4, Epsilon: 4}


def _render_term(coef: Fraction, var: Optional[Var], first: bool) -> str:
    if first:
        sign, mag = "", coef
    else:
        sign, mag = (" - ", -coef) if coef < 0 else (" + ", coef)
    if var is None:
        return sign + format_decimal(mag)
    if mag == 1:
        return sign + str(var)
    return f"{sign}{format_decimal(mag)}*{var}"


def render_linexp(e: LinExpr) -> str:
    return "".join(_render_term(c, v, i == 0) for i, (c, v) in enumerate(e.terms))


def _escape(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def render_constraint(c: Constraint) -> str:
    parts = []
    for a in c.atoms:
        if isinstance(a, StringEq):
            parts.append(f"{a.attr} = {_escape(a.value)}")
        else:
            parts.append(f"{render_linexp(a.left)} {a.op} {render_linexp(a.right)}")
    return " && ".join(parts)


def render(ast: Pregex) -> str:
    if isinstance(ast, Atom):
        if ast.constraint.trivial:
            return f"[{ast.label}]"
        return f"[{ast.label}, {render_constraint(ast.constraint)}]"
    if isinstance(ast, Epsilon):
        return "()"

    def wrap(child: Pregex, min_prec: int) -> str:
        s = render(child)
        return f"({s})" if _PREC[type(child)] < min_prec else s

    if isinstance(ast, Alt):
        return f"{wrap(ast.left, 0)} | {wrap(ast.right, 1)}"
    if isinstance(ast, Concat):
        return f"{wrap(ast.left, 1)} / {wrap(ast.right, 2)}"
    if isinstance(ast, Inverse):
        return "^" + wrap(ast.child, 2)
    suffix = {Star: "*", Plus: "+", Opt: "?"}[type(ast)]
    return wrap(ast.child, 3) + suffix


def render_query(q: PrpqQuery) -> str:
    return f"FROM {q.start} MATCH {render(q.pattern)}"
