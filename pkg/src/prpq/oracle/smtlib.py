"""SMT-LIB2 oracle talking to an external solver over stdin/stdout.

The solver process is started once per adapter and reset between queries.
Parameters are declared as quoted symbols ``|?name|`` so they can never clash
with the infinitesimal, which is declared as ``eps`` with ``(> eps 0)``.

A store holds for every small enough infinitesimal exactly when it holds at
some positive ``eps`` and its bounds also hold at ``eps = 0``: the set of
workable ``eps`` values is a closed interval. The ``eps = 0`` copy of the
bounds is asserted over shadow symbols ``|0?name|``.
"""
from __future__ import annotations

import re
import shlex
import subprocess
from fractions import Fraction
from typing import Optional

from ..constraints import Assignment, BoundStore, LinTerm
from . import Oracle

_TOKEN = re.compile(r'\s*(\(|\)|\|[^|]*\||"(?:[^"]|"")*"|[^\s()]+)')


class SolverError(RuntimeError):
    pass


class SolverLaunchError(SolverError):
    pass


class SolverProtocolError(SolverError):
    pass


class SolverUnknownError(SolverError):
    pass


def _num(x: Fraction) -> str:
    x = Fraction(x)
    mag = abs(x)
    s = f"{mag.numerator}.0" if mag.denominator == 1 else f"(/ {mag.numerator}.0 {mag.denominator}.0)"
    return f"(- {s})" if x < 0 else s


def _sym(p: str, prefix: str = "") -> str:
    return f"|{prefix}?{p}|"


def _term(t: LinTerm, prefix: str = "") -> str:
    parts = [_sym(p, prefix) if c == 1 else f"(* {_num(c)} {_sym(p, prefix)})" for p, c in t]
    return parts[0] if len(parts) == 1 else "(+ " + " ".join(parts) + ")"


def _bound(b, at_zero: bool = False) -> str:
    std, eps = b
    if not eps or at_zero:
        return _num(std)
    return f"(+ {_num(std)} (* {_num(eps)} eps))"


def encode(store: BoundStore) -> str:
    """The assertion script (without check-sat) for ``store``."""
    lines = ["(set-logic QF_LRA)"]
    lines += [f"(declare-const {_sym(p)} Real)" for p in store.params()]
    lines += ["(declare-const eps Real)", "(assert (> eps 0.0))"]
    for t, b in sorted(store.up.items()):
        lines.append(f"(assert (<= {_term(t)} {_bound(b)}))")
    for t, b in sorted(store.low.items()):
        lines.append(f"(assert (>= {_term(t)} {_bound(b)}))")
    if any(e for _, e in [*store.up.values(), *store.low.values()]):
        lines += [f"(declare-const {_sym(p, '0')} Real)" for p in store.params()]
        for t, b in sorted(store.up.items()):
            lines.append(f"(assert (<= {_term(t, '0')} {_bound(b, True)}))")
        for t, b in sorted(store.low.items()):
            lines.append(f"(assert (>= {_term(t, '0')} {_bound(b, True)}))")
    for t, vs in sorted(store.neq.items()):
        for c in sorted(vs):
            lines.append(f"(assert (not (= {_term(t)} {_num(c)})))")
    return "\n".join(lines) + "\n"


def parse_sexpr(text: str):
    """Parse one s-expression; returns (value, rest)."""
    pos = 0
    stack: list[list] = [[]]
    while True:
        m = _TOKEN.match(text, pos)
        if m is None:
            if text[pos:].strip():
                raise SolverProtocolError(f"cannot tokenize solver output near {text[pos:pos + 20]!r}")
            raise SolverProtocolError("unbalanced solver output")
        tok = m.group(1)
        pos = m.end()
        if tok == "(":
            stack.append([])
        elif tok == ")":
            if len(stack) == 1:
                raise SolverProtocolError("unexpected ')' in solver output")
            done = stack.pop()
            stack[-1].append(done)
        else:
            stack[-1].append(tok)
        if len(stack) == 1 and stack[0]:
            return stack[0][0], text[pos:]


def eval_value(x) -> Fraction:
    """Evaluate a real literal: decimals, ``(- a)``, ``(/ a b)``."""
    if isinstance(x, str):
        try:
            return Fraction(x)
        except ValueError:
            raise SolverProtocolError(f"bad numeral {x!r}") from None
    if len(x) == 2 and x[0] == "-":
        return -eval_value(x[1])
    if len(x) == 3 and x[0] == "/":
        return eval_value(x[1]) / eval_value(x[2])
    if len(x) == 3 and x[0] == "-":
        return eval_value(x[1]) - eval_value(x[2])
    raise SolverProtocolError(f"unsupported value expression {x!r}")


def parse_model(text: str) -> dict[str, Fraction]:
    sexpr, _ = parse_sexpr(text)
    if not isinstance(sexpr, list):
        raise SolverProtocolError(f"expected a model, got {sexpr!r}")
    if sexpr and sexpr[0] == "model":  # older z3 style
        sexpr = sexpr[1:]
    out = {}
    for entry in sexpr:
        if not (isinstance(entry, list) and len(entry) == 5 and entry[0] == "define-fun"):
            raise SolverProtocolError(f"unexpected model entry {entry!r}")
        name = entry[1].strip("|")
        out[name] = eval_value(entry[4])
    return out


class SmtLibOracle(Oracle):
    """Feasibility oracle backed by a persistent SMT-LIB2 solver process."""

    name = "smtlib"

    def __init__(self, command: str, timeout: float = 30.0):
        super().__init__()
        self.argv = shlex.split(command)
        if not self.argv:
            raise SolverLaunchError("empty solver command")
        self.timeout = timeout
        self.proc: Optional[subprocess.Popen] = None
        self.last_eps: Optional[Fraction] = None

    def _start(self) -> subprocess.Popen:
        if self.proc is None or self.proc.poll() is not None:
            try:
                self.proc = subprocess.Popen(
                    self.argv, stdin=subprocess.PIPE, stdout=subprocess.PIPE,
                    stderr=subprocess.DEVNULL, text=True, bufsize=1,
                )
            except OSError as exc:
                raise SolverLaunchError(f"cannot start {self.argv[0]!r}: {exc}") from exc
            self._send("(set-option :print-success false)\n(set-option :produce-models true)\n")
        return self.proc

    def _send(self, text: str) -> None:
        assert self.proc is not None and self.proc.stdin is not None
        try:
            self.proc.stdin.write(text)
            self.proc.stdin.flush()
        except (BrokenPipeError, OSError) as exc:
            raise SolverProtocolError(f"solver closed its input: {exc}") from exc

    def _read_line(self) -> str:
        assert self.proc is not None and self.proc.stdout is not None
        line = self.proc.stdout.readline()
        if not line:
            raise SolverProtocolError("solver exited unexpectedly")
        return line.strip()

    def _read_sexpr(self) -> str:
        buf = ""
        depth = 0
        while True:
            line = self._read_line()
            buf += line + "\n"
            depth += line.count("(") - line.count(")")
            if depth <= 0 and buf.strip():
                return buf

    def solve(self, store: BoundStore) -> tuple[bool, Optional[Assignment]]:
        self._start()
        self._send("(reset)\n(set-option :produce-models true)\n" + encode(store) + "(check-sat)\n")
        verdict = self._read_line()
        while verdict == "success":
            verdict = self._read_line()
        if verdict == "unsat":
            return False, None
        if verdict == "unknown":
            raise SolverUnknownError("solver answered unknown")
        if verdict != "sat":
            raise SolverProtocolError(f"unexpected solver reply {verdict!r}")
        self._send("(get-model)\n")
        model = parse_model(self._read_sexpr())
        self.last_eps = model.pop("eps", None)
        mu = {}
        for p in store.params():
            mu[p] = model.get("?" + p, Fraction(0))
        return True, mu

    def _check(self, store: BoundStore) -> bool:
        return self.solve(store)[0]

    def model(self, store: BoundStore) -> Assignment:
        ok, mu = self.solve(store)
        if not ok:
            raise SolverProtocolError("model requested for an unsatisfiable store")
        return mu

    def close(self) -> None:
        if self.proc is not None:
            try:
                self.proc.stdin.close()  # type: ignore[union-attr]
            except OSError:
                pass
            self.proc.kill()
            self.proc.wait()
            self.proc = None

    def __del__(self):
        try:
            self.close()
        except Exception:
            pass


def smtlib_check(store: BoundStore, command: str) -> tuple[bool, Optional[Assignment]]:
    """One-shot check with a fresh solver process."""
    oracle = SmtLibOracle(command)
    try:
        return oracle.solve(store)
    finally:
        oracle.close()


__all__ = [
    "SmtLibOracle", "SolverError", "SolverLaunchError", "SolverProtocolError",
    "SolverUnknownError", "encode", "parse_model", "smtlib_check",
]
