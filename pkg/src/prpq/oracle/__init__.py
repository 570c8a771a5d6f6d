"""Feasibility oracles for bound stores."""
from __future__ import annotations

from typing import Optional

from ..constraints import Assignment, BoundStore
from ._kernel import BACKEND
from .fourier_motzkin import SizeGuardExceeded, fm_feasible, fm_feasible_strict
from .simplex import OracleError, check_feasible, get_model

__all__ = [
    "BACKEND", "Oracle", "OracleError", "SizeGuardExceeded", "check_feasible",
    "fm_feasible", "fm_feasible_strict", "get_model", "make_oracle",
]


class Oracle:
    """Per-evaluation oracle handle that counts feasibility checks."""

    name = "builtin"

    def __init__(self) -> None:
        self.calls = 0

    def check(self, store: BoundStore) -> bool:
        self.calls += 1
        return self._check(store)

    def _check(self, store: BoundStore) -> bool:
        return check_feasible(store)

    def model(self, store: BoundStore) -> Assignment:
        return get_model(store)

    def close(self) -> None:
        pass


def make_oracle(spec: Optional[str] = None) -> Oracle:
    """``builtin`` (default) or ``smtlib:<command line>``."""
    if not spec or spec == "builtin":
        return Oracle()
    if spec.startswith("smtlib:"):
        from .smtlib import SmtLibOracle

        return SmtLibOracle(spec[len("smtlib:"):])
    raise ValueError(f"unknown oracle {spec!r}")
