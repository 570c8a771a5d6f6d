"""Selects the simplex kernel at import time.

The compiled kernel works on 64-bit rationals and raises ``OverflowError``
when a value leaves that range; the call is then replayed on the exact
pure-Python kernel. Set ``PRPQ_PURE_PYTHON=1`` to skip the compiled kernel.
"""
from __future__ import annotations

import os

from ._simplex_py import solve as solve_py

try:
    from ._simplex_c import solve as solve_c  # type: ignore[import-not-found]
except ImportError:  # extension not built
    solve_c = None

if os.environ.get("PRPQ_PURE_PYTHON"):
    solve_c = None

BACKEND = "cython" if solve_c is not None else "python"


def solve(n, rows, lower, upper):
    if solve_c is not None:
        try:
            return solve_c(n, rows, lower, upper)
        except OverflowError:
            pass
    return solve_py(n, rows, lower, upper)
