"""Bounded-variable simplex over delta-rationals (pure Python kernel).

Problem layout, shared with the compiled kernel:

* variables ``0 .. n-1`` are free structural columns;
* variable ``n + r`` is defined by row ``r``: ``x[n+r] = sum(rows[r][c] * x[c])``;
* ``lower[j]`` / ``upper[j]`` are ``(std, eps)`` pairs or ``None``.

``solve`` returns ``(feasible, values, pivots)`` where ``values[j]`` is a
``(std, eps)`` pair for every variable when feasible. Pivoting follows
Bland's rule (smallest violating basic variable, smallest eligible entering
variable), so the search terminates.
"""
from __future__ import annotations

from fractions import Fraction

_Z = Fraction(0)


def solve(n, rows, lower, upper):
    m = len(rows)
    nv = n + m
    for j in range(nv):
        lo, hi = lower[j], upper[j]
        if lo is not None and hi is not None and lo > hi:
            return False, None, 0

    val = [None] * nv
    for j in range(n):
        if lower[j] is not None:
            val[j] = lower[j]
        elif upper[j] is not None:
            val[j] = upper[j]
        else:
            val[j] = (_Z, _Z)
    T = [list(r) for r in rows]
    basic = list(range(n, nv))
    nonbasic = list(range(n))
    for r in range(m):
        s = e = _Z
        row = T[r]
        for c in range(n):
            a = row[c]
            if a:
                vs, ve = val[c]
                s += a * vs
                e += a * ve
        val[n + r] = (s, e)

    pivots = 0
    while True:
        pick_r = -1
        pick_b = nv
        for r in range(m):
            b = basic[r]
            if b >= pick_b:
                continue
            v = val[b]
            lo = lower[b]
            if lo is not None and v < lo:
                pick_r, pick_b = r, b
                continue
            hi = upper[b]
            if hi is not None and v > hi:
                pick_r, pick_b = r, b
        if pick_r < 0:
            return True, val, pivots

        row = T[pick_r]
        b = pick_b
        lo = lower[b]
        increase = lo is not None and val[b] < lo
        target = lo if increase else upper[b]

        enter_c = -1
        enter_x = nv
        for c in range(n):
            a = row[c]
            if not a:
                continue
            x = nonbasic[c]
            if x >= enter_x:
                continue
            if (a > 0) == increase:
                hi = upper[x]
                ok = hi is None or val[x] < hi
            else:
                lo = lower[x]
                ok = lo is None or val[x] > lo
            if ok:
                enter_c, enter_x = c, x
        if enter_c < 0:
            return False, None, pivots

        # move b onto its violated bound, compensating with the entering column
        a = row[enter_c]
        vb = val[b]
        ts = (target[0] - vb[0]) / a
        te = (target[1] - vb[1]) / a
        val[b] = target
        vx = val[enter_x]
        val[enter_x] = (vx[0] + ts, vx[1] + te)
        for r in range(m):
            if r == pick_r:
                continue
            k = T[r][enter_c]
            if k:
                bb = basic[r]
                vv = val[bb]
                val[bb] = (vv[0] + k * ts, vv[1] + k * te)

        # pivot: express entering variable through the leaving one
        inv = 1 / a
        new_row = [-coef * inv for coef in row]
        new_row[enter_c] = inv
        T[pick_r] = new_row
        for r in range(m):
            if r == pick_r:
                continue
            other = T[r]
            k = other[enter_c]
            if not k:
                continue
            for c in range(n):
                nc = new_row[c]
                if nc:
                    other[c] += k * nc
            other[enter_c] = k * inv
        basic[pick_r] = enter_x
        nonbasic[enter_c] = b
        pivots += 1
