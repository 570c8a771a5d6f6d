# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Bounded-variable simplex over delta-rationals with 64-bit rationals.

Same problem layout, pivoting rule and return value as ``_simplex_py``.
Every arithmetic step is overflow-checked; on overflow the call raises
``OverflowError`` and the caller replays it on the exact kernel.
"""
from fractions import Fraction

from libc.stdlib cimport free, malloc

cdef extern from *:
    """
    static int prpq_mul_ovf(long long a, long long b, long long *r) { return __builtin_mul_overflow(a, b, r); }
    static int prpq_add_ovf(long long a, long long b, long long *r) { return __builtin_add_overflow(a, b, r); }
    static int prpq_cmp(long long a, long long b, long long c, long long d) {
        __int128 l = (__int128)a * d, r = (__int128)c * b;
        return (l > r) - (l < r);
    }
    """
    int prpq_mul_ovf(long long a, long long b, long long *r) nogil
    int prpq_add_ovf(long long a, long long b, long long *r) nogil
    int prpq_cmp(long long a, long long b, long long c, long long d) nogil

cdef long long LLMIN = -9223372036854775807 - 1

ctypedef struct Q:
    long long n
    long long d

ctypedef struct DQ:
    Q s
    Q e

cdef bint ovf = False


cdef inline long long _gcd(long long a, long long b) noexcept nogil:
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


cdef inline Q qmake(long long n, long long d) noexcept:
    global ovf
    cdef Q r
    cdef long long g
    if n == LLMIN or d == LLMIN:
        ovf = True
        r.n = 0
        r.d = 1
        return r
    if d < 0:
        n = -n
        d = -d
    if n == 0:
        r.n = 0
        r.d = 1
        return r
    g = _gcd(n, d)
    r.n = n // g
    r.d = d // g
    return r


cdef inline Q qzero() noexcept:
    cdef Q r
    r.n = 0
    r.d = 1
    return r


cdef inline Q qneg(Q x) noexcept:
    global ovf
    if x.n == LLMIN:
        ovf = True
    x.n = -x.n
    return x


cdef inline Q qadd(Q x, Q y) noexcept:
    global ovf
    cdef long long g, a, b, s, den
    if x.n == 0:
        return y
    if y.n == 0:
        return x
    g = _gcd(x.d, y.d)
    if prpq_mul_ovf(x.n, y.d // g, &a) or prpq_mul_ovf(y.n, x.d // g, &b) \
            or prpq_add_ovf(a, b, &s) or prpq_mul_ovf(x.d // g, y.d, &den):
        ovf = True
        return qzero()
    return qmake(s, den)


cdef inline Q qsub(Q x, Q y) noexcept:
    return qadd(x, qneg(y))


cdef inline Q qmul(Q x, Q y) noexcept:
    global ovf
    cdef long long g1, g2, n, d
    if x.n == 0 or y.n == 0:
        return qzero()
    g1 = _gcd(x.n, y.d)
    g2 = _gcd(y.n, x.d)
    if prpq_mul_ovf(x.n // g1, y.n // g2, &n) or prpq_mul_ovf(x.d // g2, y.d // g1, &d):
        ovf = True
        return qzero()
    return qmake(n, d)


cdef inline Q qinv(Q x) noexcept:
    return qmake(x.d, x.n)


cdef inline int qcmp(Q x, Q y) noexcept:
    return prpq_cmp(x.n, x.d, y.n, y.d)


cdef inline int dcmp(DQ x, DQ y) noexcept:
    cdef int c = qcmp(x.s, y.s)
    if c:
        return c
    return qcmp(x.e, y.e)


cdef Q qfrom(object f) except *:
    if isinstance(f, int):
        return qmake(f, 1)
    return qmake(f.numerator, f.denominator)


cdef DQ dfrom(object pair) except *:
    cdef DQ r
    r.s = qfrom(pair[0])
    r.e = qfrom(pair[1])
    return r


try:
    Fraction(1, 1, _normalize=False)
    _RAW = True
except TypeError:  # newer interpreters dropped the keyword
    _RAW = False


cdef object qto(Q x):
    # values are already in lowest terms
    if _RAW:
        return Fraction(x.n, x.d, _normalize=False)
    return Fraction(x.n, x.d)


def solve(int n, rows, lower, upper):
    global ovf
    cdef int m = len(rows)
    cdef int nv = n + m
    cdef int r, c, j, b, x, pick_r, pick_b, enter_c, enter_x, bb
    cdef bint increase, ok
    cdef long pivots = 0
    cdef Q a, k, inv, ts, te, nc
    cdef DQ target, vb

    ovf = False
    cdef Q* T = <Q*> malloc(sizeof(Q) * (m * n + 1))
    cdef Q* new_row = <Q*> malloc(sizeof(Q) * (n + 1))
    cdef DQ* lo = <DQ*> malloc(sizeof(DQ) * (nv + 1))
    cdef DQ* hi = <DQ*> malloc(sizeof(DQ) * (nv + 1))
    cdef DQ* val = <DQ*> malloc(sizeof(DQ) * (nv + 1))
    cdef bint* has_lo = <bint*> malloc(sizeof(bint) * (nv + 1))
    cdef bint* has_hi = <bint*> malloc(sizeof(bint) * (nv + 1))
    cdef int* basic = <int*> malloc(sizeof(int) * (m + 1))
    cdef int* nonbasic = <int*> malloc(sizeof(int) * (n + 1))
    if not (T and new_row and lo and hi and val and has_lo and has_hi and basic and nonbasic):
        free(T); free(new_row); free(lo); free(hi); free(val)
        free(has_lo); free(has_hi); free(basic); free(nonbasic)
        raise MemoryError()
    try:
        for j in range(nv):
            has_lo[j] = lower[j] is not None
            has_hi[j] = upper[j] is not None
            if has_lo[j]:
                lo[j] = dfrom(lower[j])
            if has_hi[j]:
                hi[j] = dfrom(upper[j])
        if ovf:
            raise OverflowError("bound outside the 64-bit range")
        for j in range(nv):
            if has_lo[j] and has_hi[j] and dcmp(lo[j], hi[j]) > 0:
                return False, None, 0

        for r in range(m):
            row = rows[r]
            for c in range(n):
                T[r * n + c] = qfrom(row[c])
        for j in range(n):
            if has_lo[j]:
                val[j] = lo[j]
            elif has_hi[j]:
                val[j] = hi[j]
            else:
                val[j].s = qzero()
                val[j].e = qzero()
            nonbasic[j] = j
        for r in range(m):
            basic[r] = n + r
            val[n + r].s = qzero()
            val[n + r].e = qzero()
            for c in range(n):
                a = T[r * n + c]
                if a.n:
                    val[n + r].s = qadd(val[n + r].s, qmul(a, val[c].s))
                    val[n + r].e = qadd(val[n + r].e, qmul(a, val[c].e))
        if ovf:
            raise OverflowError("64-bit rational overflow")

        while True:
            pick_r = -1
            pick_b = nv
            for r in range(m):
                b = basic[r]
                if b >= pick_b:
                    continue
                if has_lo[b] and dcmp(val[b], lo[b]) < 0:
                    pick_r = r
                    pick_b = b
                    continue
                if has_hi[b] and dcmp(val[b], hi[b]) > 0:
                    pick_r = r
                    pick_b = b
            if pick_r < 0:
                out = [(qto(val[j].s), qto(val[j].e)) for j in range(nv)]
                return True, out, pivots

            b = pick_b
            increase = has_lo[b] and dcmp(val[b], lo[b]) < 0
            target = lo[b] if increase else hi[b]

            enter_c = -1
            enter_x = nv
            for c in range(n):
                a = T[pick_r * n + c]
                if not a.n:
                    continue
                x = nonbasic[c]
                if x >= enter_x:
                    continue
                if (a.n > 0) == increase:
                    ok = (not has_hi[x]) or dcmp(val[x], hi[x]) < 0
                else:
                    ok = (not has_lo[x]) or dcmp(val[x], lo[x]) > 0
                if ok:
                    enter_c = c
                    enter_x = x
            if enter_c < 0:
                return False, None, pivots

            a = T[pick_r * n + enter_c]
            vb = val[b]
            inv = qinv(a)
            ts = qmul(qsub(target.s, vb.s), inv)
            te = qmul(qsub(target.e, vb.e), inv)
            val[b] = target
            val[enter_x].s = qadd(val[enter_x].s, ts)
            val[enter_x].e = qadd(val[enter_x].e, te)
            for r in range(m):
                if r == pick_r:
                    continue
                k = T[r * n + enter_c]
                if k.n:
                    bb = basic[r]
                    val[bb].s = qadd(val[bb].s, qmul(k, ts))
                    val[bb].e = qadd(val[bb].e, qmul(k, te))

            for c in range(n):
                new_row[c] = qneg(qmul(T[pick_r * n + c], inv))
            new_row[enter_c] = inv
            for c in range(n):
                T[pick_r * n + c] = new_row[c]
            for r in range(m):
                if r == pick_r:
                    continue
                k = T[r * n + enter_c]
                if not k.n:
                    continue
                for c in range(n):
                    nc = new_row[c]
                    if nc.n and c != enter_c:
                        T[r * n + c] = qadd(T[r * n + c], qmul(k, nc))
                T[r * n + enter_c] = qmul(k, inv)
            basic[pick_r] = enter_x
            nonbasic[enter_c] = b
            pivots += 1
            if ovf:
                raise OverflowError("64-bit rational overflow")
    finally:
        free(T); free(new_row); free(lo); free(hi); free(val)
        free(has_lo); free(has_hi); free(basic); free(nonbasic)
