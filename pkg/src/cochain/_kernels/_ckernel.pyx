# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled term-arithmetic kernel; semantics identical to pykernel.py.

Coefficients stay arbitrary-precision Python ints (exactness is the whole
point); the speedup comes from C-level loops, tuple handling and the
removal of interpreter dispatch in the signed-sum/multiply inner loops.
"""

from math import gcd as _gcd

BACKEND = "compiled"


cdef inline tuple _reduce(object num, object den):
    cdef object g
    if den == 0:
        raise ZeroDivisionError("zero denominator in coefficient")
    if num == 0:
        return (0, 1)
    if den < 0:
        num = -num
        den = -den
    g = _gcd(num, den)
    if g > 1:
        num //= g
        den //= g
    return (num, den)


def coeff(num, den):
    """Reduce an integer pair to canonical form (den > 0, gcd 1)."""
    return _reduce(num, den)


def add(dict a, dict b):
    cdef dict out = dict(a)
    cdef tuple exp, cur, val
    cdef object num
    for exp, val in b.items():
        cur = out.get(exp)
        if cur is None:
            out[exp] = val
        else:
            num = cur[0] * val[1] + val[0] * cur[1]
            if num == 0:
                del out[exp]
            else:
                out[exp] = _reduce(num, cur[1] * val[1])
    return out


def scale(dict a, num, den):
    cdef dict out = {}
    cdef tuple exp, val
    if num == 0:
        return out
    for exp, val in a.items():
        out[exp] = _reduce(val[0] * num, val[1] * den)
    return out


def mul(dict a, dict b):
    cdef dict out = {}
    cdef tuple ea, eb, va, vb, cur, exp
    cdef object num, nd
    cdef Py_ssize_t i, n
    for ea, va in a.items():
        n = len(ea)
        for eb, vb in b.items():
            exp = tuple([ea[i] + eb[i] for i in range(n)])
            cur = out.get(exp)
            if cur is None:
                out[exp] = _reduce(va[0] * vb[0], va[1] * vb[1])
            else:
                nd = va[1] * vb[1]
                num = cur[0] * nd + va[0] * vb[0] * cur[1]
                if num == 0:
                    del out[exp]
                else:
                    out[exp] = _reduce(num, cur[1] * nd)
    return out


def diff(dict a, Py_ssize_t axis):
    cdef dict out = {}
    cdef tuple exp, val
    cdef object k
    for exp, val in a.items():
        k = exp[axis]
        if k == 0:
            continue
        out[exp[:axis] + (k - 1,) + exp[axis + 1:]] = _reduce(val[0] * k, val[1])
    return out


def homotopy_scale(dict a, Py_ssize_t k):
    """Divide each monomial of total degree m by (k + m + 1)."""
    cdef dict out = {}
    cdef tuple exp, val
    cdef Py_ssize_t total, i
    for exp, val in a.items():
        total = 0
        for i in range(len(exp)):
            total += exp[i]
        out[exp] = _reduce(val[0], val[1] * (k + total + 1))
    return out


def signed_sum(list maps, list signs, num, den):
    """(num/den) * sum_i signs[i] * maps[i]; the symmetrizer inner loop."""
    cdef dict acc = {}
    cdef dict m
    cdef tuple exp, val, cur
    cdef object n, s
    cdef Py_ssize_t i
    for i in range(len(maps)):
        m = maps[i]
        s = signs[i]
        for exp, val in m.items():
            cur = acc.get(exp)
            if cur is None:
                acc[exp] = (s * val[0], val[1])
            else:
                n = cur[0] * val[1] + s * val[0] * cur[1]
                if n == 0:
                    del acc[exp]
                else:
                    acc[exp] = _reduce(n, cur[1] * val[1])
    if num == 1 and den == 1:
        return acc
    return scale(acc, num, den)


def eval_at(dict a, tuple coords):
    """Evaluate at a rational point given as a tuple of (num, den) pairs."""
    cdef object tn = 0, td = 1, mn, md
    cdef tuple exp, val, c
    cdef Py_ssize_t i, e
    for exp, val in a.items():
        mn = val[0]
        md = val[1]
        for i in range(len(exp)):
            e = exp[i]
            if e:
                c = coords[i]
                mn *= c[0] ** e
                md *= c[1] ** e
        tn = tn * md + mn * td
        td *= md
    return _reduce(tn, td)
