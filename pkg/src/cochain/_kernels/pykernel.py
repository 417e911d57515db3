"""Pure-Python term-arithmetic kernel.

A *term map* is the raw storage of a multivariate polynomial over the
rationals:

    {exponent_vector: (num, den), ...}

where `exponent_vector` is a tuple of non-negative ints (one per
coordinate), and the coefficient `(num, den)` is a reduced integer pair
with `den > 0` and `num != 0`.  The zero polynomial is the empty dict.

Every function here is pure and returns fresh dicts.  The compiled twin
(`_ckernel.pyx`) implements the same signatures with the same semantics;
`cochain._kernels` selects one of the two at import time.  These functions
are the hot inner loops of the whole package: everything tensorial above
them reduces to signed sums, scalings and derivatives of term maps.
"""

from __future__ import annotations

from math import gcd

BACKEND = "python"


def coeff(num: int, den: int) -> tuple[int, int]:
    """Reduce an integer pair to canonical form (den > 0, gcd 1)."""
    if den == 0:
        raise ZeroDivisionError("zero denominator in coefficient")
    if num == 0:
        return (0, 1)
    if den < 0:
        num, den = -num, -den
    g = gcd(num, den)
    if g > 1:
        num //= g
        den //= g
    return (num, den)


def add(a: dict, b: dict) -> dict:
    out = dict(a)
    for exp, (bn, bd) in b.items():
        cur = out.get(exp)
        if cur is None:
            out[exp] = (bn, bd)
        else:
            an, ad = cur
            num = an * bd + bn * ad
            if num == 0:
                del out[exp]
            else:
                out[exp] = coeff(num, ad * bd)
    return out


def scale(a: dict, num: int, den: int) -> dict:
    if num == 0:
        return {}
    out = {}
    for exp, (an, ad) in a.items():
        out[exp] = coeff(an * num, ad * den)
    return out


def mul(a: dict, b: dict) -> dict:
    out = {}
    for ea, (an, ad) in a.items():
        for eb, (bn, bd) in b.items():
            exp = tuple(x + y for x, y in zip(ea, eb))
            cur = out.get(exp)
            if cur is None:
                out[exp] = coeff(an * bn, ad * bd)
            else:
                cn, cd = cur
                nd = ad * bd
                num = cn * nd + an * bn * cd
                if num == 0:
                    del out[exp]
                else:
                    out[exp] = coeff(num, cd * nd)
    return out


def diff(a: dict, axis: int) -> dict:
    out = {}
    for exp, (an, ad) in a.items():
        k = exp[axis]
        if k == 0:
            continue
        new = exp[:axis] + (k - 1,) + exp[axis + 1 :]
        out[new] = coeff(an * k, ad)
    return out


def homotopy_scale(a: dict, k: int) -> dict:
    """Divide each monomial of total degree m by (k + m + 1)."""
    out = {}
    for exp, (an, ad) in a.items():
        out[exp] = coeff(an, ad * (k + sum(exp) + 1))
    return out


def signed_sum(maps: list, signs: list, num: int, den: int) -> dict:
    """(num/den) * sum_i signs[i] * maps[i]; the symmetrizer inner loop."""
    acc: dict = {}
    for m, s in zip(maps, signs):
        for exp, (an, ad) in m.items():
            cur = acc.get(exp)
            if cur is None:
                acc[exp] = (s * an, ad)
            else:
                cn, cd = cur
                n = cn * ad + s * an * cd
                if n == 0:
                    del acc[exp]
                else:
                    acc[exp] = coeff(n, cd * ad)
    if num == 1 and den == 1:
        return acc
    return scale(acc, num, den)


def eval_at(a: dict, coords: tuple) -> tuple[int, int]:
    """Evaluate at a rational point given as a tuple of (num, den) pairs."""
    tn, td = 0, 1
    for exp, (an, ad) in a.items():
        mn, md = an, ad
        for e, (cn, cd) in zip(exp, coords):
            if e:
                mn *= cn**e
                md *= cd**e
        tn = tn * md + mn * td
        td *= md
    return coeff(tn, td)
