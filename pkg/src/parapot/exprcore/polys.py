"""Sparse multivariate polynomials over Q in named symbols.

This is the bottom layer of the expression engine: plain polynomials in the
variables t, x, free constants (parameters) and jet symbols, with exact
Fraction coefficients.  Kernels (fractional powers, exponentials) live one
layer up, in expr.py.

A polynomial is a dict {monomial: Fraction}; a monomial is a sorted tuple of
(symbol, exponent) pairs with positive integer exponents.  The zero
polynomial is the empty dict.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as _igcd

# ---------------------------------------------------------------------------
# symbols

_JET_FAMILIES = {"u": 0, "v": 1, "f": 2, "w": 3}


def sym_rank(name: str):
    """Total order on symbols: t < x < parameters < jet symbols."""
    if name == "t":
        return (0, 0, "", 0)
    if name == "x":
        return (0, 1, "", 0)
    fam = jet_family(name)
    if fam is not None:
        return (2, _JET_FAMILIES[fam[0]], fam[0], fam[1])
    return (1, 0, name, 0)


def jet_family(name: str):
    """Return (family, index) if `name` is a jet symbol like u0, v2, else None."""
    if len(name) >= 2 and name[0] in _JET_FAMILIES and name[1:].isdigit():
        return (name[0], int(name[1:]))
    return None


def is_jet(name: str) -> bool:
    return jet_family(name) is not None


def mono_key(mono):
    return (sum(e for _, e in mono), tuple((sym_rank(s), e) for s, e in mono))


def mono_mul(m1, m2):
    if not m1:
        return m2
    if not m2:
        return m1
    d = dict(m1)
    for s, e in m2:
        d[s] = d.get(s, 0) + e
    return freeze_mono(d)


def freeze_mono(d):
    return tuple(sorted(((s, e) for s, e in d.items() if e), key=lambda p: sym_rank(p[0])))


# ---------------------------------------------------------------------------
# polynomial arithmetic

ZERO = {}
ONE = {(): Fraction(1)}


def poly_const(c) -> dict:
    c = Fraction(c)
    return {(): c} if c else {}


def poly_sym(name: str) -> dict:
    return {((name, 1),): Fraction(1)}


def poly_add(p, q):
    if not p:
        return dict(q)
    if not q:
        return dict(p)
    r = dict(p)
    for m, c in q.items():
        nc = r.get(m, Fraction(0)) + c
        if nc:
            r[m] = nc
        else:
            r.pop(m, None)
    return r


def poly_neg(p):
    return {m: -c for m, c in p.items()}


def poly_sub(p, q):
    return poly_add(p, poly_neg(q))


def poly_mul(p, q):
    if not p or not q:
        return {}
    r = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = mono_mul(m1, m2)
            nc = r.get(m, Fraction(0)) + c1 * c2
            if nc:
                r[m] = nc
            else:
                r.pop(m, None)
    return r


def poly_scale(p, c):
    c = Fraction(c)
    if not c:
        return {}
    return {m: cc * c for m, cc in p.items()}


def poly_pow(p, n: int):
    if n < 0:
        raise ValueError("negative power of a polynomial")
    r = dict(ONE)
    b = dict(p)
    while n:
        if n & 1:
            r = poly_mul(r, b)
        b = poly_mul(b, b) if n > 1 else b
        n >>= 1
    return r


def poly_diff(p, sym: str):
    r = {}
    for m, c in p.items():
        for i, (s, e) in enumerate(m):
            if s == sym:
                nm = list(m)
                if e == 1:
                    nm.pop(i)
                else:
                    nm[i] = (s, e - 1)
                nm = tuple(nm)
                nc = r.get(nm, Fraction(0)) + c * e
                if nc:
                    r[nm] = nc
                else:
                    r.pop(nm, None)
                break
    return r


def poly_symbols(p):
    syms = set()
    for m in p:
        for s, _ in m:
            syms.add(s)
    return syms


def poly_degree(p, sym: str) -> int:
    d = 0
    for m in p:
        for s, e in m:
            if s == sym:
                d = max(d, e)
    return d


def poly_eval_partial(p, bindings):
    """Substitute symbols by Fractions; unbound symbols stay symbolic."""
    r = {}
    for m, c in p.items():
        keep = []
        val = c
        for s, e in m:
            if s in bindings:
                val *= Fraction(bindings[s]) ** e
            else:
                keep.append((s, e))
        if not val:
            continue
        km = tuple(keep)
        nc = r.get(km, Fraction(0)) + val
        if nc:
            r[km] = nc
        else:
            r.pop(km, None)
    return r


def freeze_poly(p):
    return tuple(sorted(((m, (c.numerator, c.denominator)) for m, c in p.items()),
                        key=lambda it: mono_key(it[0])))


def thaw_poly(fp):
    return {m: Fraction(n, d) for m, (n, d) in fp}


# ---------------------------------------------------------------------------
# content, primitive parts, gcd

def poly_content(p) -> Fraction:
    """Positive rational content: gcd of numerators / lcm of denominators."""
    if not p:
        return Fraction(0)
    num = 0
    den = 1
    for c in p.values():
        num = _igcd(num, abs(c.numerator))
        den = den * c.denominator // _igcd(den, c.denominator)
    return Fraction(num, den)


def poly_lead_mono(p):
    return max(p, key=mono_key)


def poly_normalize_sign(p):
    """Scale by +-1 so the leading coefficient is positive."""
    if not p:
        return p
    if p[poly_lead_mono(p)] < 0:
        return poly_neg(p)
    return p


def poly_primitive(p):
    """Return (content_with_sign, primitive part); primitive has positive
    leading coefficient and integer coprime coefficients."""
    if not p:
        return Fraction(0), {}
    cont = poly_content(p)
    if p[poly_lead_mono(p)] < 0:
        cont = -cont
    return cont, {m: c / cont for m, c in p.items()}


def _mono_div(m1, m2):
    """m1 / m2 or None if not divisible."""
    d = dict(m1)
    for s, e in m2:
        ne = d.get(s, 0) - e
        if ne < 0:
            return None
        d[s] = ne
    return freeze_mono(d)


def poly_divexact(p, q):
    """Exact division p / q; raises ValueError if not exact."""
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    if not p:
        return {}
    p = dict(p)
    qlm = poly_lead_mono(q)
    qlc = q[qlm]
    out = {}
    while p:
        plm = poly_lead_mono(p)
        m = _mono_div(plm, qlm)
        if m is None:
            raise ValueError("inexact polynomial division")
        c = p[plm] / qlc
        out[m] = c
        p = poly_sub(p, poly_mul({m: c}, q))
    return out


def _poly_to_univar(p, sym):
    """View p as a univariate polynomial in `sym` with poly coefficients.
    Returns dict {degree: coeff-poly}."""
    co = {}
    for m, c in p.items():
        deg = 0
        rest = []
        for s, e in m:
            if s == sym:
                deg = e
            else:
                rest.append((s, e))
        r = co.setdefault(deg, {})
        rm = tuple(rest)
        nc = r.get(rm, Fraction(0)) + c
        if nc:
            r[rm] = nc
        else:
            r.pop(rm, None)
    return {d: c for d, c in co.items() if c}


def _univar_to_poly(co, sym):
    p = {}
    for d, cp in co.items():
        mult = {((sym, d),): Fraction(1)} if d else dict(ONE)
        p = poly_add(p, poly_mul(cp, mult))
    return p


def _poly_gcd_many(polys):
    g = {}
    for p in polys:
        g = poly_gcd(g, p)
        if g == dict(ONE):
            return g
    return g


def poly_gcd(p, q):
    """GCD of multivariate polynomials over Q, primitive with positive
    leading coefficient.  Primitive PRS; desk-scale inputs only."""
    if not p:
        _, pp = poly_primitive(q)
        return pp if q else {}
    if not q:
        _, pp = poly_primitive(p)
        return pp
    psyms = poly_symbols(p) | poly_symbols(q)
    if not psyms:
        return dict(ONE)
    sym = min(psyms, key=sym_rank)
    pu = _poly_to_univar(p, sym)
    qu = _poly_to_univar(q, sym)
    pcont = _poly_gcd_many(list(pu.values()))
    qcont = _poly_gcd_many(list(qu.values()))
    cont = poly_gcd(pcont, qcont)
    pp = {d: poly_divexact(c, pcont) for d, c in pu.items()} if pcont else pu
    qp = {d: poly_divexact(c, qcont) for d, c in qu.items()} if qcont else qu
    # primitive Euclid on univariate-with-poly-coefficients
    a, b = (pp, qp) if max(pp) >= max(qp) else (qp, pp)
    while b:
        r = _pseudo_rem(a, b, sym)
        if not r:
            g = b
            break
        # make remainder primitive in the coefficient ring
        rcont = _poly_gcd_many(list(r.values()))
        if rcont:
            r = {d: poly_divexact(c, rcont) for d, c in r.items()}
        a, b = b, r
    else:
        g = a
    gp = _univar_to_poly(g, sym)
    result = poly_mul(cont, gp)
    _, prim = poly_primitive(result)
    return prim


def _pseudo_rem(a, b, sym):
    """Pseudo-remainder of univariate-in-`sym` polynomials with polynomial
    coefficients (dicts degree -> coeff poly)."""
    da, db = max(a), max(b)
    if da < db:
        return {d: dict(c) for d, c in a.items()}
    lb = b[db]
    r = {d: dict(c) for d, c in a.items()}
    while r and max(r) >= db:
        dr = max(r)
        lr = r[dr]
        shift = dr - db
        nr = {}
        for d, c in r.items():
            nr[d] = poly_mul(c, lb)
        for d, c in b.items():
            nd = d + shift
            nr[nd] = poly_sub(nr.get(nd, {}), poly_mul(c, lr))
        r = {d: c for d, c in nr.items() if c}
    return r


# ---------------------------------------------------------------------------
# canonical fraction of polynomials (used for exp-kernel arguments)

def ratfunc_normalize(num, den):
    """Canonical form of num/den: gcd removed, den integer-primitive with
    positive leading coefficient."""
    if not den:
        raise ZeroDivisionError("zero denominator")
    if not num:
        return {}, dict(ONE)
    g = poly_gcd(num, den)
    if g != dict(ONE):
        num = poly_divexact(num, g)
        den = poly_divexact(den, g)
    dcont, dprim = poly_primitive(den)
    num = poly_scale(num, 1 / dcont)
    return num, dprim


def ratfunc_add(a, b):
    (n1, d1), (n2, d2) = a, b
    return ratfunc_normalize(poly_add(poly_mul(n1, d2), poly_mul(n2, d1)),
                             poly_mul(d1, d2))


def ratfunc_scale(a, c):
    n, d = a
    return ratfunc_normalize(poly_scale(n, c), d)


def ratfunc_is_zero(a):
    return not a[0]
