"""Exact symbolic expressions in t and x over Q(parameters).

The expression class is: rational functions of (t, x, parameters, jet
symbols), extended by finitely many power factors base^q (base a symbol,
prime integer or polynomial; q rational or a rational multiple of a named
parameter) and exponential kernels exp(R) with R a rational function.

Representation: an Expr is a canonical fraction num/den of "generalized
polynomials".  A generalized polynomial is a sum of terms; each term is a
Fraction coefficient times a monomial in the symbols, times a sorted tuple
of power tags, times at most one exp tag.  Two expressions are equal as
functions on a common domain (x > 0 where fractional powers of x occur)
iff their canonical forms are structurally equal.

Soundness of the canonical form rests on the independence of distinct
tags: monomials times exp of distinct rational functions times distinct
fractional powers are linearly independent over the rational-function
field.
"""

from __future__ import annotations

from fractions import Fraction

from . import polys
from .polys import (
    Fraction as _F,  # noqa: F401  (re-export convenience)
    ONE,
    freeze_mono,
    freeze_poly,
    is_jet,
    mono_key,
    poly_add,
    poly_const,
    poly_diff,
    poly_divexact,
    poly_gcd,
    poly_mul,
    poly_neg,
    poly_pow,
    poly_primitive,
    poly_scale,
    poly_sym,
    poly_symbols,
    ratfunc_normalize,
    sym_rank,
    thaw_poly,
)


class ExprError(Exception):
    """Base class for expression-engine errors."""


class ClassError(ExprError):
    """The result of an operation leaves the supported expression class."""


class PoleError(ExprError):
    """Evaluation at a pole of the expression."""


class ZeroTestError(ExprError):
    """Structural and numeric zero tests disagree (normalization bug)."""


# Power-tag base kinds
_KIND_INT = 0   # prime integer base
_KIND_SYM = 1   # single symbol base ('t', 'x', parameter)
_KIND_POLY = 2  # multi-term polynomial base (frozen, primitive, jet-free)


def _powkey_sort(item):
    (kind, data, direction), q = item
    if kind == _KIND_INT:
        ds = (0, str(data), "")
    elif kind == _KIND_SYM:
        ds = (1, "", data)
    else:
        ds = (2, repr(data), "")
    return (kind, ds, direction or "", q)


def _exp_sort(exparg):
    if exparg is None:
        return ()
    num, den = exparg
    return tuple((mono_key(m), nd) for m, nd in num) + (("/",),) + tuple(
        (mono_key(m), nd) for m, nd in den)


def _term_sort(tk):
    mono, pows, exparg = tk
    return (mono_key(mono), tuple(_powkey_sort(p) for p in pows), _exp_sort(exparg))


def _prime_factors(n: int):
    n = abs(n)
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _normalize_raw_term(coeff, mono, pows, exparg):
    """Normalize one term in place: fold integer parts of power tags.

    mono: dict sym -> int (may go negative: Laurent), pows: dict powkey ->
    Fraction, exparg: canonical frozen ratfunc or None.  Returns
    (coeff, frozen_mono, frozen_pows, exparg, expand, shrink) where expand /
    shrink are lists of (base_poly_dict, n) factors the caller must multiply
    into the numerator / denominator.
    """
    coeff = Fraction(coeff)
    if not coeff:
        return None
    out_pows = {}
    expand = []
    shrink = []
    for key, q in pows.items():
        if not q:
            continue
        kind, data, direction = key
        if direction is None:
            n = q.numerator // q.denominator  # floor
            r = q - n
            if n:
                if kind == _KIND_SYM:
                    mono[data] = mono.get(data, 0) + n
                elif kind == _KIND_INT:
                    coeff *= Fraction(data) ** n
                else:
                    if n > 0:
                        expand.append((thaw_poly(data), n))
                    else:
                        shrink.append((thaw_poly(data), -n))
            if r:
                out_pows[key] = r
        else:
            out_pows[key] = q
    mono_f = freeze_mono(mono)
    pows_f = tuple(sorted(out_pows.items(), key=_powkey_sort))
    return coeff, mono_f, pows_f, exparg, expand, shrink


def _genpoly_from_raw(raw_terms):
    """Assemble raw terms into (GenPoly, extra_denominator GenPoly)."""
    # First pass: collect denominator requests.
    normd = []
    den_factors = []  # list of (frozen_base, power) needed overall
    for rt in raw_terms:
        nt = _normalize_raw_term(*rt)
        if nt is None:
            continue
        normd.append(nt)
        for base, n in nt[5]:
            den_factors.append((freeze_poly(base), n))
    if den_factors:
        need = {}
        for fb, n in den_factors:
            need[fb] = max(need.get(fb, 0), n)
        extra_den = dict(ONE_GP)
        for fb, n in need.items():
            extra_den = _gp_mul_plain(extra_den, _gp_from_basepoly(poly_pow(thaw_poly(fb), n)))
    else:
        need = {}
        extra_den = dict(ONE_GP)
    out = {}
    for coeff, mono_f, pows_f, exparg, expand, shrink in normd:
        piece = {(mono_f, pows_f, exparg): coeff}
        for base, n in expand:
            piece = _gp_mul_plain(piece, _gp_from_basepoly(poly_pow(base, n)))
        deficit = dict(need)
        for base, n in shrink:
            fb = freeze_poly(base)
            deficit[fb] = deficit.get(fb, 0) - n
        for fb, n in deficit.items():
            if n > 0:
                piece = _gp_mul_plain(piece, _gp_from_basepoly(poly_pow(thaw_poly(fb), n)))
        for tk, c in piece.items():
            nc = out.get(tk, Fraction(0)) + c
            if nc:
                out[tk] = nc
            else:
                out.pop(tk, None)
    return out, extra_den


def _gp_from_basepoly(p):
    return {(m, (), None): c for m, c in p.items()}


ZERO_GP = {}
ONE_GP = {((), (), None): Fraction(1)}


def _exp_add(a, b):
    if a is None:
        return b
    if b is None:
        return a
    num, den = polys.ratfunc_add((thaw_poly(a[0]), thaw_poly(a[1])),
                                 (thaw_poly(b[0]), thaw_poly(b[1])))
    if not num:
        return None
    return (freeze_poly(num), freeze_poly(den))


def _exp_neg(a):
    if a is None:
        return None
    return (freeze_poly(poly_neg(thaw_poly(a[0]))), a[1])


def _gp_mul_plain(p, q):
    """Multiply two generalized polynomials whose tags need no refolding
    beyond tag addition (used internally; full refolding in gp_mul)."""
    out = {}
    raw = []
    for (m1, pw1, e1), c1 in p.items():
        for (m2, pw2, e2), c2 in q.items():
            mono = dict(m1)
            for s, e in m2:
                mono[s] = mono.get(s, 0) + e
            pows = dict(pw1)
            for k, v in pw2:
                pows[k] = pows.get(k, Fraction(0)) + v
            raw.append((c1 * c2, mono, pows, _exp_add(e1, e2)))
    gp, extra = _genpoly_from_raw(raw)
    if extra != ONE_GP:
        raise ExprError("internal: unexpected denominator during plain multiply")
    for tk, c in gp.items():
        nc = out.get(tk, Fraction(0)) + c
        if nc:
            out[tk] = nc
        else:
            out.pop(tk, None)
    return out


def gp_add(p, q):
    out = dict(p)
    for tk, c in q.items():
        nc = out.get(tk, Fraction(0)) + c
        if nc:
            out[tk] = nc
        else:
            out.pop(tk, None)
    return out


def gp_neg(p):
    return {tk: -c for tk, c in p.items()}


def gp_scale(p, c):
    c = Fraction(c)
    if not c:
        return {}
    return {tk: cc * c for tk, cc in p.items()}


def gp_mul(p, q):
    """Multiply generalized polynomials; returns (result, extra_den)."""
    raw = []
    for (m1, pw1, e1), c1 in p.items():
        for (m2, pw2, e2), c2 in q.items():
            mono = dict(m1)
            for s, e in m2:
                mono[s] = mono.get(s, 0) + e
            pows = dict(pw1)
            for k, v in pw2:
                pows[k] = pows.get(k, Fraction(0)) + v
            raw.append((c1 * c2, mono, pows, _exp_add(e1, e2)))
    return _genpoly_from_raw(raw)


# ---------------------------------------------------------------------------
# fraction reduction

def _ray_decompose(args):
    """Greedy Q-basis for a list of frozen ratfunc exp-args.

    Returns (basis, coords) with coords[i] the list of (basis_index,
    Fraction) for args[i].
    """
    basis = []       # list of (num_poly, den_poly) thawed
    basis_frozen = []
    coords = []
    for fa in args:
        R = (thaw_poly(fa[0]), thaw_poly(fa[1]))
        co = _express_ratfunc(R, basis)
        if co is None:
            basis.append(R)
            basis_frozen.append(fa)
            co = [(len(basis) - 1, Fraction(1))]
        coords.append(co)
    return basis, coords


def _express_ratfunc(R, basis):
    """Express ratfunc R as a Q-combination of basis ratfuncs, or None."""
    if not basis:
        return None
    den = dict(R[1])
    for _, d in basis:
        den = poly_mul_reduced(den, d)
    vecs = []
    for n, d in basis + [R]:
        q = poly_divexact(den, d)
        vecs.append(poly_mul(n, q))
    monos = sorted({m for v in vecs for m in v}, key=mono_key)
    rows = [[v.get(m, Fraction(0)) for v in vecs] for m in monos]
    # Solve rows * (c, -1)^T = 0 for c: Gaussian elimination on the
    # coefficient matrix [basis | R].
    k = len(basis)
    mat = [row[:] for row in rows]
    piv_cols = []
    r = 0
    for col in range(k):
        piv = None
        for i in range(r, len(mat)):
            if mat[i][col]:
                piv = i
                break
        if piv is None:
            piv_cols.append(None)
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        pv = mat[r][col]
        mat[r] = [v / pv for v in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][col]:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        piv_cols.append(r)
        r += 1
    sol = [Fraction(0)] * k
    for col in range(k):
        if piv_cols[col] is not None:
            sol[col] = mat[piv_cols[col]][k]
    # verify
    for row in rows:
        if sum(c * s for c, s in zip(row[:k], sol)) != row[k]:
            return None
    return [(i, c) for i, c in enumerate(sol) if c]


def poly_mul_reduced(p, q):
    """Product p*q divided by gcd(p, q) -- an lcm-ish helper."""
    g = poly_gcd(p, q)
    if g != dict(ONE):
        q = poly_divexact(q, g)
    return poly_mul(p, q)


def _collect_tag_directions(gps):
    """Scan generalized polynomials for power-tag directions and exp rays."""
    pow_dirs = {}
    exp_args = []
    exp_seen = {}
    for gp in gps:
        for (mono, pows, exparg) in gp:
            for key, q in pows:
                pow_dirs.setdefault(key, []).append(q)
            if exparg is not None and exparg not in exp_seen:
                exp_seen[exparg] = len(exp_args)
                exp_args.append(exparg)
    return pow_dirs, exp_args, exp_seen


def _reduce_fraction(num, den):
    """Full canonical reduction of a generalized-polynomial fraction."""
    if not den:
        raise ZeroDivisionError("zero denominator in expression")
    if not num:
        den = dict(ONE_GP)
        return {}, den

    # --- shift power tags so each direction has min coordinate 0 -------
    pow_dirs, exp_args, exp_seen = _collect_tag_directions((num, den))
    shifts = {}
    for key, vals in pow_dirs.items():
        present_everywhere = all(
            any(k == key for k, _ in pows)
            for gp in (num, den) for (_, pows, _) in gp
        )
        m = min(vals) if present_everywhere else min(min(vals), Fraction(0))
        if m:
            shifts[key] = m
    basis, coords = _ray_decompose(exp_args)
    nrays = len(basis)
    ray_shift = [Fraction(0)] * nrays
    if nrays:
        mins = [None] * nrays
        for gp in (num, den):
            for (_, _, exparg) in gp:
                vec = [Fraction(0)] * nrays
                if exparg is not None:
                    for i, c in coords[exp_seen[exparg]]:
                        vec[i] = c
                for i in range(nrays):
                    mins[i] = vec[i] if mins[i] is None else min(mins[i], vec[i])
        ray_shift = [m or Fraction(0) for m in mins]

    def apply_shifts(gp):
        if not shifts and not any(ray_shift):
            return gp
        raw = []
        for (mono, pows, exparg), c in gp.items():
            pd = dict(pows)
            for key, m in shifts.items():
                pd[key] = pd.get(key, Fraction(0)) - m
            if any(ray_shift):
                vec = [Fraction(0)] * nrays
                if exparg is not None:
                    for i, cc in coords[exp_seen[exparg]]:
                        vec[i] = cc
                newarg = None
                acc = ({}, dict(ONE))
                for i in range(nrays):
                    v = vec[i] - ray_shift[i]
                    if v:
                        acc = polys.ratfunc_add(acc, (poly_scale(basis[i][0], v), basis[i][1]))
                if acc[0]:
                    newarg = (freeze_poly(acc[0]), freeze_poly(acc[1]))
                exparg = newarg
            raw.append((c, dict(mono), pd, exparg))
        gp2, extra = _genpoly_from_raw(raw)
        if extra != ONE_GP:
            raise ExprError("internal: shift produced denominator")
        return gp2

    num = apply_shifts(num)
    den = apply_shifts(den)

    # --- shift Laurent monomials so min exponent per symbol is 0 -------
    # For each symbol: its min exponent within a generalized polynomial is
    # taken over all terms (0 for terms lacking it); the shift uses the min
    # of the numerator and denominator values, cancelling common monomial
    # content and clearing negative exponents in one step.
    def _gp_sym_min(gp):
        syms = {s for (mono, _, _) in gp for s, _ in mono}
        mins = {}
        for s in syms:
            vals = []
            for (mono, _, _) in gp:
                vals.append(dict(mono).get(s, 0))
            mins[s] = min(vals)
        return mins

    nmin = _gp_sym_min(num)
    dmin = _gp_sym_min(den)
    sym_min = {}
    for s in set(nmin) | set(dmin):
        sym_min[s] = min(nmin.get(s, 0), dmin.get(s, 0))

    def shift_monos(gp):
        if not any(sym_min.values()):
            return gp
        out = {}
        for (mono, pows, exparg), c in gp.items():
            d = dict(mono)
            for s, m in sym_min.items():
                if m:
                    d[s] = d.get(s, 0) - m
            out[(freeze_mono(d), pows, exparg)] = c
        return out

    if sym_min:
        num = shift_monos(num)
        den = shift_monos(den)

    # --- gcd cancellation in a temporary free polynomial ring ----------
    num, den = _cancel_gcd(num, den)

    # --- scale so den is integer-primitive with positive leading term --
    dkeys = sorted(den, key=_term_sort)
    lead = dkeys[-1]
    coeffs = list(den.values())
    from math import gcd as ig
    cn = 0
    cd = 1
    for c in coeffs:
        cn = ig(cn, abs(c.numerator))
        cd = cd * c.denominator // ig(cd, c.denominator)
    scale = Fraction(cn, cd)
    if den[lead] < 0:
        scale = -scale
    if scale != 1:
        den = {tk: c / scale for tk, c in den.items()}
        num = {tk: c / scale for tk, c in num.items()}
    return num, den


def _cancel_gcd(num, den):
    """Cancel the polynomial gcd of num and den via a temporary ring."""
    if den == ONE_GP:
        return num, den
    if len(num) == 1 and len(den) == 1:
        # pure monomial/tag quotient was already handled by the shifts
        return num, den
    pow_dirs, exp_args, exp_seen = _collect_tag_directions((num, den))
    basis, coords = _ray_decompose(exp_args)
    # lcm of denominators per direction
    from math import gcd as ig

    def _lcm_den(vals):
        d = 1
        for v in vals:
            d = d * v.denominator // ig(d, v.denominator)
        return d

    pow_den = {key: _lcm_den(vals) for key, vals in pow_dirs.items()}
    ray_den = [1] * len(basis)
    for fa in exp_args:
        for i, c in coords[exp_seen[fa]]:
            ray_den[i] = ray_den[i] * c.denominator // ig(ray_den[i], c.denominator)

    tmp_names = {}

    def tmp_name(tag):
        if tag not in tmp_names:
            tmp_names[tag] = "@g%d" % len(tmp_names)
        return tmp_names[tag]

    def to_ring(gp):
        p = {}
        for (mono, pows, exparg), c in gp.items():
            d = {}
            for s, e in mono:
                key = (_KIND_SYM, s, None)
                if key in pow_den:
                    d[tmp_name(("p", key))] = d.get(tmp_name(("p", key)), 0) + e * pow_den[key]
                else:
                    d[s] = d.get(s, 0) + e
            for key, q in pows:
                z = q * pow_den[key]
                assert z.denominator == 1
                nm = tmp_name(("p", key))
                d[nm] = d.get(nm, 0) + int(z)
            if exparg is not None:
                for i, cc in coords[exp_seen[exparg]]:
                    z = cc * ray_den[i]
                    assert z.denominator == 1
                    nm = tmp_name(("e", i))
                    d[nm] = d.get(nm, 0) + int(z)
            if any(v < 0 for v in d.values()):
                raise ExprError("internal: negative exponent after shifting")
            m = freeze_mono(d)
            p[m] = p.get(m, Fraction(0)) + c
        return {m: c for m, c in p.items() if c}

    pn = to_ring(num)
    pd = to_ring(den)
    g = poly_gcd(pn, pd)
    if g == dict(ONE):
        return num, den
    pn = poly_divexact(pn, g)
    pd = poly_divexact(pd, g)

    inv_names = {v: k for k, v in tmp_names.items()}

    def from_ring(p):
        out = {}
        for m, c in p.items():
            mono = {}
            pows = {}
            vec = [Fraction(0)] * len(basis)
            for s, e in m:
                if s in inv_names:
                    tag = inv_names[s]
                    if tag[0] == "p":
                        key = tag[1]
                        q = Fraction(e, pow_den[key])
                        kind, data, direction = key
                        if direction is None and kind == _KIND_SYM:
                            n = q.numerator // q.denominator
                            r = q - n
                            if n:
                                mono[data] = mono.get(data, 0) + n
                            if r:
                                pows[key] = pows.get(key, Fraction(0)) + r
                        else:
                            pows[key] = pows.get(key, Fraction(0)) + q
                    else:
                        vec[tag[1]] += Fraction(e, ray_den[tag[1]])
                else:
                    mono[s] = mono.get(s, 0) + e
            exparg = None
            acc = ({}, dict(ONE))
            for i, v in enumerate(vec):
                if v:
                    acc = polys.ratfunc_add(acc, (poly_scale(basis[i][0], v), basis[i][1]))
            if acc[0]:
                exparg = (freeze_poly(acc[0]), freeze_poly(acc[1]))
            raw = _normalize_raw_term(c, mono, pows, exparg)
            assert raw is not None and not raw[4] and not raw[5]
            tk = (raw[1], raw[2], raw[3])
            out[tk] = out.get(tk, Fraction(0)) + raw[0]
        return {tk: c for tk, c in out.items() if c}

    return from_ring(pn), from_ring(pd)


# ---------------------------------------------------------------------------
# the Expr class

class Expr:
    """Immutable exact symbolic expression; see module docstring."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den, _reduced=False):
        if not _reduced:
            num, den = _reduce_fraction(num, den)
        self.num = num
        self.den = den
        self._hash = None

    # -- constructors ------------------------------------------------
    @staticmethod
    def number(c) -> "Expr":
        c = Fraction(c)
        return Expr({((), (), None): c} if c else {}, dict(ONE_GP), _reduced=True)

    @staticmethod
    def symbol(name: str) -> "Expr":
        return Expr({(((name, 1),), (), None): Fraction(1)}, dict(ONE_GP), _reduced=True)

    @staticmethod
    def exp(arg: "Expr") -> "Expr":
        arg = as_expr(arg)
        br = arg.as_base_ratfunc()
        if br is None:
            raise ClassError("exp argument must be a rational function of the symbols")
        n, d = br
        if not n:
            return Expr.number(1)
        if any(is_jet(s) for s in poly_symbols(n) | poly_symbols(d)):
            raise ClassError("exp argument must not contain jet symbols")
        tag = (freeze_poly(n), freeze_poly(d))
        return Expr({((), (), tag): Fraction(1)}, dict(ONE_GP), _reduced=True)

    # -- basic structure ----------------------------------------------
    def is_zero_structural(self) -> bool:
        return not self.num

    def is_one(self) -> bool:
        return self.num == ONE_GP and self.den == ONE_GP

    def key(self):
        return (tuple(sorted(((tk, (c.numerator, c.denominator))
                              for tk, c in self.num.items()),
                             key=lambda it: _term_sort(it[0]))),
                tuple(sorted(((tk, (c.numerator, c.denominator))
                              for tk, c in self.den.items()),
                             key=lambda it: _term_sort(it[0]))))

    def __eq__(self, other):
        if not isinstance(other, Expr):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.key())
        return self._hash

    def __repr__(self):
        from .parse import to_string
        return "Expr(%s)" % to_string(self)

    def __str__(self):
        from .parse import to_string
        return to_string(self)

    def __bool__(self):
        return bool(self.num)

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other):
        other = as_expr(other)
        n1d2, e1 = gp_mul(self.num, other.den)
        n2d1, e2 = gp_mul(other.num, self.den)
        dd, e3 = gp_mul(self.den, other.den)
        if e1 == ONE_GP and e2 == ONE_GP and e3 == ONE_GP:
            return Expr(gp_add(n1d2, n2d1), dd)
        # rare path: tag folding produced denominator factors; fold them in
        a = _mul_many(n1d2, e2, e3)
        b = _mul_many(n2d1, e1, e3)
        d = _mul_many(dd, e1, e2, e3)
        if a[1] != ONE_GP or b[1] != ONE_GP or d[1] != ONE_GP:
            raise ExprError("internal: nested denominator folding")
        return Expr(gp_add(a[0], b[0]), d[0])

    __radd__ = __add__

    def __neg__(self):
        return Expr(gp_neg(self.num), dict(self.den), _reduced=True)

    def __sub__(self, other):
        return self + (-as_expr(other))

    def __rsub__(self, other):
        return as_expr(other) + (-self)

    def __mul__(self, other):
        other = as_expr(other)
        nn, e1 = gp_mul(self.num, other.num)
        dd, e2 = gp_mul(self.den, other.den)
        num = _mul_many(nn, e2)[0]
        den = _mul_many(dd, e1)[0]
        return Expr(num, den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = as_expr(other)
        if not other.num:
            raise ZeroDivisionError("division by the zero expression")
        nn, e1 = gp_mul(self.num, other.den)
        dd, e2 = gp_mul(self.den, other.num)
        return Expr(_mul_many(nn, e2)[0], _mul_many(dd, e1)[0])

    def __rtruediv__(self, other):
        return as_expr(other) / self

    def __pow__(self, q):
        if isinstance(q, int):
            return self._int_pow(q)
        q = Fraction(q)
        if q.denominator == 1:
            return self._int_pow(q.numerator)
        return self.fractional_power(q)

    def _int_pow(self, n: int):
        if n == 0:
            return Expr.number(1)
        if n < 0:
            return Expr.number(1) / self._int_pow(-n)
        result = Expr.number(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def fractional_power(self, q) -> "Expr":
        """base^q for rational non-integer q; base must be a single term
        with positive rational coefficient, or a tag-free polynomial (then
        it becomes a polynomial-base power factor)."""
        q = Fraction(q)
        if len(self.num) > 1 or len(self.den) > 1:
            return self._poly_fractional_power(q)
        if len(self.num) != 1 or len(self.den) != 1:
            raise ClassError("fractional power of the zero expression")
        (nm, npw, nex), nc = next(iter(self.num.items()))
        (dm, dpw, dex), dc = next(iter(self.den.items()))
        exp_factor = None
        arg = _exp_add(nex, _exp_neg(dex))
        if arg is not None:
            scaled = polys.ratfunc_scale((thaw_poly(arg[0]), thaw_poly(arg[1])), q)
            exp_factor = Expr({((), (), (freeze_poly(scaled[0]), freeze_poly(scaled[1]))):
                               Fraction(1)}, dict(ONE_GP), _reduced=True)
        coeff = nc / dc
        if coeff <= 0:
            raise ClassError("fractional power of a non-positive coefficient")
        mono = dict(nm)
        for s, e in dm:
            mono[s] = mono.get(s, 0) - e
        pows = dict(npw)
        for k, v in dpw:
            pows[k] = pows.get(k, Fraction(0)) - v
        raw_pows = {}
        for s, e in mono.items():
            raw_pows[(_KIND_SYM, s, None)] = Fraction(e) * q
        for (kind, data, direction), v in pows.items():
            raw_pows[(kind, data, direction)] = raw_pows.get((kind, data, direction), Fraction(0)) + v * q
        # rational coefficient: factor into primes
        for p, e in _prime_factors(coeff.numerator).items():
            k = (_KIND_INT, p, None)
            raw_pows[k] = raw_pows.get(k, Fraction(0)) + e * q
        for p, e in _prime_factors(coeff.denominator).items():
            k = (_KIND_INT, p, None)
            raw_pows[k] = raw_pows.get(k, Fraction(0)) - e * q
        gp, extra = _genpoly_from_raw([(Fraction(1), {}, raw_pows, None)])
        out = Expr(gp, extra)
        return out * exp_factor if exp_factor is not None else out

    def _poly_fractional_power(self, q: Fraction) -> "Expr":
        br = self.as_base_ratfunc()
        if br is None:
            raise ClassError("fractional power of a non-polynomial sum")
        out = Expr.number(1)
        for p, sign in ((br[0], 1), (br[1], -1)):
            if list(p) == [()]:
                out = out * Expr.number(p[()]).fractional_power(sign * q) \
                    if p[()] != 1 else out
                continue
            if any(is_jet(s) for s in poly_symbols(p)):
                raise ClassError("fractional power of a jet-bearing polynomial")
            cont, prim = poly_primitive(p)
            if cont < 0:
                raise ClassError("fractional power of a negative-content polynomial")
            if len(prim) == 1:
                base_e = Expr(_gp_from_basepoly(prim), dict(ONE_GP))
                out = out * base_e.fractional_power(sign * q)
            else:
                key = (_KIND_POLY, freeze_poly(prim), None)
                gp, extra = _genpoly_from_raw([(Fraction(1), {}, {key: sign * q}, None)])
                out = out * Expr(gp, extra)
            if cont != 1:
                out = out * Expr.number(cont).fractional_power(sign * q)
        return out

    # -- structure probes ----------------------------------------------
    def as_base_ratfunc(self):
        """Return (num_poly, den_poly) if self is a plain rational function
        without tags, else None."""
        num = {}
        for (mono, pows, exparg), c in self.num.items():
            if pows or exparg is not None:
                return None
            num[mono] = c
        den = {}
        for (mono, pows, exparg), c in self.den.items():
            if pows or exparg is not None:
                return None
            den[mono] = c
        return num, den

    def as_fraction(self):
        """Return the value as a Fraction if self is constant rational."""
        br = self.as_base_ratfunc()
        if br is None:
            return None
        n, d = br
        if (not n or list(n) == [()]) and list(d) == [()]:
            return (n.get((), Fraction(0))) / d[()]
        return None

    def symbols(self):
        out = set()
        for gp in (self.num, self.den):
            for (mono, pows, exparg) in gp:
                for s, _ in mono:
                    out.add(s)
                for (kind, data, direction), _ in pows:
                    if kind == _KIND_SYM:
                        out.add(data)
                    elif kind == _KIND_POLY:
                        out |= {s for m, _ in data for s, _ in m}
                    if direction is not None:
                        out.add(direction)
                if exparg is not None:
                    for part in exparg:
                        out |= {s for m, _ in part for s, _ in m}
        return out

    def depends_on(self, name: str) -> bool:
        return name in self.symbols()

    def jet_symbols(self):
        return {s for s in self.symbols() if is_jet(s)}

    # -- calculus -------------------------------------------------------
    def diff(self, sym: str, n: int = 1) -> "Expr":
        e = self
        for _ in range(n):
            e = e._diff1(sym)
        return e

    def _diff1(self, sym: str) -> "Expr":
        dnum = _gp_diff(self.num, sym)
        if self.den == ONE_GP:
            return dnum
        dden = _gp_diff(self.den, sym)
        den_e = Expr(dict(self.den), dict(ONE_GP), _reduced=True)
        num_e = Expr(dict(self.num), dict(ONE_GP), _reduced=True)
        return (dnum * den_e - num_e * dden) / (den_e * den_e)

    def partial_jet(self, sym: str) -> "Expr":
        """Partial derivative with respect to a jet symbol (tags are
        jet-free, so this is purely polynomial)."""
        return self._diff1(sym)


def _mul_many(gp, *factors):
    extra = dict(ONE_GP)
    for f in factors:
        if f == ONE_GP:
            continue
        gp, e = gp_mul(gp, f)
        if e != ONE_GP:
            extra, _ = gp_mul(extra, e)
    return gp, extra


def _gp_diff(gp, sym: str) -> Expr:
    """Derivative of a generalized polynomial; result is an Expr."""
    plain = {}
    total = Expr.number(0)
    for (mono, pows, exparg), c in gp.items():
        term_gp = {(mono, pows, exparg): c}
        term_expr = Expr(dict(term_gp), dict(ONE_GP), _reduced=True)
        # polynomial part
        md = dict(mono)
        for s, e in mono:
            if s == sym:
                nm = dict(md)
                nm[s] = e - 1
                tk = (freeze_mono(nm), pows, exparg)
                nc = plain.get(tk, Fraction(0)) + c * e
                if nc:
                    plain[tk] = nc
                else:
                    plain.pop(tk, None)
        # power tags
        for (kind, data, direction), q in pows:
            if kind == _KIND_SYM:
                dbase = Expr.number(1) if data == sym else None
                base = Expr.symbol(data)
            elif kind == _KIND_POLY:
                bp = thaw_poly(data)
                dp = poly_diff(bp, sym)
                dbase = Expr(_gp_from_basepoly(dp), dict(ONE_GP)) if dp else None
                base = Expr(_gp_from_basepoly(bp), dict(ONE_GP))
            else:
                dbase = None
                base = None
            if dbase is None:
                continue
            expo = Expr.number(q) if direction is None else Expr.number(q) * Expr.symbol(direction)
            total = total + term_expr * expo * dbase / base
        # exp tag
        if exparg is not None:
            n, d = thaw_poly(exparg[0]), thaw_poly(exparg[1])
            dn, dd = poly_diff(n, sym), poly_diff(d, sym)
            if dn or dd:
                rn = poly_add(poly_mul(dn, d), poly_neg(poly_mul(n, dd)))
                rd = poly_mul(d, d)
                darg = Expr(_gp_from_basepoly(rn), _gp_from_basepoly(rd))
                total = total + term_expr * darg
    if plain:
        total = total + Expr(plain, dict(ONE_GP))
    return total


def as_expr(v) -> Expr:
    if isinstance(v, Expr):
        return v
    if isinstance(v, (int, Fraction)):
        return Expr.number(v)
    raise TypeError("cannot interpret %r as an expression" % (v,))


# convenient symbol handles
T = Expr.symbol("t")
X = Expr.symbol("x")


def jet(family: str, index: int) -> Expr:
    return Expr.symbol("%s%d" % (family, index))


# ---------------------------------------------------------------------------
# substitution

class LogLinear:
    """Value of the form base + sum of c_i * log(arg_i); only valid as a
    substitution value (closed-form inverses of exponential maps)."""

    __slots__ = ("base", "logs")

    def __init__(self, base: Expr, logs):
        self.base = base
        # logs: tuple of (Fraction, Expr-rational-arg)
        self.logs = tuple((Fraction(c), as_expr(a)) for c, a in logs if c)

    def diff(self, sym: str) -> Expr:
        out = self.base.diff(sym)
        for c, a in self.logs:
            out = out + Expr.number(c) * a.diff(sym) / a
        return out

    def depends_on(self, name):
        return self.base.depends_on(name) or any(a.depends_on(name) for _, a in self.logs)

    def __repr__(self):
        return "LogLinear(%r, %r)" % (self.base, self.logs)


def substitute(e: Expr, bindings) -> Expr:
    """Simultaneous substitution of symbols by expressions.

    bindings: dict name -> Expr | number | LogLinear.  A LogLinear value may
    only hit symbols appearing linearly inside exp-kernel arguments and
    absent from the polynomial part; the logs then collapse into power
    factors.  Raises ClassError when the result leaves the class.
    """
    bindings = {k: (v if isinstance(v, LogLinear) else as_expr(v))
                for k, v in bindings.items()}
    num = _subst_gp(e.num, bindings)
    den = _subst_gp(e.den, bindings)
    if not den.num:
        raise ZeroDivisionError("substitution produced a zero denominator")
    return num / den


def _subst_gp(gp, bindings) -> Expr:
    total = Expr.number(0)
    for (mono, pows, exparg), c in gp.items():
        term = Expr.number(c)
        for s, e in mono:
            if s in bindings:
                v = bindings[s]
                if isinstance(v, LogLinear):
                    raise ClassError(
                        "log-bearing value substituted into a polynomial occurrence of %s" % s)
                term = term * v ** e
            else:
                term = term * Expr.symbol(s) ** e
        for (kind, data, direction), q in pows:
            if kind == _KIND_SYM and data in bindings:
                v = bindings[data]
                if isinstance(v, LogLinear):
                    raise ClassError("log-bearing value under a fractional power")
                if direction is not None:
                    raise ClassError("substitution into a power with symbolic exponent")
                term = term * v.fractional_power(q)
            elif kind == _KIND_SYM and direction is not None and direction in bindings:
                v = bindings[direction]
                f = v.as_fraction() if isinstance(v, Expr) else None
                if f is None:
                    raise ClassError("exponent parameters may only be bound to rationals")
                term = term * Expr.symbol(data) ** (q * f)
            elif kind == _KIND_POLY:
                bp = thaw_poly(data)
                if poly_symbols(bp) & set(bindings):
                    if direction is not None:
                        raise ClassError("substitution into symbolic-exponent polynomial power")
                    v = Expr(_gp_from_basepoly(bp), dict(ONE_GP))
                    vs = substitute(v, bindings)
                    term = term * vs.fractional_power(q)
                else:
                    term = term * Expr({((), (((kind, data, direction), q),), None): Fraction(1)},
                                       dict(ONE_GP), _reduced=True)
            else:
                term = term * Expr({((), (((kind, data, direction), q),), None): Fraction(1)},
                                   dict(ONE_GP), _reduced=True)
        if exparg is not None:
            term = term * _subst_exparg(exparg, bindings)
        total = total + term
    return total


def _subst_exparg(exparg, bindings) -> Expr:
    n, d = thaw_poly(exparg[0]), thaw_poly(exparg[1])
    involved = (poly_symbols(n) | poly_symbols(d)) & set(bindings)
    if not involved:
        return Expr(({((), (), exparg): Fraction(1)}), dict(ONE_GP), _reduced=True)
    loggy = {s for s in involved if isinstance(bindings[s], LogLinear)}
    if not loggy:
        narg = _subst_basepoly_expr(n, bindings) / _subst_basepoly_expr(d, bindings)
        return Expr.exp(narg)
    # log-bearing values: argument must be linear in each loggy symbol and
    # the denominator must be free of them
    if poly_symbols(d) & loggy:
        raise ClassError("log-bearing value in an exp-kernel denominator")
    lin = {}
    rest = {}
    for m, c in n.items():
        touched = [(s, e) for s, e in m if s in loggy]
        if not touched:
            rest[m] = c
            continue
        if len(touched) > 1 or touched[0][1] > 1:
            raise ClassError("log-bearing value appears nonlinearly inside exp")
        s = touched[0][0]
        lin.setdefault(s, {})[tuple(p for p in m if p[0] != s)] = c
    arg = _subst_basepoly_expr(rest, bindings) / _subst_basepoly_expr(d, bindings)
    result = Expr.number(1)
    for s, cof in lin.items():
        v = bindings[s]
        cof_e = _subst_basepoly_expr(cof, bindings) / _subst_basepoly_expr(d, bindings)
        arg = arg + cof_e * v.base
        for c, a in v.logs:
            expo = cof_e * Expr.number(c)
            f = expo.as_fraction()
            if f is None:
                raise ClassError("exp of log with non-constant coefficient leaves the class")
            if f.denominator == 1:
                result = result * a ** int(f)
            else:
                result = result * a.fractional_power(f)
    return result * Expr.exp(arg)


def _subst_basepoly_expr(p, bindings) -> Expr:
    out = Expr.number(0)
    for m, c in p.items():
        term = Expr.number(c)
        for s, e in m:
            v = bindings.get(s)
            if v is None:
                term = term * Expr.symbol(s) ** e
            else:
                if isinstance(v, LogLinear):
                    raise ClassError("log-bearing value in a polynomial position")
                term = term * v ** e
        out = out + term
    return out


# ---------------------------------------------------------------------------
# numeric evaluation (exact rationals; exp approximated with error bound)

_EXP_PREC = Fraction(1, 10 ** 40)


def _exp_approx(v: Fraction, eps: Fraction) -> Fraction:
    """Rational approximation of exp(v) with |error| <= eps * exp-ballpark."""
    # range-reduce: exp(v) = exp(r) * 2**k with r = v - k*ln2 ... avoid ln2;
    # instead use exp(v) = exp(v/2**m)**(2**m) with |v/2**m| <= 1/2.
    m = 0
    w = v
    while abs(w) > Fraction(1, 2):
        w /= 2
        m += 1
    # Taylor with remainder bound: |R_n| <= |w|^(n+1)/(n+1)! * 2
    s = Fraction(1)
    term = Fraction(1)
    n = 0
    target = eps / Fraction(4 ** m if m else 1) / 4
    while True:
        n += 1
        term *= w / n
        s += term
        if abs(term) * 2 <= target:
            break
    for _ in range(m):
        s *= s
    return s


def _nth_root(fr: Fraction, k: int):
    """Exact k-th root of a positive rational if it exists, else None."""
    def iroot(n, k):
        if n < 2:
            return n
        lo, hi = 1, 1 << ((n.bit_length() + k - 1) // k + 1)
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if mid ** k <= n:
                lo = mid
            else:
                hi = mid - 1
        return lo
    rn = iroot(fr.numerator, k)
    rd = iroot(fr.denominator, k)
    if rn ** k == fr.numerator and rd ** k == fr.denominator:
        return Fraction(rn, rd)
    return None


def _root_approx(fr: Fraction, k: int, eps: Fraction) -> Fraction:
    """Approximate positive k-th root by bisection to absolute error eps."""
    exact = _nth_root(fr, k)
    if exact is not None:
        return exact
    lo = Fraction(0)
    hi = max(Fraction(1), fr)
    while hi - lo > eps:
        mid = (lo + hi) / 2
        if mid ** k <= fr:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def evaluate(e: Expr, point: dict, eps: Fraction = _EXP_PREC):
    """Evaluate at rational point; returns (value, error_bound) Fractions.

    point must bind every symbol appearing in e.  Raises PoleError at poles
    and ExprError for unbound symbols.
    """
    missing = e.symbols() - set(point)
    if missing:
        raise ExprError("unbound symbols in evaluation: %s" % sorted(missing))
    pt = {k: Fraction(v) for k, v in point.items()}
    dv, derr = _eval_gp(e.den, pt, eps)
    if dv == 0 or abs(dv) <= derr:
        raise PoleError("evaluation at (or numerically too close to) a pole")
    nv, nerr = _eval_gp(e.num, pt, eps)
    val = nv / dv
    # first-order error propagation with a safety factor
    err = (nerr + abs(val) * derr) / abs(dv) * 2
    return val, err


def _eval_gp(gp, pt, eps):
    total = Fraction(0)
    err = Fraction(0)
    for (mono, pows, exparg), c in gp.items():
        v = c
        e_acc = Fraction(0)
        for s, k in mono:
            v *= pt[s] ** k
        exact = True
        for (kind, data, direction), q in pows:
            if direction is not None:
                q = q * pt[direction]
            if kind == _KIND_INT:
                base = Fraction(data)
            elif kind == _KIND_SYM:
                base = pt[data]
            else:
                base = Fraction(0)
                for m, (nn, dd) in data:
                    mv = Fraction(nn, dd)
                    for s, k in m:
                        mv *= pt[s] ** k
                    base += mv
            if base <= 0:
                raise PoleError("fractional power of a non-positive base value")
            if q.denominator == 1:
                v *= base ** int(q)
            else:
                root = _root_approx(base, q.denominator, eps)
                v *= root ** q.numerator
                exact = exact and (_nth_root(base, q.denominator) is not None)
        if exparg is not None:
            n, d = thaw_poly(exparg[0]), thaw_poly(exparg[1])
            nv = _eval_basepoly(n, pt)
            dv = _eval_basepoly(d, pt)
            if dv == 0:
                raise PoleError("pole inside an exp kernel")
            a = nv / dv
            ev = _exp_approx(a, eps)
            v *= ev
            exact = False
        if not exact:
            e_acc = abs(v) * eps * 8
        total += v
        err += e_acc
    return total, err


def _eval_basepoly(p, pt):
    total = Fraction(0)
    for m, c in p.items():
        v = Fraction(c)
        for s, k in m:
            v *= pt[s] ** k
        total += v
    return total
