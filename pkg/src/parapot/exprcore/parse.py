"""Expression grammar: parser and canonical printer.

  expr   := ['-'] term (('+'|'-') term)*
  term   := factor (('*'|'/') factor)*
  factor := base ('^' exponent)?
  base   := rational | 't' | 'x' | ident | '(' expr ')' | 'exp' '(' expr ')'
  exponent := signed_integer | ident | '(' signed_rational | ident ')'
  rational := integer ('/' positive_integer)?

Identifiers name free parameters, except u<k>, v<k>, f<k>, w<k> which are
jet/potential symbols, and the alias 'u' for u0.  A bare exponent is an
integer, so x^2/2 is (x^2)/2; fractional and symbolic exponents are written
parenthesized, e.g. x^(1/2), x^(nu).  Printing emits only strings that
re-parse to the same expression.
"""

from __future__ import annotations

from fractions import Fraction

from .expr import (ClassError, Expr, _KIND_INT, _KIND_POLY, _KIND_SYM,
                   _term_sort, as_expr)
from .polys import is_jet, mono_key, thaw_poly


class ParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__("%s (at byte %d)" % (message, offset))
        self.offset = offset


_RESERVED = {"t", "x", "exp"}


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch: str) -> bool:
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def expect(self, ch: str):
        if not self.take(ch):
            raise ParseError("expected %r" % ch, self.pos)

    def integer(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise ParseError("expected an integer", self.pos)
        return int(self.text[start:self.pos])

    def ident(self) -> str:
        self.skip_ws()
        start = self.pos
        if self.pos < len(self.text) and (self.text[self.pos].isalpha() or self.text[self.pos] == "_"):
            self.pos += 1
            while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
                self.pos += 1
        if self.pos == start:
            raise ParseError("expected an identifier", self.pos)
        return self.text[start:self.pos]


def parse(text: str) -> Expr:
    """Parse an expression in the grammar; raises ParseError with offset."""
    sc = _Scanner(text)
    e = _expr(sc)
    sc.skip_ws()
    if sc.pos != len(sc.text):
        raise ParseError("unexpected trailing input", sc.pos)
    return e


def _expr(sc: _Scanner) -> Expr:
    neg = sc.take("-")
    e = _term(sc)
    if neg:
        e = -e
    while True:
        if sc.take("+"):
            e = e + _term(sc)
        elif sc.take("-"):
            e = e - _term(sc)
        else:
            return e


def _term(sc: _Scanner) -> Expr:
    e = _factor(sc)
    while True:
        if sc.take("*"):
            e = e * _factor(sc)
        elif sc.take("/"):
            f = _factor(sc)
            if f.is_zero_structural():
                raise ParseError("division by zero", sc.pos)
            e = e / f
        else:
            return e


def _signed_rational(sc: _Scanner) -> Fraction:
    neg = sc.take("-")
    n = sc.integer()
    d = 1
    if sc.take("/"):
        d = sc.integer()
    return Fraction(-n if neg else n, d)


def _factor(sc: _Scanner) -> Expr:
    base = _base(sc)
    if sc.take("^"):
        ch = sc.peek()
        if ch == "(":
            sc.expect("(")
            inner = sc.peek()
            if inner.isalpha() or inner == "_":
                name = sc.ident()
                sc.expect(")")
                return _apply_symbolic_exponent(sc, base, name)
            q = _signed_rational(sc)
            sc.expect(")")
        elif ch.isalpha() or ch == "_":
            name = sc.ident()
            return _apply_symbolic_exponent(sc, base, name)
        else:
            neg = sc.take("-")
            n = sc.integer()
            q = Fraction(-n if neg else n)
        if q.denominator == 1:
            return base ** int(q)
        try:
            return base.fractional_power(q) if q > 0 else (
                as_expr(1) / base.fractional_power(-q))
        except ClassError as exc:
            raise ParseError(str(exc), sc.pos)
    return base


def _apply_symbolic_exponent(sc: _Scanner, base: Expr, name: str) -> Expr:
    if name in _RESERVED or is_jet(name):
        raise ParseError("invalid exponent symbol %r" % name, sc.pos)
    try:
        return _symbolic_power(base, name)
    except ClassError as exc:
        raise ParseError(str(exc), sc.pos)


def _symbolic_power(base: Expr, name: str) -> Expr:
    # base^name = exp-free monomial with power tags in direction `name`
    from .expr import ONE_GP, _genpoly_from_raw
    if len(base.num) != 1 or base.den != ONE_GP:
        raise ClassError("symbolic exponent on a non-monomial base")
    (mono, pows, exparg), c = next(iter(base.num.items()))
    if exparg is not None or pows or c != 1:
        raise ClassError("symbolic exponent base must be a plain monomial")
    raw_pows = {}
    for s, e in mono:
        raw_pows[(_KIND_SYM, s, name)] = Fraction(e)
    gp, extra = _genpoly_from_raw([(Fraction(1), {}, raw_pows, None)])
    return Expr(gp, extra)


def _base(sc: _Scanner) -> Expr:
    sc.skip_ws()
    if sc.pos >= len(sc.text):
        raise ParseError("unexpected end of input", sc.pos)
    ch = sc.text[sc.pos]
    if ch.isdigit():
        n = sc.integer()
        save = sc.pos
        if sc.take("/"):
            # rational literal only when directly followed by an integer
            try:
                d = sc.integer()
                return Expr.number(Fraction(n, d))
            except ParseError:
                sc.pos = save
        return Expr.number(n)
    if ch == "(":
        sc.expect("(")
        e = _expr(sc)
        sc.expect(")")
        return e
    if ch.isalpha() or ch == "_":
        name = sc.ident()
        if name == "exp":
            sc.expect("(")
            arg = _expr(sc)
            sc.expect(")")
            try:
                return Expr.exp(arg)
            except ClassError as exc:
                raise ParseError(str(exc), sc.pos)
        if name == "u":
            name = "u0"
        return Expr.symbol(name)
    raise ParseError("unexpected character %r" % ch, sc.pos)


# ---------------------------------------------------------------------------
# printing

def _frac_str(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return "%d/%d" % (c.numerator, c.denominator)


def _print_basepoly(fp) -> str:
    p = thaw_poly(fp)
    items = sorted(p.items(), key=lambda it: mono_key(it[0]), reverse=True)
    parts = []
    for m, c in items:
        s = _print_term_factors(c, m, (), None)
        if parts and not s.startswith("-"):
            parts.append("+" + s)
        else:
            parts.append(s)
    return "".join(parts) if parts else "0"


def _print_pow(key, q: Fraction) -> str:
    kind, data, direction = key
    if kind == _KIND_INT:
        base = str(data)
    elif kind == _KIND_SYM:
        base = data
    else:
        base = "(%s)" % _print_basepoly(data)
    if direction is None:
        return "%s^(%s)" % (base, _frac_str(q))
    inner = "%s^%s" % (base, direction)
    if q == 1:
        return inner
    if q.denominator == 1 and q > 0:
        return "(%s)^%d" % (inner, q.numerator)
    return "(%s)^(%s)" % (inner, _frac_str(q))


def _print_term_factors(c: Fraction, mono, pows, exparg) -> str:
    factors = []
    for s, e in sorted(mono, key=lambda p: mono_key(((p[0], 1),))):
        factors.append(s if e == 1 else "%s^%d" % (s, e))
    for key, q in pows:
        factors.append(_print_pow(key, q))
    if exparg is not None:
        n, d = exparg
        ns = _print_basepoly(n)
        if d == (((), (1, 1)),):
            factors.append("exp(%s)" % ns)
        else:
            arg = "%s/(%s)" % (("(%s)" % ns) if ("+" in ns or "-" in ns.lstrip("-")) else ns,
                               _print_basepoly(d))
            factors.append("exp(%s)" % arg)
    if not factors:
        return _frac_str(c)
    body = "*".join(factors)
    if c == 1:
        return body
    if c == -1:
        return "-" + body
    if c.denominator == 1:
        return "%d*%s" % (c.numerator, body)
    if c.numerator == 1:
        return "%s/%d" % (body, c.denominator)
    if c.numerator == -1:
        return "-%s/%d" % (body, c.denominator)
    return "%d*%s/%d" % (c.numerator, body, c.denominator)


def _print_gp(gp) -> str:
    if not gp:
        return "0"
    items = sorted(gp.items(), key=lambda it: _term_sort(it[0]), reverse=True)
    parts = []
    for tk, c in items:
        s = _print_term_factors(c, *tk)
        if parts and not s.startswith("-"):
            parts.append("+" + s)
        else:
            parts.append(s)
    return "".join(parts)


def to_string(e: Expr) -> str:
    """Canonical printing; parse(to_string(e)) == e."""
    from .expr import ONE_GP
    ns = _print_gp(e.num)
    if e.den == ONE_GP:
        return ns
    ds = _print_gp(e.den)
    if len(e.num) > 1:
        ns = "(%s)" % ns
    elif ns.startswith("-") and len(e.num) == 1:
        ns = "(%s)" % ns
    if len(e.den) > 1:
        ds = "(%s)" % ds
    else:
        # single-term denominators still need parens when composite
        tk, c = next(iter(e.den.items()))
        mono, pows, exparg = tk
        nfactors = len(mono) + len(pows) + (1 if exparg is not None else 0)
        if nfactors > 1 or (nfactors >= 1 and c != 1):
            ds = "(%s)" % ds
    return "%s/%s" % (ns, ds)
