"""The equation class u_t = A u_xx + B u_x + C u.

Adjoints, the associated operator L, solution checking, jet-space total
derivatives, and the point equivalence transformations
t~ = T(t), x~ = X(t,x), u~ = U1 u + U0 together with their closed-form
inverses (affine, monomial-power and exponential cases).

Jet symbols: u0 = u, u1 = u_x, u2 = u_xx, ...; potentials v<s>, f<s>, w<s>
are additional dependent symbols whose derivatives are supplied by rule
maps when working on a potential-system manifold.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .exprcore import (ClassError, Expr, LogLinear, as_expr, differentiate,
                       is_zero, parse, substitute, to_string)
from .exprcore.polys import is_jet, jet_family


class PdeError(Exception):
    pass


def jet(k: int) -> Expr:
    return Expr.symbol("u%d" % k)


class ParabolicEquation:
    """Coefficient triple (A, B, C) of u_t = A u_xx + B u_x + C u."""

    def __init__(self, A, B, C):
        self.A = as_expr(A)
        self.B = as_expr(B)
        self.C = as_expr(C)
        if self.A.is_zero_structural():
            raise PdeError("leading coefficient A must be nonzero")

    def __eq__(self, other):
        if not isinstance(other, ParabolicEquation):
            return NotImplemented
        return (is_zero(self.A - other.A) and is_zero(self.B - other.B)
                and is_zero(self.C - other.C))

    def __repr__(self):
        return "ParabolicEquation(A=%s, B=%s, C=%s)" % (self.A, self.B, self.C)

    def rhs_jet(self) -> Expr:
        """A u2 + B u1 + C u0 as a jet expression."""
        return self.A * jet(2) + self.B * jet(1) + self.C * jet(0)

    def apply_operator(self, phi) -> Expr:
        """L phi = phi_t - A phi_xx - B phi_x - C phi for a function phi(t,x)."""
        phi = as_expr(phi)
        return (differentiate(phi, "t") - self.A * differentiate(phi, "x", 2)
                - self.B * differentiate(phi, "x") - self.C * phi)

    def is_solution(self, phi) -> bool:
        return is_zero(self.apply_operator(phi))

    def adjoint(self) -> "ParabolicEquation":
        """Evolution form of the adjoint equation
        alpha_t + (A alpha)_xx - (B alpha)_x + C alpha = 0, i.e. the triple
        (-A, B - 2A_x, -C + B_x - A_xx); an involution."""
        Ax = differentiate(self.A, "x")
        return ParabolicEquation(-self.A,
                                 self.B - 2 * Ax,
                                 -self.C + differentiate(self.B, "x")
                                 - differentiate(self.A, "x", 2))

    def adjoint_residual(self, alpha) -> Expr:
        """alpha_t + (A alpha)_xx - (B alpha)_x + C alpha."""
        alpha = as_expr(alpha)
        return (differentiate(alpha, "t")
                + differentiate(self.A * alpha, "x", 2)
                - differentiate(self.B * alpha, "x")
                + self.C * alpha)

    def to_reduced(self):
        if not (is_zero(self.A - 1) and is_zero(self.B)):
            raise PdeError("equation is not in reduced form (A=1, B=0)")
        return ReducedEquation(-self.C)


class ReducedEquation:
    """u_t - u_xx + V u = 0, i.e. the triple (1, 0, -V)."""

    def __init__(self, V):
        self.V = as_expr(V)

    def to_parabolic(self) -> ParabolicEquation:
        return ParabolicEquation(1, 0, -self.V)

    def __repr__(self):
        return "ReducedEquation(V=%s)" % (self.V,)


HEAT = ParabolicEquation(1, 0, 0)


def adjoint(eq: ParabolicEquation) -> ParabolicEquation:
    return eq.adjoint()


def apply_operator(eq: ParabolicEquation, phi) -> Expr:
    return eq.apply_operator(phi)


def is_solution(eq: ParabolicEquation, phi) -> bool:
    return eq.is_solution(phi)


# ---------------------------------------------------------------------------
# jet-space total derivatives

def _max_jet_index(e: Expr, family: str = "u") -> int:
    top = -1
    for s in e.jet_symbols():
        fam, idx = jet_family(s)
        if fam == family:
            top = max(top, idx)
    return top


def total_derivative(e, direction: str, eq: ParabolicEquation, rules=None) -> Expr:
    """Total derivative of a jet expression on the solution manifold.

    D_x raises jet indices; D_t substitutes u_{t,k} = D_x^k(A u2 + B u1 + C u0).
    `rules` optionally maps potential symbols to their (dt, dx) values on a
    potential-system manifold.
    """
    e = as_expr(e)
    rules = rules or {}
    if direction == "x":
        out = e.diff("x")
        for s in sorted(e.jet_symbols()):
            fam, idx = jet_family(s)
            pe = e.partial_jet(s)
            if pe.is_zero_structural():
                continue
            if s in rules:
                out = out + pe * rules[s][1]
            elif fam == "u":
                out = out + pe * Expr.symbol("u%d" % (idx + 1))
            else:
                raise PdeError("no x-derivative rule for symbol %s" % s)
        return out
    if direction == "t":
        out = e.diff("t")
        ut_cache = {0: eq.rhs_jet()}

        def ut(k):
            if k not in ut_cache:
                ut_cache[k] = total_derivative(ut_cache[0], "x", eq, rules) if k == 1 else \
                    total_derivative(ut(k - 1), "x", eq, rules)
            return ut_cache[k]

        for s in sorted(e.jet_symbols()):
            fam, idx = jet_family(s)
            pe = e.partial_jet(s)
            if pe.is_zero_structural():
                continue
            if s in rules:
                out = out + pe * rules[s][0]
            elif fam == "u":
                out = out + pe * ut(idx)
            else:
                raise PdeError("no t-derivative rule for symbol %s" % s)
        return out
    raise ValueError("direction must be 't' or 'x'")


# ---------------------------------------------------------------------------
# equivalence transformations

class EquivalenceTransformation:
    """t~ = T(t), x~ = X(t,x), u~ = U1(t,x) u + U0(t,x).

    T may be log-linear (arising as the closed-form inverse of an
    exponential time change); X, U1, U0 are plain expressions.
    """

    def __init__(self, T, X, U1, U0=0):
        self.T = T if isinstance(T, LogLinear) else as_expr(T)
        self.X = as_expr(X)
        self.U1 = as_expr(U1)
        self.U0 = as_expr(U0)
        if self.T_t().is_zero_structural() or \
                differentiate(self.X, "x").is_zero_structural() or \
                self.U1.is_zero_structural():
            raise PdeError("degenerate transformation: T_t X_x U1 = 0")
        if isinstance(self.T, LogLinear):
            if self.T.depends_on("x") or self.T.base.depends_on("x"):
                raise PdeError("T must depend on t only")
        elif self.T.depends_on("x"):
            raise PdeError("T must depend on t only")

    def T_t(self) -> Expr:
        return self.T.diff("t") if isinstance(self.T, LogLinear) else differentiate(self.T, "t")

    def is_identity(self) -> bool:
        return (not isinstance(self.T, LogLinear)
                and is_zero(self.T - Expr.symbol("t"))
                and is_zero(self.X - Expr.symbol("x"))
                and is_zero(self.U1 - 1) and is_zero(self.U0))

    def __repr__(self):
        return "EquivalenceTransformation(T=%s, X=%s, U1=%s, U0=%s)" % (
            self.T, self.X, self.U1, self.U0)


def _constant_part(e: Expr):
    """e if it is free of t and x (parameters allowed), else None."""
    syms = e.symbols()
    return e if not ({"t", "x"} & syms) else None


def _invert_T(T):
    """Inverse map t = tau(t~) for T in the supported closed-form cases.
    Returns Expr or LogLinear in the symbol t (standing for t~)."""
    tsym = Expr.symbol("t")
    if isinstance(T, LogLinear):
        # T = base + sum c log(arg): support constant base and a single log
        # of an expression affine in t.
        if len(T.logs) != 1:
            raise PdeError("cannot invert a multi-log time change")
        b = _constant_part(T.base)
        if b is None:
            raise PdeError("cannot invert log time change with nonconstant base")
        c, arg = T.logs[0]
        inner = Expr.exp((tsym - b) / Expr.number(c))
        # solve arg(t) = inner for t: arg affine in t
        a1 = differentiate(arg, "t")
        if _constant_part(a1) is None:
            raise PdeError("log argument is not affine in t")
        a0 = arg - a1 * tsym
        return (inner - a0) / a1
    dT = differentiate(T, "t")
    if _constant_part(dT) is not None:
        # affine T = a t + b
        a = dT
        b = T - a * tsym
        return (tsym - b) / a
    # exponential: T = a exp(k t) + b, detected via T''/T' = k constant
    d2T = differentiate(dT, "t")
    k = _constant_part(d2T / dT)
    if k is not None:
        kf = k.as_fraction()
        if kf is None:
            raise PdeError("non-rational exponential rate in T")
        a = (dT / k) / Expr.exp(k * tsym)
        a = _constant_part(a)
        if a is None:
            raise PdeError("T is not of the form a*exp(k t)+b")
        b = _constant_part(T - a * Expr.exp(k * tsym))
        if b is None:
            raise PdeError("T is not of the form a*exp(k t)+b")
        return LogLinear(Expr.number(0), [(Fraction(1) / kf, (tsym - b) / a)])
    # monomial power: T = a t^k + b with t T''/T' = k-1 constant
    km1 = _constant_part(Expr.symbol("t") * d2T / dT)
    if km1 is not None:
        kf = (km1 + 1).as_fraction()
        if kf and kf != 0:
            a = _constant_part(dT / (Expr.number(kf) * tsym ** (int(kf) - 1))) \
                if kf.denominator == 1 else None
            if a is not None:
                b = _constant_part(T - a * tsym ** int(kf))
                if b is not None:
                    base = (tsym - b) / a
                    if kf.denominator == 1 and abs(kf.numerator) == 1:
                        return base ** int(kf)
                    return base.fractional_power(Fraction(1) / kf)
    raise PdeError("cannot invert T = %s within the class" % (T,))


def _invert_X(X, tau):
    """Inverse map x = xi(t~, x~) given X(t, x) and t = tau(t~)."""
    xsym = Expr.symbol("x")
    dX = differentiate(X, "x")
    if not dX.depends_on("x"):
        # affine in x: X = f(t) x + g(t)
        f = dX
        g = X - f * xsym
        fc = substitute(f, {"t": tau}) if f.depends_on("t") else f
        gc = substitute(g, {"t": tau}) if g.depends_on("t") else g
        return (xsym - gc) / fc
    # monomial in x: X = f(t) x^k with x X_x / X = k constant
    k = xsym * dX / X
    if not k.depends_on("x") and not k.depends_on("t"):
        kf = k.as_fraction()
        if kf is not None and kf != 0 and kf.denominator == 1:
            f = X / xsym ** int(kf)
            fc = substitute(f, {"t": tau}) if f.depends_on("t") else f
            base = xsym / fc
            if abs(kf.numerator) == 1:
                return base ** int(kf)
            return base.fractional_power(Fraction(1) / kf)
    raise PdeError("cannot invert X = %s within the class" % (X,))


def inverse_map(tr: EquivalenceTransformation):
    """Substitution dict {t: tau, x: xi} expressing old variables by new."""
    tau = _invert_T(tr.T)
    xi = _invert_X(tr.X, tau)
    return {"t": tau, "x": xi}


def reexpress(e: Expr, tr: EquivalenceTransformation) -> Expr:
    """Rewrite an old-variable coefficient function in the new variables."""
    e = as_expr(e)
    if not (e.depends_on("t") or e.depends_on("x")):
        return e
    return substitute(e, inverse_map(tr))


def invert_transformation(tr: EquivalenceTransformation) -> EquivalenceTransformation:
    """Closed-form inverse; composition with tr is the identity."""
    m = inverse_map(tr)
    tau, xi = m["t"], m["x"]
    u1inv = substitute(Expr.number(1) / tr.U1, m)
    if tr.U0.is_zero_structural():
        u0inv = Expr.number(0)
    else:
        u0inv = substitute(-tr.U0 / tr.U1, m)
    return EquivalenceTransformation(tau, xi, u1inv, u0inv)


def apply_equivalence(eq: ParabolicEquation, tr: EquivalenceTransformation) -> ParabolicEquation:
    """Transformed coefficient triple, re-expressed in the new variables."""
    if not tr.U0.is_zero_structural():
        ratio = tr.U0 / tr.U1
        if not eq.is_solution(ratio):
            raise PdeError("U0/U1 must solve the initial equation when U0 != 0")
    Tt = tr.T_t()
    Xx = differentiate(tr.X, "x")
    Xt = differentiate(tr.X, "t")
    Xxx = differentiate(tr.X, "x", 2)
    U1 = tr.U1
    A2 = Xx * Xx / Tt * eq.A
    B2 = Xx / Tt * (eq.B - 2 * differentiate(U1, "x") / U1 * eq.A) - (Xt - eq.A * Xxx) / Tt
    C2 = -(U1 / Tt) * eq.apply_operator(Expr.number(1) / U1)
    m = inverse_map(tr)

    def conv(e):
        return substitute(e, m) if (e.depends_on("t") or e.depends_on("x")) else e

    return ParabolicEquation(conv(A2), conv(B2), conv(C2))


def adjoint_pair_prolong(Q, eq: ParabolicEquation):
    """Prolong an essential symmetry Q = tau Dt + xi Dx + eta1 u Du of eq to
    the counterpart Q+ = tau Dt + xi Dx + theta1 v Dv on the adjoint
    equation, with eta1 + theta1 = -xi_x."""
    from . import symmetry as _sym
    if not Q.zeta0.is_zero_structural():
        raise PdeError("adjoint pairing needs an essential operator (zeta0 = 0)")
    if not is_zero(_sym.invariance_residual(eq, Q)):
        raise PdeError("operator is not a Lie symmetry of the equation")
    theta1 = -differentiate(Q.xi, "x") - Q.zeta1
    Qd = _sym.PointOperator(Q.tau, Q.xi, theta1, 0)
    if not is_zero(_sym.invariance_residual(eq.adjoint(), Qd)):
        raise PdeError("internal: adjoint-paired operator failed the symmetry check")
    return Qd


# ---------------------------------------------------------------------------
# equation text format

_EQ_RE = re.compile(r"^\s*eq\s*\{(.*)\}\s*$", re.S)
_RED_RE = re.compile(r"^\s*reduced\s*\{(.*)\}\s*$", re.S)
_FIELD_RE = re.compile(r'([A-Za-z]\w*)\s*=\s*"([^"]*)"\s*;?')


def parse_equation_text(text: str) -> ParabolicEquation:
    """Parse `eq { A = "..."; B = "..."; C = "..." }` or
    `reduced { V = "..." }`."""
    m = _EQ_RE.match(text)
    if m:
        fields = dict(_FIELD_RE.findall(m.group(1)))
        missing = {"A", "B", "C"} - set(fields)
        if missing:
            raise PdeError("equation text misses fields: %s" % sorted(missing))
        return ParabolicEquation(parse(fields["A"]), parse(fields["B"]), parse(fields["C"]))
    m = _RED_RE.match(text)
    if m:
        fields = dict(_FIELD_RE.findall(m.group(1)))
        if "V" not in fields:
            raise PdeError("reduced equation text misses V")
        return ReducedEquation(parse(fields["V"])).to_parabolic()
    raise PdeError("unrecognized equation text")


def equation_text(eq: ParabolicEquation) -> str:
    return 'eq { A = "%s"; B = "%s"; C = "%s" }' % (
        to_string(eq.A), to_string(eq.B), to_string(eq.C))
