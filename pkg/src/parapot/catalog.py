"""Explicit solution families and verified fixture data.

Heat polynomials P_k (P_{k+1,x} = P_k, all solving the heat equation),
their backward counterparts, the stationary solutions and the dilation
ladder of the mu x^-2 equations, the Darboux potential construction
V = P(x) - 2 (W_x/W)_x, and the named potential-symmetry fixtures.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from importlib import resources

from .exprcore import Expr, as_expr, differentiate, is_zero, parse, substitute
from .funalg import FunctionTuple, wronskian
from .pde import HEAT, ParabolicEquation, parse_equation_text
from .symmetry import (PointOperator, ProlongedOperator, SimplestPotentialSystem,
                       prolong_simplest, system_invariance_residuals)

K_MAX = 24  # generous desk-scale bound for polynomial degrees


class CatalogError(Exception):
    pass


def heat_polynomial(k: int) -> Expr:
    """P_k = sum_j t^j/j! * x^(k-2j)/(k-2j)!, the canonical heat polynomial."""
    if not 0 <= k <= K_MAX:
        raise CatalogError("heat polynomial degree out of range")
    out = Expr.number(0)
    for j in range(k // 2 + 1):
        c = Fraction(1, math.factorial(j) * math.factorial(k - 2 * j))
        out = out + Expr.number(c) * Expr.symbol("t") ** j * Expr.symbol("x") ** (k - 2 * j)
    return out


def backward_heat_polynomial(k: int) -> Expr:
    """P_k(-t, x); solves alpha_t + alpha_xx = 0."""
    return substitute(heat_polynomial(k), {"t": -Expr.symbol("t")})


def mu_equation(mu) -> ParabolicEquation:
    """u_t - u_xx + (mu/x^2) u = 0."""
    return ParabolicEquation(1, 0, -as_expr(mu) / Expr.symbol("x") ** 2)


class MuStationary:
    """Stationary solutions of the mu x^-2 equation.

    For rational mu with 1 + 4 mu a rational square the pair is
    (x^nu_minus, x^nu_plus) with nu_pm = (1 +- sqrt(1+4 mu))/2 (domain
    x > 0).  For a symbolic exponent, mu is parameterized as nu^2 - nu and
    the pair is (x^(1-nu), x^nu); the constraint is recorded here.
    """

    def __init__(self, mu):
        if isinstance(mu, str):
            nu = mu
            self.nu_name = nu
            self.mu = Expr.symbol(nu) * Expr.symbol(nu) - Expr.symbol(nu)
            self.constraint = "mu = %s^2 - %s" % (nu, nu)
            self.phi1 = Expr.symbol("x") / _xpow(nu)  # x^(1-nu)
            self.phi2 = _xpow(nu)
        else:
            mu = Fraction(mu)
            disc = 1 + 4 * mu
            if disc <= 0:
                raise CatalogError(
                    "only the 1+4*mu > 0 branch is supported (log/oscillatory "
                    "branches lie outside the expression class)")
            root = _exact_sqrt(disc)
            if root is None:
                raise CatalogError("1+4*mu must be a rational square for the exact branch")
            nu_plus = (1 + root) / 2
            nu_minus = (1 - root) / 2
            self.nu_name = None
            self.mu = Expr.number(mu)
            self.constraint = None
            self.phi1 = _xpow_rational(nu_minus)
            self.phi2 = _xpow_rational(nu_plus)
        self.equation = mu_equation(self.mu)
        for phi in (self.phi1, self.phi2):
            if not self.equation.is_solution(phi):
                raise CatalogError("internal: stationary solution fails its equation")

    def pair(self):
        return (self.phi1, self.phi2)


def _exact_sqrt(fr: Fraction):
    n = math.isqrt(fr.numerator)
    d = math.isqrt(fr.denominator)
    if n * n == fr.numerator and d * d == fr.denominator:
        return Fraction(n, d)
    return None


def _xpow(nu_name: str) -> Expr:
    return parse("x^(%s)" % nu_name)


def _xpow_rational(q: Fraction) -> Expr:
    x = Expr.symbol("x")
    if q.denominator == 1:
        return x ** int(q)
    return x.fractional_power(q) if q > 0 else Expr.number(1) / x.fractional_power(-q)


def mu_stationary_solutions(mu):
    """The stationary pair; see MuStationary."""
    return MuStationary(mu).pair()


def pi_ladder_operator(phi: Expr) -> Expr:
    """The dilation-projective ladder: -4 t^2 phi_t - 4 t x phi_x - (x^2 + 2t) phi."""
    t, x = Expr.symbol("t"), Expr.symbol("x")
    return (-4 * t * t * differentiate(phi, "t")
            - 4 * t * x * differentiate(phi, "x")
            - (x * x + 2 * t) * phi)


def pi_ladder(mu, k: int):
    """(phi^{k,1}, phi^{k,2}): the k-fold ladder images of the stationary
    pair; each solves the mu x^-2 equation."""
    if k < 0 or k > K_MAX:
        raise CatalogError("ladder depth out of range")
    st = MuStationary(mu)
    phi1, phi2 = st.pair()
    for _ in range(k):
        phi1 = pi_ladder_operator(phi1)
        phi2 = pi_ladder_operator(phi2)
    for phi in (phi1, phi2):
        if not st.equation.is_solution(phi):
            raise CatalogError("internal: ladder image fails the equation")
    return (phi1, phi2)


def pi_ladder_tuple(mu, k: int) -> FunctionTuple:
    """(phi^{01}, phi^{02}, ..., phi^{k1}, phi^{k2})."""
    out = []
    for j in range(k + 1):
        out.extend(pi_ladder(mu, j))
    return FunctionTuple(out)


def potential_V_from_seeds(P, psis) -> Expr:
    """V = P(x) - 2 (W_x/W)_x with W the Wronskian of the seed tuple; each
    seed entry must solve w_t - w_xx + P(x) w = 0."""
    P = as_expr(P)
    if P.depends_on("t"):
        raise CatalogError("the base potential P must not depend on t")
    if not isinstance(psis, FunctionTuple):
        psis = FunctionTuple(psis)
    base_eq = ParabolicEquation(1, 0, -P)
    for psi in psis:
        if not base_eq.is_solution(psi):
            raise CatalogError("seed entry does not solve the base equation")
    W = wronskian(psis)
    if is_zero(W):
        raise CatalogError("dependent seed")
    return P - 2 * differentiate(differentiate(W, "x") / W, "x")


# ---------------------------------------------------------------------------
# fixtures

class Fixture:
    def __init__(self, name, equation, alpha, operators, provenance):
        self.name = name
        self.equation = equation
        self.alpha = alpha
        self.operators = operators  # list of (label, ProlongedOperator)
        self.provenance = provenance

    def __repr__(self):
        return "Fixture(%r, %d operators)" % (self.name, len(self.operators))


_FIXTURE_FILES = {
    "heat-p1": "heat_p1.fix",
    "heat-p2": "heat_p2.fix",
    "fp-1": "fp_1.fix",
    "fp-x": "fp_x.fix",
}

_FIX_EQ_RE = re.compile(r"equation\s*(eq\s*\{[^}]*\}|reduced\s*\{[^}]*\})")
_FIX_ALPHA_RE = re.compile(r'alpha\s*=\s*"([^"]*)"')
_FIX_PROV_RE = re.compile(r'provenance\s*=\s*"([^"]*)"')
_FIX_OP_RE = re.compile(
    r'op\s+(\w+)\s*\{\s*tau\s*=\s*"([^"]*)"\s*;\s*xi\s*=\s*"([^"]*)"\s*;'
    r'\s*eta\s*=\s*"([^"]*)"\s*;\s*theta\s*=\s*"([^"]*)"\s*;?\s*\}')


def fixture(name: str) -> Fixture:
    """Load a named fixture and re-verify every stored operator against the
    invariance criterion on its potential system."""
    if name not in _FIXTURE_FILES:
        raise CatalogError("unknown fixture %r (known: %s)" % (name, sorted(_FIXTURE_FILES)))
    text = resources.files("parapot.fixtures").joinpath(_FIXTURE_FILES[name]).read_text()
    meq = _FIX_EQ_RE.search(text)
    malpha = _FIX_ALPHA_RE.search(text)
    mprov = _FIX_PROV_RE.search(text)
    if not (meq and malpha):
        raise CatalogError("fixture file for %r is malformed" % name)
    eq = parse_equation_text(meq.group(1))
    alpha = parse(malpha.group(1))
    sys = SimplestPotentialSystem.from_characteristic(eq, alpha)
    spec = sys.system_spec()
    operators = []
    for label, tau, xi, eta, theta in _FIX_OP_RE.findall(text):
        op = ProlongedOperator(
            PointOperator(parse(tau), parse(xi), 0, 0),
            {"u0": parse(eta), "v1": parse(theta)})
        for r in system_invariance_residuals(op, spec):
            if not is_zero(r):
                raise CatalogError("fixture %s operator %s fails the invariance check"
                                   % (name, label))
        operators.append((label, op))
    if not operators:
        raise CatalogError("fixture %r lists no operators" % name)
    return Fixture(name, eq, alpha, operators,
                   mprov.group(1) if mprov else "")
