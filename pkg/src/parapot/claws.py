"""Characteristics and conserved vectors of the parabolic class.

A characteristic is a function alpha(t,x) solving the adjoint equation; the
canonical conserved vector it generates is

    (F, G) = (alpha u, -alpha A u_x + ((alpha A)_x - alpha B) u).

Equivalence of conserved vectors is decided by reducing the density modulo
total x-derivatives D_x H with H linear in the jets, then testing that the
remainder vanishes identically on the solution manifold.
"""

from __future__ import annotations

from .exprcore import Expr, as_expr, differentiate, is_zero, substitute
from .exprcore.polys import jet_family
from .pde import (EquivalenceTransformation, ParabolicEquation,
                  inverse_map, jet, reexpress, total_derivative)


class ClawError(Exception):
    pass


class Characteristic:
    """A solution alpha of the adjoint equation, verified at construction."""

    def __init__(self, alpha, equation: ParabolicEquation):
        self.alpha = as_expr(alpha)
        self.equation = equation
        if not is_zero(equation.adjoint_residual(self.alpha)):
            raise ClawError("alpha does not solve the adjoint equation")

    def __repr__(self):
        return "Characteristic(%s)" % (self.alpha,)


class ConservedVector2D:
    """Density F and flux G with D_t F + D_x G = 0 on solutions."""

    def __init__(self, F, G, equation: ParabolicEquation, verify: bool = True):
        self.F = as_expr(F)
        self.G = as_expr(G)
        self.equation = equation
        if verify and not is_zero(divergence_residual(self, equation)):
            raise ClawError("divergence of (F, G) does not vanish on solutions")

    def __repr__(self):
        return "ConservedVector2D(F=%s, G=%s)" % (self.F, self.G)


def verify_characteristic(eq: ParabolicEquation, a) -> bool:
    return is_zero(eq.adjoint_residual(as_expr(a)))


def canonical_conserved_vector(eq: ParabolicEquation, a) -> ConservedVector2D:
    alpha = a.alpha if isinstance(a, Characteristic) else as_expr(a)
    if not verify_characteristic(eq, alpha):
        raise ClawError("not a characteristic of the equation")
    F = alpha * jet(0)
    G = -alpha * eq.A * jet(1) + (differentiate(alpha * eq.A, "x") - alpha * eq.B) * jet(0)
    return ConservedVector2D(F, G, eq, verify=False)


def divergence_residual(cv: ConservedVector2D, eq: ParabolicEquation) -> Expr:
    return total_derivative(cv.F, "t", eq) + total_derivative(cv.G, "x", eq)


def _jet_linear_parts(e: Expr):
    """Split a jet expression linear in u-jets into {k: coeff} plus the
    jet-free remainder; raises if nonlinear in the jets."""
    coeffs = {}
    rem = e
    for s in sorted(e.jet_symbols()):
        fam, idx = jet_family(s)
        if fam != "u":
            raise ClawError("unexpected potential symbol %s in a local conserved vector" % s)
        c = e.partial_jet(s)
        if c.jet_symbols():
            raise ClawError("conserved vector is not linear in the jets")
        coeffs[idx] = c
        rem = rem - c * Expr.symbol(s)
    if rem.jet_symbols():
        raise ClawError("conserved vector is not linear in the jets")
    return coeffs, rem


def reduce_density(cv: ConservedVector2D, eq: ParabolicEquation):
    """Equivalent conserved vector with density of the form alpha(t,x) u.

    Subtracts D_x H (adding D_t H to the flux) with H linear in the jets,
    peeling derivatives off the density from the top order down, then strips
    a jet-free additive density d(t,x) with d_t = 0 handled as a residue.
    Returns (alpha, newF, newG).
    """
    F, G = cv.F, cv.G
    coeffs, rem = _jet_linear_parts(F)
    top = max(coeffs) if coeffs else 0
    while coeffs and top > 0:
        c = coeffs[top]
        H = c * jet(top - 1)
        F = F - total_derivative(H, "x", eq)
        G = G + total_derivative(H, "t", eq)
        coeffs, rem = _jet_linear_parts(F)
        newtop = max(coeffs) if coeffs else 0
        if newtop >= top:
            raise ClawError("density reduction failed to lower the jet order")
        top = newtop
    alpha = coeffs.get(0, Expr.number(0))
    return alpha, F, G


def conserved_vectors_equivalent(cv1: ConservedVector2D, cv2: ConservedVector2D,
                                 eq: ParabolicEquation) -> bool:
    """Equality modulo trivial conserved vectors."""
    diff = ConservedVector2D(cv1.F - cv2.F, cv1.G - cv2.G, eq, verify=False)
    if not is_zero(divergence_residual(diff, eq)):
        return False
    alpha, F2, G2 = reduce_density(diff, eq)
    if not is_zero(alpha):
        return False
    # The reduced difference is (d(t,x), g(t,x)); its divergence vanishes by
    # construction, so it is a trivial (null-divergence) conserved vector
    # provided the flux carries no jets either.
    gcoef, _ = _jet_linear_parts(G2)
    return all(is_zero(c) for c in gcoef.values())


def transform_characteristic(a: Characteristic,
                             tr: EquivalenceTransformation) -> Characteristic:
    """alpha~ = alpha / (X_x U1), re-expressed in the new variables; the
    result is verified against the transformed equation."""
    from .pde import apply_equivalence
    Xx = differentiate(tr.X, "x")
    new_alpha = reexpress(a.alpha / (Xx * tr.U1), tr)
    new_eq = apply_equivalence(a.equation, tr)
    return Characteristic(new_alpha, new_eq)


def _jet_substitution_map(tr: EquivalenceTransformation, max_order: int):
    """Old jets u_k in terms of new jets on the transformed manifold.

    With u~(T, X) = U1 u + U0:  u = (u~(T,X) - U0)/U1, and x-derivatives
    chain through D_x u~(T,X) = X_x u~_1.  Coefficients stay in the old
    variables; re-expression happens afterwards.
    """
    Xx = differentiate(tr.X, "x")
    images = {0: (jet(0) - tr.U0) / tr.U1}

    def dx_new(e):
        # total x-derivative treating u~_k as functions of (t,x) via x~=X
        out = e.diff("x")
        for s in sorted(e.jet_symbols()):
            fam, idx = jet_family(s)
            pe = e.partial_jet(s)
            if not pe.is_zero_structural():
                out = out + pe * Xx * Expr.symbol("u%d" % (idx + 1))
        return out

    # u_k = D_x^{old} of the u_{k-1} image; the jet symbols here denote the
    # new jets u~_j evaluated at (T, X), so only the chain-rule factor X_x
    # appears.
    for k in range(1, max_order + 1):
        images[k] = dx_new(images[k - 1])
    return images


def transform_conserved_vector(cv: ConservedVector2D,
                               tr: EquivalenceTransformation) -> ConservedVector2D:
    """Two-dimensional specialization of the conserved-vector transformation
    rule: with (t~, x~) = (T(t), X(t,x)),

        F~ = F / X_x,   G~ = X_t F / (T_t X_x) + G / T_t,

    with the jets rewritten through u~ = U1 u + U0 and the coefficients
    re-expressed in the new variables."""
    from .pde import apply_equivalence
    eq_new = apply_equivalence(cv.equation, tr)
    Tt = tr.T_t()
    Xx = differentiate(tr.X, "x")
    Xt = differentiate(tr.X, "t")
    maxk = 0
    for e in (cv.F, cv.G):
        for s in e.jet_symbols():
            maxk = max(maxk, jet_family(s)[1])
    images = _jet_substitution_map(tr, maxk)
    bind = {("u%d" % k): v for k, v in images.items()}

    def push(e):
        return substitute(e, bind)

    Fn = push(cv.F) / Xx
    Gn = Xt * push(cv.F) / (Tt * Xx) + push(cv.G) / Tt
    m = inverse_map(tr)

    def conv(e):
        if not (e.depends_on("t") or e.depends_on("x")):
            return e
        return substitute(e, m)

    out = ConservedVector2D(conv(Fn), conv(Gn), eq_new, verify=False)
    if not is_zero(divergence_residual(out, eq_new)):
        raise ClawError("internal: transformed conserved vector lost the divergence identity")
    return out


def symmetry_action_on_cv(cv: ConservedVector2D, Q, eq: ParabolicEquation) -> ConservedVector2D:
    """New conserved vector F~^i = -Q_(r) F^i + (D_j xi^i) F^j - (D_j xi^j) F^i
    for a Lie symmetry Q of eq (xi-vector = (tau, xi))."""
    from . import symmetry as _sym
    if not is_zero(_sym.invariance_residual(eq, Q)):
        raise ClawError("operator is not a Lie symmetry of the equation")
    eta = Q.eta()

    def prolong_apply(e):
        """Q_(r) e for e = e(t, x, u0, u1)."""
        ut = eq.rhs_jet()
        eta_x = total_derivative(eta, "x", eq) - ut * differentiate(Q.tau, "x") \
            - jet(1) * differentiate(Q.xi, "x")
        out = Q.tau * e.diff("t") + Q.xi * e.diff("x")
        for s in sorted(e.jet_symbols()):
            fam, idx = jet_family(s)
            pe = e.partial_jet(s)
            if pe.is_zero_structural():
                continue
            if idx == 0:
                out = out + pe * eta
            elif idx == 1:
                out = out + pe * eta_x
            else:
                raise ClawError("conserved vectors of order > 1 are not supported here")
        return out

    Dt_tau = total_derivative(Q.tau, "t", eq)
    Dx_tau = total_derivative(Q.tau, "x", eq)
    Dt_xi = total_derivative(Q.xi, "t", eq)
    Dx_xi = total_derivative(Q.xi, "x", eq)
    Fn = -prolong_apply(cv.F) + Dx_tau * cv.G - Dx_xi * cv.F
    Gn = -prolong_apply(cv.G) + Dt_xi * cv.F - Dt_tau * cv.G
    out = ConservedVector2D(Fn, Gn, eq, verify=False)
    if not is_zero(divergence_residual(out, eq)):
        raise ClawError("internal: symmetry action broke the divergence identity")
    return out
