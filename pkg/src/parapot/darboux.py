"""Single, multiple (Crum) and dual Darboux transformations.

DT[psi](w) = w_x - (psi_x/psi) w maps solutions of the seed equation to
solutions of the target equation; the multiple version is the Wronskian
ratio DT[psi^1..psi^p](w) = W(psi^1..psi^p, w)/W(psi^1..psi^p).  The dual
seed consists of the cofactor-Wronskian characteristics of the target.
"""

from __future__ import annotations

from fractions import Fraction

from .claws import verify_characteristic
from .exprcore import Expr, as_expr, differentiate, is_zero
from .funalg import FunctionTuple, wronskian
from .pde import ParabolicEquation, jet, total_derivative


class DarbouxError(Exception):
    pass


class DarbouxSeed:
    """Linearly independent solutions of the source equation."""

    def __init__(self, psis, source: ParabolicEquation):
        self.psis = psis if isinstance(psis, FunctionTuple) else FunctionTuple(psis)
        self.source = source
        for psi in self.psis:
            if not source.is_solution(psi):
                raise DarbouxError("seed entry %s does not solve the source equation" % psi)
        if is_zero(wronskian(self.psis)):
            raise DarbouxError("seed has vanishing Wronskian (dependent entries)")

    def __len__(self):
        return len(self.psis)

    def __repr__(self):
        return "DarbouxSeed(%s)" % (self.psis,)


def dt_apply(seed: DarbouxSeed, w) -> Expr:
    """DT[psi](w) = w_x - (psi_x/psi) w for a length-1 seed."""
    if len(seed) != 1:
        raise DarbouxError("dt_apply needs a length-1 seed")
    psi = seed.psis[0]
    w = as_expr(w)
    return differentiate(w, "x") - differentiate(psi, "x") / psi * w


def crum_apply(seed: DarbouxSeed, w) -> Expr:
    """W(psi^1..psi^p, w) / W(psi^1..psi^p)."""
    w = as_expr(w)
    num = wronskian(FunctionTuple(list(seed.psis.entries) + [w]))
    return num / wronskian(seed.psis)


def chain_functions(seed: DarbouxSeed):
    """Crum chain gamma^s = W(psi^1..psi^s)/W(psi^1..psi^{s-1}); the
    composition DT[gamma^p] o ... o DT[gamma^1] equals the multiple
    transformation."""
    out = []
    prev = Expr.number(1)
    for s in range(1, len(seed) + 1):
        cur = wronskian(FunctionTuple(seed.psis.entries[:s]))
        out.append(cur / prev)
        prev = cur
    return out


def dt_target_equation(seed: DarbouxSeed) -> ParabolicEquation:
    """Target coefficients by symbolic elimination: substitute
    u = w_x - (psi_x/psi) w into the target ansatz and require the residual
    to vanish modulo the source equation; cross-checked against the closed
    form.  A is unchanged."""
    if len(seed) != 1:
        raise DarbouxError("dt_target_equation needs a length-1 seed")
    src = seed.source
    psi = seed.psis[0]
    rho = differentiate(psi, "x") / psi
    A, B, C = src.A, src.B, src.C
    u_img = jet(1) - rho * jet(0)
    Dt = total_derivative(u_img, "t", src)
    Dx = total_derivative(u_img, "x", src)
    Dxx = total_derivative(Dx, "x", src)
    # residual = Dt - A Dxx - B' Dx - C' u_img; solve the u2 and u1
    # coefficients for B' and C'
    base = Dt - A * Dxx
    c2 = base.partial_jet("u2")
    dx2 = Dx.partial_jet("u2")
    u2_ = u_img.partial_jet("u2")
    # coefficient equations: c2 - B' dx2 - C' u2_ = 0 with u2_ = 0
    if not u2_.is_zero_structural() or dx2.is_zero_structural():
        raise DarbouxError("internal: unexpected jet structure in elimination")
    Bp = c2 / dx2
    rem = base - Bp * Dx
    c1 = rem.partial_jet("u1")
    u1_ = u_img.partial_jet("u1")
    if u1_.is_zero_structural():
        raise DarbouxError("internal: unexpected jet structure in elimination")
    Cp = c1 / u1_
    residual = rem - Cp * u_img
    if not is_zero(residual):
        raise DarbouxError("internal: elimination residual does not vanish")
    # cross-check against the closed form B' = B + A_x,
    # C' = C + B_x + 2 A rho_x + rho A_x
    Bc = B + differentiate(A, "x")
    Cc = C + differentiate(B, "x") + 2 * A * differentiate(rho, "x") \
        + rho * differentiate(A, "x")
    if not (is_zero(Bp - Bc) and is_zero(Cp - Cc)):
        raise DarbouxError("internal: elimination disagrees with the closed form")
    return ParabolicEquation(A, Bp, Cp)


def crum_target_equation(seed: DarbouxSeed) -> ParabolicEquation:
    """Closed form with W = W(seed):

        B_p = B + p A_x,
        C_p = C + p B_x + p(p-1)/2 A_xx + A_x W_x/W + 2 A (W_x/W)_x.
    """
    src = seed.source
    p = len(seed)
    A, B, C = src.A, src.B, src.C
    W = wronskian(seed.psis)
    WxW = differentiate(W, "x") / W
    Bp = B + p * differentiate(A, "x")
    Cp = (C + p * differentiate(B, "x")
          + Fraction(p * (p - 1), 2) * differentiate(A, "x", 2)
          + differentiate(A, "x") * WxW + 2 * A * differentiate(WxW, "x"))
    return ParabolicEquation(A, Bp, Cp)


def iterated_target_equation(seed: DarbouxSeed) -> ParabolicEquation:
    """Target via the single-step chain; must equal crum_target_equation."""
    eq = seed.source
    gammas = chain_functions(seed)
    for g in gammas:
        eq = dt_target_equation(DarbouxSeed(FunctionTuple([g]), eq))
    return eq


def dual_characteristics(seed: DarbouxSeed) -> FunctionTuple:
    """alpha^ct = (-1)^(ct-1) W(psi^1..omit ct..psi^p)/W(psi^1..psi^p);
    each passes the characteristic check on the Crum target equation."""
    p = len(seed)
    W = wronskian(seed.psis)
    target = crum_target_equation(seed)
    out = []
    for ct in range(1, p + 1):
        reduced = [seed.psis[i] for i in range(p) if i != ct - 1]
        a = Expr.number((-1) ** (ct - 1)) * wronskian(FunctionTuple(reduced)) / W
        if not verify_characteristic(target, a):
            raise DarbouxError("internal: dual entry fails the characteristic check")
        out.append(a)
    return FunctionTuple(out)


def verify_dt_solution_map(seed: DarbouxSeed, test_solutions) -> dict:
    """Check that images of test solutions solve the target and that seed
    members map to zero (the kernel is the span of the seed)."""
    if not isinstance(test_solutions, FunctionTuple):
        test_solutions = FunctionTuple(test_solutions)
    target = crum_target_equation(seed)
    report = {}
    for i, w in enumerate(test_solutions):
        if not seed.source.is_solution(w):
            raise DarbouxError("test entry %s does not solve the source" % w)
        img = crum_apply(seed, w)
        report["image_%d_solves_target" % i] = target.is_solution(img)
    for i, psi in enumerate(seed.psis):
        report["seed_%d_in_kernel" % i] = is_zero(crum_apply(seed, psi))
    return report
