"""Equation class: adjoints, jets, equivalence transformations."""

import pytest

from parapot.exprcore import Expr, is_zero, parse, substitute
from parapot.pde import (HEAT, EquivalenceTransformation, ParabolicEquation,
                         PdeError, ReducedEquation, adjoint,
                         adjoint_pair_prolong, apply_equivalence,
                         apply_operator, invert_transformation, is_solution,
                         parse_equation_text, total_derivative)
from parapot.symmetry import OP_D, OP_DT, OP_DX, OP_G, OP_PI

FP = ParabolicEquation(1, parse("x"), 1)


def test_adjoint_of_reduced():
    eq = ReducedEquation(parse("V0")).to_parabolic()
    adj = adjoint(eq)
    # alpha_t = -alpha_xx + V alpha
    assert is_zero(adj.A + 1) and is_zero(adj.B) and is_zero(adj.C - parse("V0"))


def test_adjoint_involution():
    eq = ParabolicEquation(1, parse("x"), 1)
    assert adjoint(adjoint(eq)) == eq


def test_adjoint_involution_catalog():
    cases = [HEAT, FP, ParabolicEquation(1, parse("2/x"), 0),
             ParabolicEquation(1, 0, parse("-2/x^2")),
             ParabolicEquation(parse("t+1"), parse("x*t"), parse("x")),
             ParabolicEquation(-1, 0, 0),
             ParabolicEquation(2, parse("x^2"), parse("t")),
             ParabolicEquation(1, parse("exp(t)"), 0),
             ParabolicEquation(parse("x"), 1, 1),
             ParabolicEquation(1, parse("1/x"), parse("1/x^2"))]
    for eq in cases:
        assert adjoint(adjoint(eq)) == eq


def test_adjoint_fokker_planck():
    adj = adjoint(FP)
    # by hand: (-A, B - 2A_x, -C + B_x - A_xx) = (-1, x, 0)
    assert is_zero(adj.A + 1) and is_zero(adj.B - parse("x")) and is_zero(adj.C)


def test_apply_operator_examples():
    assert is_zero(apply_operator(HEAT, parse("x^2 + 2*t")))
    assert is_zero(apply_operator(HEAT, parse("t")) - 1)


def test_apply_operator_symbolic_power():
    # mu parameterized as nu^2 - nu so that x^nu is an exact solution
    eq = ParabolicEquation(1, 0, -(parse("nu^2-nu")) / parse("x^2"))
    assert is_zero(apply_operator(eq, parse("x^(nu)")))


def test_is_solution_examples():
    from parapot.catalog import heat_polynomial
    assert is_solution(HEAT, heat_polynomial(4))
    assert not is_solution(HEAT, parse("x^3"))
    backward = ParabolicEquation(-1, 0, 0)
    assert is_solution(backward, parse("x^2-2*t"))


def test_total_derivative_examples():
    assert is_zero(total_derivative(parse("u0^2"), "x", HEAT) - parse("2*u0*u1"))
    assert is_zero(total_derivative(parse("u0"), "t", HEAT) - parse("u2"))
    alpha = parse("x^2-2*t")
    F = alpha * parse("u0")
    G = -alpha * parse("u1") + parse("2*x*u0")
    assert is_zero(total_derivative(F, "t", HEAT) + total_derivative(G, "x", HEAT))


def test_apply_equivalence_gauge_to_heat():
    # the Kolmogorov-form equation with B = 2/x maps to the heat equation
    # under u' = x u (the coefficient 2/x, not 2/x^2: u'=xu forces B=2x^-1)
    eq = ParabolicEquation(1, parse("2/x"), 0)
    tr = EquivalenceTransformation(parse("t"), parse("x"), parse("x"))
    assert apply_equivalence(eq, tr) == HEAT


def test_apply_equivalence_identity():
    tr = EquivalenceTransformation(parse("t"), parse("x"), 1)
    assert apply_equivalence(FP, tr) == FP


def test_apply_equivalence_fokker_planck_to_heat():
    tr = EquivalenceTransformation(parse("exp(2*t)/2"), parse("exp(t)*x"),
                                   parse("exp(-t)"))
    assert apply_equivalence(FP, tr) == HEAT


def test_apply_equivalence_respects_composition():
    tr1 = EquivalenceTransformation(parse("2*t"), parse("x"), 1)
    tr2 = EquivalenceTransformation(parse("t"), parse("2*x"), 1)
    cases = [HEAT, FP, ParabolicEquation(1, parse("2/x"), 0),
             ParabolicEquation(1, 0, parse("-2/x^2")),
             ParabolicEquation(1, parse("x"), 0)]
    for eq in cases:
        step = apply_equivalence(apply_equivalence(eq, tr1), tr2)
        # composed map: T = 2t then scaled x: t~ = 2t, x~ = 2x
        comp = EquivalenceTransformation(parse("2*t"), parse("2*x"), 1)
        assert step == apply_equivalence(eq, comp)


def test_nonzero_u0_requires_solution():
    with pytest.raises(PdeError):
        apply_equivalence(HEAT, EquivalenceTransformation(
            parse("t"), parse("x"), 1, parse("x^3")))
    # legitimate inhomogeneous shift by a solution
    tr = EquivalenceTransformation(parse("t"), parse("x"), 1, parse("x^2+2*t"))
    assert apply_equivalence(HEAT, tr) == HEAT


def test_invert_transformation_examples():
    inv = invert_transformation(EquivalenceTransformation(parse("2*t"), parse("x"), 1))
    assert is_zero(inv.T - parse("t/2"))
    inv2 = invert_transformation(EquivalenceTransformation(parse("t"), parse("x"), parse("x")))
    assert is_zero(inv2.U1 - parse("1/x"))
    trfp = EquivalenceTransformation(parse("exp(2*t)/2"), parse("exp(t)*x"),
                                     parse("exp(-t)"))
    invfp = invert_transformation(trfp)
    # closed-form inverse has T = ln(2t)/2: verify functionally
    assert is_zero(substitute(parse("exp(2*t)/2"), {"t": invfp.T}) - parse("t"))
    assert is_zero(substitute(parse("exp(t)*x"), {"t": invfp.T, "x": invfp.X})
                   - parse("x"))
    assert apply_equivalence(HEAT, invfp) == FP


def test_invert_roundtrip_on_coefficients():
    trs = [EquivalenceTransformation(parse("2*t"), parse("3*x"), parse("2")),
           EquivalenceTransformation(parse("t"), parse("x"), parse("x")),
           EquivalenceTransformation(parse("exp(2*t)/2"), parse("exp(t)*x"),
                                     parse("exp(-t)"))]
    eqs = [HEAT, FP, ParabolicEquation(1, parse("2/x"), 0)]
    for tr in trs:
        inv = invert_transformation(tr)
        for eq in eqs:
            assert apply_equivalence(apply_equivalence(eq, tr), inv) == eq


def test_degenerate_transformation_rejected():
    with pytest.raises(PdeError):
        EquivalenceTransformation(parse("1"), parse("x"), 1)
    with pytest.raises(PdeError):
        EquivalenceTransformation(parse("x*t"), parse("x"), 1)


def test_adjoint_pair_prolong_examples():
    q = adjoint_pair_prolong(OP_DT, HEAT)
    assert is_zero(q.zeta1) and is_zero(q.xi)
    qg = adjoint_pair_prolong(OP_G, HEAT)
    assert is_zero(qg.zeta1 - parse("x"))
    qd = adjoint_pair_prolong(OP_D, HEAT)
    assert is_zero(qd.zeta1 + 1)


def test_adjoint_pair_eta_theta_sum():
    from parapot.exprcore import differentiate
    for Q in (OP_DT, OP_DX, OP_G, OP_D, OP_PI):
        qd = adjoint_pair_prolong(Q, HEAT)
        assert is_zero(Q.zeta1 + qd.zeta1 + differentiate(Q.xi, "x"))


def test_adjoint_pair_requires_symmetry():
    from parapot.symmetry import PointOperator
    with pytest.raises(PdeError):
        adjoint_pair_prolong(PointOperator(0, 1, 0), FP)


def test_equation_text_roundtrip():
    text = 'eq { A = "1"; B = "2/x"; C = "0" }'
    eq = parse_equation_text(text)
    assert eq == ParabolicEquation(1, parse("2/x"), 0)
    red = parse_equation_text('reduced { V = "2/x^2" }')
    assert red == ParabolicEquation(1, 0, parse("-2/x^2"))
