"""Exact linear algebra: determinants, Wronskians, span membership."""

import random
from fractions import Fraction

import pytest

from parapot.exprcore import Expr, is_zero, parse
from parapot.funalg import (ExprMatrix, FunAlgError, FunctionTuple,
                            determinant, determinant_cofactor,
                            express_in_span, is_linearly_independent,
                            minor_identity_residual, wronskian)
from parapot.pde import HEAT, ParabolicEquation

BACKWARD_HEAT = ParabolicEquation(-1, 0, 0)


def heat_poly(k):
    from parapot.catalog import heat_polynomial
    return heat_polynomial(k)


def test_determinant_examples():
    assert is_zero(determinant(ExprMatrix([[1, parse("x")], [0, 1]])) - 1)
    with pytest.raises(FunAlgError):
        determinant(ExprMatrix([[1, 2, 3], [4, 5, 6]]))


def test_wronskian_examples():
    assert is_zero(wronskian([parse("1"), parse("x")]) - 1)
    # 2x2 hand oracle: W(1, x^2-2t) = 1*(2x) - 0*(x^2-2t) = 2x
    assert is_zero(wronskian([parse("1"), parse("x^2-2*t")]) - parse("2*x"))
    # W(x, -1) = x*0 - (-1)*1 = 1
    assert is_zero(wronskian([parse("x"), parse("-1")]) - 1)
    assert is_zero(wronskian([]) - 1)


def test_wronski_of_heat_polys():
    assert is_zero(wronskian([heat_poly(0), heat_poly(1), heat_poly(2)]) - 1)
    assert is_zero(wronskian([heat_poly(0), heat_poly(1), heat_poly(3)]) - parse("x"))


def test_cofactor_equals_bareiss_on_catalog_tuples():
    from parapot.funalg import wronski_matrix
    tuples = [
        [heat_poly(k) for k in range(3)],
        [heat_poly(k) for k in range(5)],
        [parse("1"), parse("x"), parse("x^2+2*t"), parse("exp(x+t)")],
    ]
    for tup in tuples:
        m = wronski_matrix(FunctionTuple(tup))
        assert is_zero(determinant(m) - determinant_cofactor(m))


def test_independence_examples():
    assert not bool(is_linearly_independent([parse("x"), parse("2*x")]))
    r = is_linearly_independent([parse("1"), parse("x"), parse("x^2+2*t")], HEAT)
    assert bool(r) and r.decided
    # 3x3 Wronskian expansion oracle: W(1, x, x^2+2t) = det [[1,x,x^2+2t],
    # [0,1,2x],[0,0,2]] = 2
    assert is_zero(wronskian([parse("1"), parse("x"), parse("x^2+2*t")]) - 2)
    dep = is_linearly_independent([parse("exp(x+t)"), parse("exp(x+t)")], HEAT)
    assert not bool(dep) and dep.decided


def test_independence_undecided_without_evolution():
    r = is_linearly_independent([parse("x"), parse("t*x")])
    assert not bool(r) and not r.decided


def test_independence_checks_solutions():
    with pytest.raises(FunAlgError):
        is_linearly_independent([parse("x^3")], HEAT)


def test_express_in_span_examples():
    c = express_in_span(parse("3 + 2*x"), FunctionTuple([parse("1"), parse("x")]),
                        BACKWARD_HEAT)
    assert c is not None
    assert is_zero(c[0] - 3) and is_zero(c[1] - 2)
    # W(1, x, P2) = 1 != 0, so P2 is outside span(P0, P1)
    assert express_in_span(heat_poly(2), FunctionTuple([parse("1"), parse("x")]),
                           HEAT) is None
    c2 = express_in_span(heat_poly(1) - 5 * heat_poly(0),
                         FunctionTuple([heat_poly(0), heat_poly(1)]), HEAT)
    assert is_zero(c2[0] + 5) and is_zero(c2[1] - 1)


def test_express_reconstructs_exactly():
    basis = FunctionTuple([heat_poly(0), heat_poly(1), heat_poly(2)])
    f = 2 * heat_poly(2) - 7 * heat_poly(0)
    c = express_in_span(f, basis, HEAT)
    recon = sum((ci * bi for ci, bi in zip(c, basis)), Expr.number(0))
    assert is_zero(recon - f)


def test_wronskian_multilinearity():
    rng = random.Random(2)
    f, g, h = parse("1"), parse("x^2-2*t"), parse("x^3-6*t*x")
    for _ in range(4):
        c = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        lhs = wronskian([f, Expr.number(c) * g + h])
        rhs = Expr.number(c) * wronskian([f, g]) + wronskian([f, h])
        assert is_zero(lhs - rhs)


def test_minor_identity_2x2_reduces_to_det():
    m = ExprMatrix([[parse("t"), parse("x")], [parse("1"), parse("t*x")]])
    assert is_zero(minor_identity_residual(m, 1, 2, 1, 2))


def test_minor_identity_random_rational():
    rng = random.Random(17)
    for trial in range(50):
        n = rng.randint(2, 5)
        m = ExprMatrix([[Expr.number(Fraction(rng.randint(-9, 9), rng.randint(1, 4)))
                         for _ in range(n)] for _ in range(n)])
        i = rng.randint(1, n)
        j = rng.choice([v for v in range(1, n + 1) if v != i])
        k = rng.randint(1, n)
        l = rng.choice([v for v in range(1, n + 1) if v != k])
        assert is_zero(minor_identity_residual(m, i, j, k, l))


def test_minor_identity_expr_matrix():
    rng = random.Random(23)
    pool = ["t", "x", "t*x", "x^2", "1", "t^2"]
    m = ExprMatrix([[parse(rng.choice(pool)) for _ in range(4)] for _ in range(4)])
    assert is_zero(minor_identity_residual(m, 2, 4, 1, 3))


def test_minor_identity_index_errors():
    m = ExprMatrix([[1, 2], [3, 4]])
    with pytest.raises(FunAlgError):
        minor_identity_residual(m, 1, 1, 1, 2)
    with pytest.raises(FunAlgError):
        minor_identity_residual(m, 0, 1, 1, 2)


def test_p_max_bound():
    with pytest.raises(FunAlgError):
        FunctionTuple([parse("x")] * 7)
