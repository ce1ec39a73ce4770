"""Conservation laws: characteristics, conserved vectors, transformations."""

import pytest

from parapot.claws import (Characteristic, ClawError, ConservedVector2D,
                           canonical_conserved_vector,
                           conserved_vectors_equivalent, divergence_residual,
                           symmetry_action_on_cv, transform_characteristic,
                           transform_conserved_vector, verify_characteristic)
from parapot.exprcore import Expr, is_zero, parse
from parapot.pde import (HEAT, EquivalenceTransformation, ParabolicEquation,
                         invert_transformation)
from parapot.symmetry import OP_DT, OP_DX, PointOperator

FP = ParabolicEquation(1, parse("x"), 1)
V2X2 = ParabolicEquation(1, 0, parse("-2/x^2"))


def test_verify_characteristic_examples():
    assert verify_characteristic(HEAT, parse("1"))
    assert verify_characteristic(HEAT, parse("x"))
    assert not verify_characteristic(HEAT, parse("t"))
    # residual of t is exactly 1
    assert is_zero(HEAT.adjoint_residual(parse("t")) - 1)


def test_characteristic_constructor_verifies():
    with pytest.raises(ClawError):
        Characteristic(parse("t"), HEAT)


def test_canonical_cv_examples():
    cv1 = canonical_conserved_vector(HEAT, parse("1"))
    assert is_zero(cv1.F - parse("u0")) and is_zero(cv1.G + parse("u1"))
    cvx = canonical_conserved_vector(HEAT, parse("x"))
    assert is_zero(cvx.F - parse("x*u0"))
    assert is_zero(cvx.G - parse("-x*u1+u0"))
    cvfp = canonical_conserved_vector(FP, parse("1"))
    assert is_zero(cvfp.G - parse("-u1-x*u0"))


def test_divergence_residual_examples():
    cv = canonical_conserved_vector(HEAT, parse("1"))
    assert is_zero(divergence_residual(cv, HEAT))
    bad = ConservedVector2D(parse("u0"), 0, HEAT, verify=False)
    assert is_zero(divergence_residual(bad, HEAT) - parse("u2"))
    cvfp = canonical_conserved_vector(FP, parse("1"))
    assert is_zero(divergence_residual(cvfp, FP))


CATALOG_PAIRS = [
    (HEAT, "1"), (HEAT, "x"), (HEAT, "x^2-2*t"), (HEAT, "exp(x-t)"),
    (ParabolicEquation(1, 0, parse("-2/x^2")), "x^2"),
    (ParabolicEquation(1, 0, parse("-2/x^2")), "-(x^2+2*t)/(2*x)"),
    (FP, "1"), (FP, "exp(t)*x"),
]


def test_divergence_zero_for_catalog_pairs():
    for eq, alpha in CATALOG_PAIRS:
        cv = canonical_conserved_vector(eq, parse(alpha))
        assert is_zero(divergence_residual(cv, eq)), (eq, alpha)


def test_transform_characteristic_identity():
    tr = EquivalenceTransformation(parse("t"), parse("x"), 1)
    ch = Characteristic(parse("x"), HEAT)
    out = transform_characteristic(ch, tr)
    assert is_zero(out.alpha - parse("x"))


def test_transform_characteristic_gauge():
    # B = 2/x Kolmogorov equation, u' = x u: alpha = x maps to 1
    eq = ParabolicEquation(1, parse("2/x"), 0)
    tr = EquivalenceTransformation(parse("t"), parse("x"), parse("x"))
    ch = Characteristic(parse("x"), eq)
    out = transform_characteristic(ch, tr)
    assert is_zero(out.alpha - 1)
    assert out.equation == HEAT


def test_transform_characteristic_heat_to_fp():
    # heat -> Fokker-Planck: alpha = x corresponds to exp(t~) x~
    trfp = EquivalenceTransformation(parse("exp(2*t)/2"), parse("exp(t)*x"),
                                     parse("exp(-t)"))
    inv = invert_transformation(trfp)
    ch = Characteristic(parse("x"), HEAT)
    out = transform_characteristic(ch, inv)
    assert out.equation == FP
    assert is_zero(out.alpha - parse("exp(t)*x"))


def test_transform_characteristic_roundtrip():
    trfp = EquivalenceTransformation(parse("exp(2*t)/2"), parse("exp(t)*x"),
                                     parse("exp(-t)"))
    ch = Characteristic(parse("exp(t)*x"), FP)
    there = transform_characteristic(ch, trfp)
    back = transform_characteristic(there, invert_transformation(trfp))
    assert is_zero(back.alpha - ch.alpha)
    assert back.equation == FP


def test_transform_cv_identity():
    tr = EquivalenceTransformation(parse("t"), parse("x"), 1)
    cv = canonical_conserved_vector(HEAT, parse("x"))
    out = transform_conserved_vector(cv, tr)
    assert is_zero(out.F - cv.F) and is_zero(out.G - cv.G)


def test_transform_cv_scaling():
    tr = EquivalenceTransformation(parse("4*t"), parse("2*x"), 1)
    cv = canonical_conserved_vector(HEAT, parse("1"))
    out = transform_conserved_vector(cv, tr)
    assert out.equation == HEAT
    assert is_zero(divergence_residual(out, HEAT))
    # density halves: F~ = u/2
    assert is_zero(out.F - parse("u0/2"))


def test_transform_cv_matches_transformed_characteristic():
    eq = ParabolicEquation(1, parse("2/x"), 0)
    tr = EquivalenceTransformation(parse("t"), parse("x"), parse("x"))
    cv = canonical_conserved_vector(eq, parse("x"))
    out = transform_conserved_vector(cv, tr)
    want = canonical_conserved_vector(HEAT, parse("1"))
    assert conserved_vectors_equivalent(out, want, HEAT)


def test_symmetry_action_examples():
    # d_t on the conserved vector of alpha = x^2 - 2t gives characteristic
    # 2 = -alpha_t
    cv = canonical_conserved_vector(HEAT, parse("x^2-2*t"))
    out = symmetry_action_on_cv(cv, OP_DT, HEAT)
    want = canonical_conserved_vector(HEAT, parse("2"))
    assert conserved_vectors_equivalent(out, want, HEAT)
    # u du acts as -1
    cv1 = canonical_conserved_vector(HEAT, parse("1"))
    out2 = symmetry_action_on_cv(cv1, PointOperator(0, 0, 1), HEAT)
    assert is_zero(out2.F + cv1.F) and is_zero(out2.G + cv1.G)
    # zero operator gives the zero vector
    out3 = symmetry_action_on_cv(cv1, PointOperator(0, 0, 0), HEAT)
    assert is_zero(out3.F) and is_zero(out3.G)


def test_symmetry_action_dx():
    # d_x acting on cv of alpha yields cv of -alpha_x
    for alpha in ("x", "x^2-2*t", "x^3-6*t*x"):
        cv = canonical_conserved_vector(HEAT, parse(alpha))
        out = symmetry_action_on_cv(cv, OP_DX, HEAT)
        want = canonical_conserved_vector(HEAT, -parse(alpha).diff("x"))
        assert conserved_vectors_equivalent(out, want, HEAT), alpha


def test_symmetry_action_dt():
    for alpha in ("x^2-2*t", "x^3-6*t*x"):
        cv = canonical_conserved_vector(HEAT, parse(alpha))
        out = symmetry_action_on_cv(cv, OP_DT, HEAT)
        want = canonical_conserved_vector(HEAT, -parse(alpha).diff("t"))
        assert conserved_vectors_equivalent(out, want, HEAT), alpha


def test_symmetry_action_requires_symmetry():
    cv = canonical_conserved_vector(HEAT, parse("1"))
    with pytest.raises(ClawError):
        symmetry_action_on_cv(cv, PointOperator(0, parse("x"), 0), HEAT)


def test_equivalence_modulo_trivial_shift():
    cv = canonical_conserved_vector(HEAT, parse("1"))
    other = ConservedVector2D(cv.F + parse("u1"),
                              cv.G - parse("u2"), HEAT, verify=False)
    # differs by the total derivative pair (D_x u, -D_t u): equivalent
    assert conserved_vectors_equivalent(cv, other, HEAT)
    third = canonical_conserved_vector(HEAT, parse("x"))
    assert not conserved_vectors_equivalent(cv, third, HEAT)
