"""Exact symbolic expression engine over the variables t and x.

Public surface: the Expr class, parse/print, differentiation, arithmetic,
substitution, the decidable zero test with its numeric cross-check oracle,
and rational-point evaluation.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .expr import (ClassError, Expr, ExprError, LogLinear, PoleError,
                   ZeroTestError, as_expr, evaluate, jet, substitute)
from .parse import ParseError, parse, to_string

__all__ = [
    "ClassError", "Expr", "ExprError", "LogLinear", "ParseError",
    "PoleError", "ZeroTestError", "arith", "as_expr", "differentiate",
    "evaluate_at", "is_zero", "jet", "parse", "substitute", "to_string",
]

#: numeric cross-check configuration for is_zero
NUMERIC_CHECK = True
NUMERIC_SEED = 0
_NUM_POINTS = 20
_MAX_DEN = 10 ** 4
_TOL = Fraction(1, 10 ** 20)


def differentiate(e: Expr, var: str, n: int = 1) -> Expr:
    if var not in ("t", "x"):
        raise ValueError("differentiation variable must be 't' or 'x'")
    if n < 0:
        raise ValueError("derivative order must be nonnegative")
    return e.diff(var, n)


def arith(e1: Expr, e2: Expr, op: str) -> Expr:
    if op == "add":
        return e1 + e2
    if op == "sub":
        return e1 - e2
    if op == "mul":
        return e1 * e2
    if op == "div":
        if is_zero(e2):
            raise ZeroDivisionError("division by the zero expression")
        return e1 / e2
    raise ValueError("unknown operation %r" % op)


def _random_point(symbols, rng):
    pt = {}
    for s in symbols:
        num = rng.randint(1, _MAX_DEN)
        den = rng.randint(1, _MAX_DEN)
        pt[s] = Fraction(num, den) + rng.randint(0, 3)
    return pt


def is_zero(e: Expr, check: bool | None = None) -> bool:
    """True iff e is identically zero.

    Structural test on the canonical form, cross-checked by evaluation at
    randomized rational points; a disagreement raises ZeroTestError since it
    indicates a normalization bug.
    """
    structural = e.is_zero_structural()
    do_check = NUMERIC_CHECK if check is None else check
    if not do_check:
        return structural
    rng = random.Random(NUMERIC_SEED)
    syms = sorted(e.symbols())
    witnesses = 0
    for _ in range(_NUM_POINTS):
        pt = _random_point(syms, rng)
        try:
            val, err = evaluate(e, pt)
        except PoleError:
            continue
        bound = max(err * 4, _TOL)
        if structural:
            if abs(val) > bound:
                raise ZeroTestError(
                    "structurally zero but |value| = %s > %s at %s" % (val, bound, pt))
        else:
            if abs(val) > bound:
                witnesses += 1
    if not structural and witnesses == 0:
        raise ZeroTestError(
            "structurally nonzero but numerically vanishing at all sample points: %s" % (e,))
    return structural


def evaluate_at(e: Expr, point: dict):
    """Evaluate at a rational point; returns (value, error_bound)."""
    return evaluate(e, point)
