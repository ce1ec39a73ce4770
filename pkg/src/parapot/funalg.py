"""Exact linear algebra over tuples of expressions.

Determinants (fraction-free Bareiss with cofactor fallback), Wronskians
with respect to x, linear-(in)dependence tests, constant-coefficient span
membership, and the matrix-minor identity used as a brute-force oracle.
"""

from __future__ import annotations

from fractions import Fraction

from .exprcore import Expr, as_expr, differentiate, is_zero
from .exprcore.expr import ONE_GP

P_MAX = 6  # default bound on tuple length; all desk-scale examples fit


class FunAlgError(Exception):
    pass


class FunctionTuple:
    """Ordered tuple of expressions, length >= 1 (empty allowed internally
    for the Wronskian convention W() = 1)."""

    def __init__(self, entries):
        self.entries = tuple(as_expr(e) for e in entries)
        if len(self.entries) > P_MAX:
            raise FunAlgError("tuple length %d exceeds bound %d" % (len(self.entries), P_MAX))

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __repr__(self):
        return "FunctionTuple(%s)" % ", ".join(str(e) for e in self.entries)


class ExprMatrix:
    def __init__(self, rows):
        self.rows = [[as_expr(e) for e in row] for row in rows]
        if self.rows:
            w = len(self.rows[0])
            if any(len(r) != w for r in self.rows):
                raise FunAlgError("matrix rows have unequal lengths")

    @property
    def nrows(self):
        return len(self.rows)

    @property
    def ncols(self):
        return len(self.rows[0]) if self.rows else 0

    def is_square(self):
        return self.nrows == self.ncols

    def submatrix(self, drop_rows, drop_cols):
        dr = set(drop_rows)
        dc = set(drop_cols)
        return ExprMatrix([[e for j, e in enumerate(row) if j not in dc]
                           for i, row in enumerate(self.rows) if i not in dr])


def _is_fraction_friendly(m: ExprMatrix) -> bool:
    return all(e.den == ONE_GP for row in m.rows for e in row)


def determinant(m: ExprMatrix) -> Expr:
    """Exact determinant.  Bareiss-style fraction-free elimination for
    denominator-free matrices, cofactor expansion otherwise."""
    if not m.is_square():
        raise FunAlgError("determinant of a non-square matrix")
    n = m.nrows
    if n == 0:
        return Expr.number(1)
    if _is_fraction_friendly(m):
        return _det_bareiss(m)
    return determinant_cofactor(m)


def _det_bareiss(m: ExprMatrix) -> Expr:
    n = m.nrows
    a = [[e for e in row] for row in m.rows]
    sign = 1
    prev = Expr.number(1)
    for k in range(n - 1):
        if a[k][k].is_zero_structural():
            piv = next((i for i in range(k + 1, n) if not a[i][k].is_zero_structural()), None)
            if piv is None:
                return Expr.number(0)
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev
            a[i][k] = Expr.number(0)
        prev = a[k][k]
    d = a[n - 1][n - 1]
    return d if sign == 1 else -d


def determinant_cofactor(m: ExprMatrix) -> Expr:
    """Cofactor (Laplace) expansion along the first row."""
    if not m.is_square():
        raise FunAlgError("determinant of a non-square matrix")
    n = m.nrows
    if n == 0:
        return Expr.number(1)
    if n == 1:
        return m.rows[0][0]
    total = Expr.number(0)
    for j in range(n):
        e = m.rows[0][j]
        if e.is_zero_structural():
            continue
        minor = determinant_cofactor(m.submatrix([0], [j]))
        term = e * minor
        total = total + (term if j % 2 == 0 else -term)
    return total


def wronski_matrix(fs: FunctionTuple) -> ExprMatrix:
    """Row i = (i-th x-derivative of each entry)."""
    n = len(fs)
    rows = []
    derivs = list(fs.entries)
    for i in range(n):
        rows.append(list(derivs))
        if i < n - 1:
            derivs = [differentiate(e, "x") for e in derivs]
    return ExprMatrix(rows)


def wronskian(fs) -> Expr:
    """Wronskian with respect to x; the empty tuple gives 1."""
    if not isinstance(fs, FunctionTuple):
        fs = FunctionTuple(fs)
    if len(fs) == 0:
        return Expr.number(1)
    return determinant(wronski_matrix(fs))


class IndependenceResult:
    """Boolean-like answer from is_linearly_independent; `decided` is False
    only when no evolution equation was supplied and the Wronskian vanished
    (dependent-or-undecided)."""

    def __init__(self, independent: bool, decided: bool):
        self.independent = independent
        self.decided = decided

    def __bool__(self):
        return self.independent

    def __repr__(self):
        if self.decided:
            return "independent" if self.independent else "dependent"
        return "dependent-or-undecided"


def is_linearly_independent(fs, evolution=None) -> IndependenceResult:
    """Wronskian-based independence test.

    With `evolution` (a ParabolicEquation all entries solve, which is
    checked), vanishing of the Wronskian is equivalent to dependence; without
    it a vanishing Wronskian only reports dependent-or-undecided.
    """
    if not isinstance(fs, FunctionTuple):
        fs = FunctionTuple(fs)
    if evolution is not None:
        for e in fs:
            if not evolution.is_solution(e):
                raise FunAlgError("tuple entry %s does not solve the evolution equation" % e)
    w = wronskian(fs)
    if not is_zero(w):
        return IndependenceResult(True, True)
    return IndependenceResult(False, evolution is not None)


def express_in_span(f, basis, evolution):
    """Constants c with f = sum c_i basis_i, or None when f is outside.

    Requires that the basis is independent over solutions of `evolution` and
    that f and the basis entries solve it.  The Wronskian criterion decides
    membership; the constants come from solving the Wronskian linear system
    exactly and are verified to be constant and to reconstruct f.
    """
    f = as_expr(f)
    if not isinstance(basis, FunctionTuple):
        basis = FunctionTuple(basis)
    if not evolution.is_solution(f):
        raise FunAlgError("f does not solve the evolution equation")
    indep = is_linearly_independent(basis, evolution)
    if not indep:
        raise FunAlgError("basis is dependent over the evolution equation")
    big = FunctionTuple(list(basis.entries) + [f])
    if not is_zero(wronskian(big)):
        return None
    # Solve rows: sum_i c_i * d^k(basis_i) = d^k(f), k = 0..len-1.
    n = len(basis)
    rows = []
    rhs = []
    derivs = list(basis.entries)
    fd = f
    for k in range(n):
        rows.append(list(derivs))
        rhs.append(fd)
        if k < n - 1:
            derivs = [differentiate(e, "x") for e in derivs]
            fd = differentiate(fd, "x")
    sol = _solve_linear(rows, rhs)
    if sol is None:
        raise FunAlgError("Wronskian system was singular despite independent basis")
    consts = []
    for c in sol:
        if not (c.diff("t").is_zero_structural() and c.diff("x").is_zero_structural()):
            raise FunAlgError("recovered coefficient %s is not constant" % c)
        consts.append(c)
    recon = Expr.number(0)
    for c, b in zip(consts, basis):
        recon = recon + c * b
    if not is_zero(recon - f):
        raise FunAlgError("symbolic verification of span coefficients failed")
    return consts


def _solve_linear(rows, rhs):
    """Exact Gaussian elimination over the expression field."""
    n = len(rows)
    a = [row[:] + [rhs[i]] for i, row in enumerate(rows)]
    col = 0
    piv_rows = []
    for col in range(n):
        piv = next((i for i in range(len(piv_rows), n)
                    if not a[i][col].is_zero_structural()), None)
        if piv is None:
            return None
        r = len(piv_rows)
        a[r], a[piv] = a[piv], a[r]
        pivval = a[r][col]
        a[r] = [v / pivval for v in a[r]]
        for i in range(n):
            if i != r and not a[i][col].is_zero_structural():
                factor = a[i][col]
                a[i] = [v - factor * w for v, w in zip(a[i], a[r])]
        piv_rows.append(col)
    return [a[i][n] for i in range(n)]


def minor_identity_residual(m: ExprMatrix, i: int, j: int, k: int, l: int) -> Expr:
    """Residual of the two-row/two-column minor identity

        M^i_k M^j_l - M^i_l M^j_k = sign(j-i) sign(l-k) M^{ij}_{kl} M

    (1-indexed); zero for every square matrix.  Used as a test oracle."""
    if not m.is_square():
        raise FunAlgError("minor identity needs a square matrix")
    n = m.nrows
    for idx in (i, j, k, l):
        if not 1 <= idx <= n:
            raise FunAlgError("index out of range")
    if i == j or k == l:
        raise FunAlgError("need distinct row and column indices")
    i0, j0, k0, l0 = i - 1, j - 1, k - 1, l - 1

    def minor(drs, dcs):
        return determinant(m.submatrix(drs, dcs))

    lhs = minor([i0], [k0]) * minor([j0], [l0]) - minor([i0], [l0]) * minor([j0], [k0])
    sign = (1 if j > i else -1) * (1 if l > k else -1)
    rhs = Expr.number(sign) * minor([i0, j0], [k0, l0]) * determinant(m)
    return lhs - rhs
