"""Lie symmetries: verification, prolongation to potential frames,
pure-potential detection and the strictly-p-order criteria.

A point operator is Q = tau Dt + xi Dx + (zeta1 w + zeta0) Dw acting on
whichever dependent variable the context supplies.  Essential operators
have zeta0 = 0 and tau depending on t only.
"""

from __future__ import annotations

from fractions import Fraction

from .exprcore import Expr, as_expr, differentiate, is_zero, parse, to_string
from .exprcore.polys import jet_family
from .funalg import FunctionTuple, express_in_span, is_linearly_independent
from .pde import ParabolicEquation, ReducedEquation, jet, total_derivative


class SymmetryError(Exception):
    pass


class PointOperator:
    """tau Dt + xi Dx + (zeta1 * dep + zeta0) Ddep."""

    def __init__(self, tau, xi, zeta1, zeta0=0):
        self.tau = as_expr(tau)
        self.xi = as_expr(xi)
        self.zeta1 = as_expr(zeta1)
        self.zeta0 = as_expr(zeta0)

    def eta(self, dep: str = "u0") -> Expr:
        return self.zeta1 * Expr.symbol(dep) + self.zeta0

    def is_essential(self) -> bool:
        return self.zeta0.is_zero_structural() and not self.tau.depends_on("x")

    def apply_to(self, psi) -> Expr:
        """Q'[psi] = zeta1 psi - tau psi_t - xi psi_x (the associated
        first-order operator acting on functions of (t, x))."""
        psi = as_expr(psi)
        return (self.zeta1 * psi - self.tau * differentiate(psi, "t")
                - self.xi * differentiate(psi, "x"))

    def is_zero_op(self) -> bool:
        return all(e.is_zero_structural()
                   for e in (self.tau, self.xi, self.zeta1, self.zeta0))

    def __repr__(self):
        return "PointOperator(tau=%s, xi=%s, zeta1=%s, zeta0=%s)" % (
            self.tau, self.xi, self.zeta1, self.zeta0)


# the classification-table operators (reduced class)
OP_DT = PointOperator(1, 0, 0)
OP_DX = PointOperator(0, 1, 0)
OP_D = PointOperator(parse("2*t"), parse("x"), 0)
OP_PI = PointOperator(parse("4*t^2"), parse("4*t*x"), parse("-(x^2+2*t)"))
OP_G = PointOperator(0, parse("2*t"), parse("-x"))
OP_U = PointOperator(0, 0, 1)

_CASE_OPS = {
    "zero": [("Dt", OP_DT), ("Dx", OP_DX), ("G", OP_G), ("D", OP_D), ("Pi", OP_PI)],
    "mu-x-minus-2": [("Dt", OP_DT), ("D", OP_D), ("Pi", OP_PI)],
    "generic-V-of-x": [("Dt", OP_DT)],
}


class ProlongedOperator:
    """A point operator together with its prolongation coefficients on the
    dependent variables of a potential system: coeffs maps the jet symbol of
    each dependent variable (e.g. 'u0', 'v1', 'f2') to a jet expression."""

    def __init__(self, base: PointOperator, coeffs):
        self.base = base
        self.tau = base.tau
        self.xi = base.xi
        self.coeffs = dict(coeffs)

    @property
    def eta(self) -> Expr:
        return self.coeffs["u0"]

    def __repr__(self):
        parts = ["tau=%s" % self.tau, "xi=%s" % self.xi]
        parts += ["%s: %s" % (k, v) for k, v in sorted(self.coeffs.items())]
        return "ProlongedOperator(%s)" % ", ".join(parts)


class SystemSpec:
    """A potential-system manifold: base equation for the u-jets, derivative
    rules for the potential symbols, and the defining equations as
    (dependent symbol, direction, right-hand side) triples."""

    def __init__(self, eq: ParabolicEquation, rules, equations):
        self.eq = eq
        self.rules = dict(rules)
        self.equations = list(equations)


def _prolong_coefficients(op: ProlongedOperator, sys: SystemSpec, max_u_order: int = 2):
    """First prolongation coefficients phi^x, phi^t for every dependent
    variable, plus higher u-jet coefficients up to max_u_order."""
    eq, rules = sys.eq, sys.rules
    tau, xi = op.tau, op.xi
    tau_x, tau_t = differentiate(tau, "x"), differentiate(tau, "t")
    xi_x, xi_t = differentiate(xi, "x"), differentiate(xi, "t")

    def D(e, d):
        return total_derivative(e, d, eq, rules)

    ut = eq.rhs_jet()
    onshell = {"u0": (ut, jet(1))}
    for s, (dt, dx) in rules.items():
        onshell[s] = (dt, dx)

    out = {}
    for dep, coef in op.coeffs.items():
        dt_val, dx_val = onshell[dep]
        out[(dep, "x")] = D(coef, "x") - dt_val * tau_x - dx_val * xi_x
        out[(dep, "t")] = D(coef, "t") - dt_val * tau_t - dx_val * xi_t
    # higher u-jet coefficients: coef(u_{k+1}) = D_x coef(u_k)
    #   - D_x^k(ut) tau_x - u_{k+1} xi_x
    uk = out.get(("u0", "x"))
    if uk is not None:
        out[("u1", None)] = uk
        dxk_ut = ut
        prev = uk
        for k in range(1, max_u_order):
            dxk_ut = D(dxk_ut, "x")
            nxt = D(prev, "x") - dxk_ut * tau_x - jet(k + 1) * xi_x
            out[("u%d" % (k + 1), None)] = nxt
            prev = nxt
    return out


def _apply_prolonged(op: ProlongedOperator, sys: SystemSpec, e: Expr, pro) -> Expr:
    """pr Q [e] for a jet expression e on the system manifold."""
    out = op.tau * e.diff("t") + op.xi * e.diff("x")
    for s in sorted(e.jet_symbols()):
        pe = e.partial_jet(s)
        if pe.is_zero_structural():
            continue
        if s in op.coeffs:
            out = out + pe * op.coeffs[s]
        elif (s, None) in pro:
            out = out + pe * pro[(s, None)]
        else:
            raise SymmetryError("no prolongation coefficient for %s" % s)
    return out


def system_invariance_residuals(op: ProlongedOperator, sys: SystemSpec):
    """Residual of pr Q applied to each defining equation, on-shell."""
    pro = _prolong_coefficients(op, sys)
    residuals = []
    for dep, direction, rhs in sys.equations:
        lhs_coeff = pro[(dep, direction)]
        residuals.append(lhs_coeff - _apply_prolonged(op, sys, rhs, pro))
    return residuals


def invariance_residual(eq: ParabolicEquation, Q: PointOperator) -> Expr:
    """Residual of the second-prolongation invariance criterion for
    u_t = A u_xx + B u_x + C u; zero iff Q is a Lie symmetry."""
    op = ProlongedOperator(Q, {"u0": Q.eta("u0")})
    sys = SystemSpec(eq, {}, [("u0", "t", eq.rhs_jet())])
    return system_invariance_residuals(op, sys)[0]


def is_symmetry(eq: ParabolicEquation, Q: PointOperator) -> bool:
    return is_zero(invariance_residual(eq, Q))


class SymmetryClassification:
    def __init__(self, case_tag: str, operators, mu=None):
        self.case_tag = case_tag
        self.operators = list(operators)  # list of (name, PointOperator)
        self.mu = mu

    def nontrivial_count(self):
        return len(self.operators)

    def __repr__(self):
        return "SymmetryClassification(%r, %d operators)" % (
            self.case_tag, len(self.operators))


def classify_reduced(eq) -> SymmetryClassification:
    """Structural match of V against the canonical forms V = 0, mu x^-2 and
    time-independent V(x); no equivalence-group normalization is attempted
    (tag 'unknown' otherwise).  Every listed operator re-verifies."""
    red = eq if isinstance(eq, ReducedEquation) else eq.to_reduced()
    V = red.V
    mu = None
    if is_zero(V):
        tag = "zero"
    elif is_zero(differentiate(V, "t")):
        mu_candidate = V * Expr.symbol("x") ** 2
        if not mu_candidate.depends_on("x") and not mu_candidate.depends_on("t"):
            tag = "mu-x-minus-2"
            mu = mu_candidate
        else:
            tag = "generic-V-of-x"
    else:
        return SymmetryClassification("unknown", [])
    parab = red.to_parabolic()
    ops = []
    for name, Q in _CASE_OPS[tag]:
        if not is_zero(invariance_residual(parab, Q)):
            raise SymmetryError("internal: catalog operator %s fails on V=%s" % (name, V))
        ops.append((name, Q))
    return SymmetryClassification(tag, ops, mu)


# ---------------------------------------------------------------------------
# prolongation through potential systems

class SimplestPotentialSystem:
    """v_x = alpha u, v_t = beta u_x + gamma u with coefficient functions of
    (t, x); determines the initial equation and the potential equation."""

    def __init__(self, alpha, beta, gamma):
        self.alpha = as_expr(alpha)
        self.beta = as_expr(beta)
        self.gamma = as_expr(gamma)
        if self.alpha.is_zero_structural() or self.beta.is_zero_structural():
            raise SymmetryError("alpha beta != 0 is required")

    @staticmethod
    def from_characteristic(eq: ParabolicEquation, alpha) -> "SimplestPotentialSystem":
        alpha = as_expr(alpha)
        beta = alpha * eq.A
        gamma = -(differentiate(alpha * eq.A, "x") - alpha * eq.B)
        return SimplestPotentialSystem(alpha, beta, gamma)

    def initial_equation(self) -> ParabolicEquation:
        a, b, g = self.alpha, self.beta, self.gamma
        return ParabolicEquation(b / a,
                                 (differentiate(b, "x") + g) / a,
                                 (differentiate(g, "x") - differentiate(a, "t")) / a)

    def potential_equation(self) -> ParabolicEquation:
        a, b, g = self.alpha, self.beta, self.gamma
        return ParabolicEquation(b / a,
                                 g / a - b * differentiate(a, "x") / (a * a),
                                 0)

    def system_spec(self) -> SystemSpec:
        eq = self.initial_equation()
        rules = {"v1": (self.beta * jet(1) + self.gamma * jet(0),
                        self.alpha * jet(0))}
        eqs = [("v1", "x", self.alpha * jet(0)),
               ("v1", "t", self.beta * jet(1) + self.gamma * jet(0)),
               ("u0", "t", eq.rhs_jet())]
        return SystemSpec(eq, rules, eqs)


def prolong_simplest(Qp: PointOperator, sys: SimplestPotentialSystem) -> ProlongedOperator:
    """Prolong a Lie symmetry of the potential equation to the potential
    system: eta = (theta_v - xi_x - tau alpha_t/alpha - xi alpha_x/alpha) u
    + theta_x / alpha, with theta = zeta1 v + zeta0."""
    poteq = sys.potential_equation()
    if not is_zero(invariance_residual(poteq, Qp)):
        raise SymmetryError("operator is not a Lie symmetry of the potential equation")
    a = sys.alpha
    tau, xi = Qp.tau, Qp.xi
    theta = Qp.zeta1 * Expr.symbol("v1") + Qp.zeta0
    theta_x = differentiate(Qp.zeta1, "x") * Expr.symbol("v1") + differentiate(Qp.zeta0, "x")
    eta = ((Qp.zeta1 - differentiate(xi, "x") - tau * differentiate(a, "t") / a
            - xi * differentiate(a, "x") / a) * jet(0) + theta_x / a)
    op = ProlongedOperator(Qp, {"u0": eta, "v1": theta})
    spec = sys.system_spec()
    for r in system_invariance_residuals(op, spec):
        if not is_zero(r):
            raise SymmetryError("internal: prolonged operator fails on the potential system")
    return op


def prolong_frame(Qp: PointOperator, frame) -> ProlongedOperator:
    """Prolong a Lie symmetry of the p-level potential equation
    f^p_t = A f^p_xx - ((G^p + A H^p_x)/H^p) f^p_x backwards through
    f^{s-1} = f^s_x / H^s:

      theta^{s-1} = (theta^s_{f^s} - xi_x - tau H^s_t/H^s - xi H^s_x/H^s) f^{s-1}
                    + sum_{sigma>s} (H^sigma/H^s) theta^s_{f^sigma} f^{sigma-1}
                    + theta^s_x / H^s.
    """
    p = frame.p
    peq = frame.level_potential_equation()
    if not is_zero(invariance_residual(peq, Qp)):
        raise SymmetryError("operator is not a Lie symmetry of the p-level potential equation")
    tau, xi = Qp.tau, Qp.xi
    xi_x = differentiate(xi, "x")
    fsym = lambda s: "f%d" % s if s >= 1 else "u0"
    thetas = {fsym(p): Qp.zeta1 * Expr.symbol(fsym(p)) + Qp.zeta0}
    H = frame.H
    for s in range(p, 0, -1):
        th = thetas[fsym(s)]
        Hs = H[s]
        lead = (th.partial_jet(fsym(s)) - xi_x
                - tau * differentiate(Hs, "t") / Hs
                - xi * differentiate(Hs, "x") / Hs)
        nxt = lead * Expr.symbol(fsym(s - 1))
        for sigma in range(s + 1, p + 1):
            c = th.partial_jet(fsym(sigma))
            if not c.is_zero_structural():
                nxt = nxt + (H[sigma] / Hs) * c * Expr.symbol(fsym(sigma - 1))
        nxt = nxt + th.diff("x") / Hs
        thetas[fsym(s - 1)] = nxt
    op = ProlongedOperator(Qp, thetas)
    spec = frame.f_system_spec()
    for r in system_invariance_residuals(op, spec):
        if not is_zero(r):
            raise SymmetryError("internal: frame prolongation fails the system check")
    return op


def is_pure_potential(op: ProlongedOperator, level: int = 0) -> bool:
    """True iff the coefficient at level s depends on a strictly higher
    potential (u-coefficient on some v/f/w, or theta^s on f^sigma, sigma>s)."""
    if level == 0:
        coef = op.coeffs.get("u0")
    else:
        coef = None
        for fam in ("f", "v", "w"):
            coef = op.coeffs.get("%s%d" % (fam, level))
            if coef is not None:
                break
    if coef is None:
        raise SymmetryError("operator has no coefficient at level %d" % level)
    for s in coef.jet_symbols():
        fam, idx = jet_family(s)
        if fam in ("v", "f", "w") and idx > level:
            if not coef.partial_jet(s).is_zero_structural():
                return True
    return False


# ---------------------------------------------------------------------------
# eigen tests and invariant subspaces

def eigen_test(Qp: PointOperator, psi, eq: ParabolicEquation):
    """('eigenfunction', lambda) if Q'[psi] = lambda psi, else
    ('independent', None); independence means Qp induces a simplest pure
    potential symmetry through psi."""
    psi = as_expr(psi)
    if not is_zero(invariance_residual(eq, Qp)):
        raise SymmetryError("operator is not a symmetry of the equation")
    if not eq.is_solution(psi):
        raise SymmetryError("psi does not solve the equation")
    img = Qp.apply_to(psi)
    if is_zero(img):
        return ("eigenfunction", Fraction(0))
    co = express_in_span(img, FunctionTuple([psi]), eq)
    if co is None:
        return ("independent", None)
    lam = co[0].as_fraction()
    return ("eigenfunction", lam if lam is not None else co[0])


def stable_invariant_subspace(Qp: PointOperator, psis, eq: ParabolicEquation):
    """Largest Q'-invariant subspace of span(psis), via the iteration
    S_k = {v in S_{k-1} : Q'[v] in S_{k-1}}; returns a basis list (possibly
    empty)."""
    if not isinstance(psis, FunctionTuple):
        psis = FunctionTuple(psis)
    if not is_zero(invariance_residual(eq, Qp)):
        raise SymmetryError("operator is not a symmetry of the equation")
    if not is_linearly_independent(psis, eq):
        raise SymmetryError("psis must be linearly independent solutions")
    basis = list(psis.entries)
    while basis:
        images = [Qp.apply_to(b) for b in basis]
        # extend to a basis accommodating all images
        ext = list(basis)
        for g in images:
            if is_zero(g):
                continue
            if express_in_span(g, FunctionTuple(ext), eq) is None:
                ext.append(g)
        coords = []
        for g in images:
            if is_zero(g):
                coords.append([Expr.number(0)] * len(ext))
                continue
            co = express_in_span(g, FunctionTuple(ext), eq)
            coords.append(list(co))
        n_out = len(ext) - len(basis)
        if n_out == 0:
            return basis  # invariant already
        # lambda-vectors with sum_i lambda_i * (outside coords of image_i) = 0
        rows = []
        for k in range(len(basis), len(ext)):
            rows.append([coords[i][k] for i in range(len(basis))])
        null = _nullspace_expr(rows, len(basis))
        if not null:
            return []
        new_basis = []
        for vec in null:
            cand = Expr.number(0)
            for c, b in zip(vec, basis):
                cand = cand + c * b
            new_basis.append(cand)
        if len(new_basis) == len(basis):
            return basis
        basis = new_basis
    return []


def _nullspace_expr(rows, ncols):
    """Nullspace basis of a small matrix of constant Exprs (exact)."""
    mat = [row[:] for row in rows]
    nrows = len(mat)
    piv_of_col = {}
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if not mat[i][c].is_zero_structural()), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        pv = mat[r][c]
        mat[r] = [v / pv for v in mat[r]]
        for i in range(nrows):
            if i != r and not mat[i][c].is_zero_structural():
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        piv_of_col[c] = r
        r += 1
    free = [c for c in range(ncols) if c not in piv_of_col]
    out = []
    for fc in free:
        vec = [Expr.number(0)] * ncols
        vec[fc] = Expr.number(1)
        for c, pr in piv_of_col.items():
            vec[c] = -mat[pr][fc]
        out.append(vec)
    return out


def strictly_p_order(Qp: PointOperator, psis, eq: ParabolicEquation) -> bool:
    """True iff no nonzero Q'-invariant subspace of span(psis) exists
    (equivalently, by the one-/two-dimensional reduction, no invariant line
    or plane)."""
    return len(stable_invariant_subspace(Qp, psis, eq)) == 0


# ---------------------------------------------------------------------------
# exact linear-algebra core and brute-force oracle (rational matrices)

def stable_subspace_linear(A, B):
    """Largest subspace S of Q^n with A(S) <= S and B(S) = 0.

    A: n x n, B: m x n nested lists of Fractions.  Returns a basis as a list
    of vectors.  This is the abstract form of the symbolic iteration: the
    rows of B are the 'escaping' coordinates of the images."""
    n = len(A)
    basis = _identity_basis(n)
    while basis:
        rows = []
        for bvec in _matrix_rows(B):
            rows.append([_dot(bvec, v) for v in basis])
        # images of basis vectors
        imgs = [_mat_vec(A, v) for v in basis]
        comp = _complement_constraints(imgs, basis, n)
        rows.extend(comp)
        null = _nullspace_frac(rows, len(basis))
        if len(null) == len(basis):
            return basis
        basis = [_combine(vec, basis) for vec in null]
    return []


def _identity_basis(n):
    return [[Fraction(i == j) for j in range(n)] for i in range(n)]


def _matrix_rows(B):
    return [row[:] for row in B]


def _dot(a, b):
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def _mat_vec(A, v):
    return [_dot(row, v) for row in A]


def _combine(coeffs, basis):
    n = len(basis[0])
    out = [Fraction(0)] * n
    for c, b in zip(coeffs, basis):
        for i in range(n):
            out[i] += c * b[i]
    return out


def _complement_constraints(imgs, basis, n):
    """Rows expressing 'image of combination stays in span(basis)'."""
    # Build a projector complement: find linear functionals vanishing on
    # span(basis); each functional f gives the row [f(img_1), ...].
    rows = []
    # functionals: vectors w with w . b = 0 for all b in basis
    bt = [list(b) for b in basis]
    funcs = _nullspace_frac(bt, n)
    for w in funcs:
        rows.append([_dot(w, img) for img in imgs])
    return rows


def _nullspace_frac(rows, ncols):
    mat = [row[:] for row in rows]
    nrows = len(mat)
    piv_of_col = {}
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if mat[i][c] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        pv = mat[r][c]
        mat[r] = [v / pv for v in mat[r]]
        for i in range(nrows):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        piv_of_col[c] = r
        r += 1
    free = [c for c in range(ncols) if c not in piv_of_col]
    out = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for c, pr in piv_of_col.items():
            vec[c] = -mat[pr][fc]
        out.append(vec)
    return out


def _charpoly(A):
    """Characteristic polynomial det(x I - A) as a list of Fractions,
    lowest degree first, via Faddeev-LeVerrier."""
    n = len(A)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    M = [[Fraction(0)] * n for _ in range(n)]
    c = Fraction(1)
    Mk = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    AM = Mk
    for k in range(1, n + 1):
        AM = [[_dot(A[i], [Mk[r][j] for r in range(n)]) for j in range(n)] for i in range(n)]
        tr = sum(AM[i][i] for i in range(n))
        c = -tr / k
        coeffs[n - k] = c
        Mk = [[AM[i][j] + (c if i == j else 0) for j in range(n)] for i in range(n)]
    return coeffs


def _rational_roots(coeffs):
    """All rational roots of the polynomial (lowest-first Fraction coeffs)."""
    # clear denominators
    from math import gcd
    den = 1
    for c in coeffs:
        den = den * c.denominator // gcd(den, c.denominator)
    ic = [int(c * den) for c in coeffs]
    while ic and ic[-1] == 0:
        ic.pop()
    if not ic:
        return []
    shift = 0
    while ic[0] == 0:
        ic.pop(0)
        shift += 1
    roots = set([Fraction(0)] if shift else [])
    a0, an = abs(ic[0]), abs(ic[-1])

    def divisors(m):
        out = set()
        d = 1
        while d * d <= m:
            if m % d == 0:
                out.add(d)
                out.add(m // d)
            d += 1
        return out

    for p in divisors(a0) or {0}:
        for q in divisors(an):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if sum(c * cand ** i for i, c in enumerate(ic)) == 0:
                    roots.add(cand)
    return sorted(roots)


def _poly_div_root(coeffs, r):
    """Synthetic division of the polynomial by (x - r); exact."""
    n = len(coeffs) - 1
    out = [Fraction(0)] * n
    acc = coeffs[n]
    for i in range(n - 1, -1, -1):
        out[i] = acc
        acc = coeffs[i] + acc * r
    return out


def invariant_12_exists_bruteforce(A, B) -> bool:
    """Oracle: is there a nonzero invariant subspace, detected through the
    one-/two-dimensional reduction?  Exact eigen-analysis for sizes up to 3:
    rational roots give candidate lines, irreducible quadratic factors of
    the characteristic polynomial give candidate planes, and a vanishing
    escape map leaves the whole space invariant (over the reals a line or
    plane always sits inside it; over Q an irreducible cubic has no proper
    invariant subspace, so the whole-space case must be answered directly)."""
    n = len(A)
    if all(all(v == 0 for v in row) for row in B):
        return n >= 1
    cp = _charpoly(A)
    roots = _rational_roots(cp)
    for lam in roots:
        Ml = [[A[i][j] - (lam if i == j else 0) for j in range(n)] for i in range(n)]
        rows = Ml + _matrix_rows(B)
        if _nullspace_frac(rows, n):
            return True
    # strip rational roots, look for irreducible quadratic factors
    rem = cp[:]
    for lam in roots:
        while len(rem) > 1 and sum(c * lam ** i for i, c in enumerate(rem)) == 0:
            rem = _poly_div_root(rem, lam)
    deg = len(rem) - 1
    if deg == 2:
        b = rem[1] / rem[2]
        c = rem[0] / rem[2]
        # plane = ker(A^2 + b A + c); invariant by construction
        A2 = [[_dot(A[i], [A[r][j] for r in range(n)]) for j in range(n)] for i in range(n)]
        Q = [[A2[i][j] + b * A[i][j] + (c if i == j else 0) for j in range(n)]
             for i in range(n)]
        plane = _nullspace_frac(Q, n)
        if len(plane) == 2:
            ok = all(all(_dot(brow, v) == 0 for brow in _matrix_rows(B)) for v in plane)
            if ok:
                return True
    return False


# ---------------------------------------------------------------------------
# the frame-level report

class PotentialSymmetryReport:
    def __init__(self, case_tag, exists, generators, strict, notes):
        self.case_tag = case_tag
        self.exists = exists
        self.generators = generators
        self.strict = strict
        self.notes = notes

    def __repr__(self):
        return ("PotentialSymmetryReport(case=%s, exists=%s, generators=%s, "
                "strict=%s)" % (self.case_tag, self.exists, self.generators, self.strict))


def potential_symmetry_report(eq: ParabolicEquation, alphas) -> PotentialSymmetryReport:
    """Build the frame over (eq, alphas), classify the p-level modified
    potential equation, prolong each nontrivial operator and report
    pure-potential existence and strictness of the order."""
    from .frame import build_frame
    fr = build_frame(eq, alphas)
    p = fr.p
    wp_eq = fr.modified_potential_equation(p)
    notes = []
    try:
        red = wp_eq.to_reduced()
    except Exception:
        return PotentialSymmetryReport("unknown", None, [], None,
                                       ["p-level equation is not reduced; supply a reducing transformation"])
    cls = classify_reduced(red)
    if cls.case_tag == "unknown":
        return PotentialSymmetryReport("unknown", None, [], None,
                                       ["undecided: supply reducing transformation"])
    psis = FunctionTuple(fr.w_solutions(p))
    generators = []
    strict_ops = []
    for name, Q in cls.operators:
        pro = fr.prolong_through_w(Q)
        pure = any(is_pure_potential(pro, lvl) for lvl in range(0, p))
        strict = strictly_p_order(Q, psis, wp_eq)
        if pure:
            generators.append(name)
        if strict:
            strict_ops.append(name)
    exists = bool(generators)
    strict = bool(strict_ops)
    if cls.case_tag == "generic-V-of-x":
        notes.append("sufficient-condition only (single nontrivial operator)")
    return PotentialSymmetryReport(cls.case_tag, exists, generators, strict, notes)


def operators_equal_mod_trivial(Q1: PointOperator, Q2: PointOperator,
                                eq: ParabolicEquation) -> bool:
    """Equality modulo the trivial algebra <u du, f du>."""
    if not (is_zero(Q1.tau - Q2.tau) and is_zero(Q1.xi - Q2.xi)):
        return False
    d1 = Q1.zeta1 - Q2.zeta1
    if d1.depends_on("t") or d1.depends_on("x"):
        return False
    return eq.is_solution(Q1.zeta0 - Q2.zeta0)
