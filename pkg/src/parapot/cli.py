"""Command-line front end.

Subcommands: adjoint, claw verify|cv|transform, darboux apply|target|dual,
crum, frame build|check, symmetry check|prolong|potsym,
catalog heatpoly|ladder|fixture|make-v.

Reports are deterministic key/value trees (UTF-8, LF); --json switches to a
JSON rendering of the same tree.  Exit codes: 0 success, 1 check failure,
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import exprcore
from .exprcore import Expr, is_zero, parse, to_string
from .pde import (EquivalenceTransformation, ParabolicEquation,
                  parse_equation_text)


class Report:
    """Ordered key/value tree; values are strings, bools or sub-reports."""

    def __init__(self):
        self.items = []

    def add(self, key, value):
        self.items.append((key, value))
        return self

    def check(self, name, passed, residual=None):
        sub = Report()
        sub.add("pass", bool(passed))
        if residual is not None:
            sub.add("residual", residual if isinstance(residual, str) else to_string(residual))
        self.add("check %s" % name, sub)
        return bool(passed)

    def render(self, indent=0):
        out = []
        for k, v in self.items:
            if isinstance(v, Report):
                out.append("  " * indent + k + ":")
                out.append(v.render(indent + 1))
            else:
                if isinstance(v, bool):
                    v = "pass" if v else "FAIL"
                out.append("  " * indent + "%s: %s" % (k, v))
        return "\n".join(out)

    def to_obj(self):
        obj = {}
        for k, v in self.items:
            obj[k] = v.to_obj() if isinstance(v, Report) else v
        return obj

    def all_checks_pass(self):
        okay = True
        for k, v in self.items:
            if isinstance(v, Report):
                if k.startswith("check "):
                    sub = dict(v.items)
                    okay = okay and bool(sub.get("pass", True))
                okay = okay and v.all_checks_pass()
        return okay


def _load_equation(path: str) -> ParabolicEquation:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_equation_text(fh.read())


def _parse_list(text: str):
    return [parse(part.strip()) for part in text.split(";") if part.strip()]


def _expr_arg(text: str) -> Expr:
    return parse(text)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="parapot",
                                 description="exact toolkit for conservation laws, Darboux "
                                             "transformations and potential symmetries of "
                                             "linear 1+1 parabolic equations")
    ap.add_argument("--json", action="store_true", help="emit the report as JSON")
    ap.add_argument("--seed", type=int, default=0,
                    help="seed of the numeric zero-test oracle (default 0)")
    sub = ap.add_subparsers(dest="cmd")

    p_adj = sub.add_parser("adjoint", help="adjoint equation of --eq")
    p_adj.add_argument("--eq", required=True)

    p_claw = sub.add_parser("claw", help="conservation-law operations")
    p_claw.add_argument("mode", choices=["verify", "cv", "transform"])
    p_claw.add_argument("--eq", required=True)
    p_claw.add_argument("--alphas", required=True, help="semicolon-separated characteristics")
    p_claw.add_argument("--map", help='transformation "T;X;U1[;U0]" for mode=transform')

    p_dar = sub.add_parser("darboux", help="single Darboux transformation")
    p_dar.add_argument("mode", choices=["apply", "target", "dual"])
    p_dar.add_argument("--eq", required=True)
    p_dar.add_argument("--seeds", required=True)
    p_dar.add_argument("--apply", dest="apply_expr")

    p_crum = sub.add_parser("crum", help="multiple Darboux transformation")
    p_crum.add_argument("--eq", required=True)
    p_crum.add_argument("--seeds", required=True)
    p_crum.add_argument("--apply", dest="apply_expr")

    p_fr = sub.add_parser("frame", help="potential frame")
    p_fr.add_argument("mode", choices=["build", "check"])
    p_fr.add_argument("--eq", required=True)
    p_fr.add_argument("--alphas", required=True)

    p_sym = sub.add_parser("symmetry", help="symmetry operations")
    p_sym.add_argument("mode", choices=["check", "prolong", "potsym"])
    p_sym.add_argument("--eq", required=True)
    p_sym.add_argument("--op", help='operator "tau;xi;zeta1[;zeta0]"')
    p_sym.add_argument("--alphas")

    p_cat = sub.add_parser("catalog", help="catalog generators and fixtures")
    p_cat.add_argument("mode", choices=["heatpoly", "ladder", "fixture", "make-v"])
    p_cat.add_argument("--k", type=int, default=0)
    p_cat.add_argument("--mu", default="0")
    p_cat.add_argument("--name")
    p_cat.add_argument("--base", default="0", help="base potential P(x) for make-v")
    p_cat.add_argument("--seeds", help="seed tuple for make-v")

    args = ap.parse_args(argv)
    if args.cmd is None:
        ap.print_usage(sys.stderr)
        return 2
    exprcore.NUMERIC_SEED = args.seed

    rep = Report()
    rep.add("command", " ".join(argv if argv is not None else sys.argv[1:]))
    t0 = time.time()
    try:
        handler = _HANDLERS[args.cmd]
        handler(args, rep)
    except _UsageError as exc:
        print("usage error: %s" % exc, file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - surface domain errors
        rep.add("error", "%s: %s" % (type(exc).__name__, exc))
        rep.add("timing_s", "%.3f" % (time.time() - t0))
        _emit(rep, args.json)
        return 1
    rep.add("timing_s", "%.3f" % (time.time() - t0))
    _emit(rep, args.json)
    return 0 if rep.all_checks_pass() else 1


class _UsageError(Exception):
    pass


def _emit(rep: Report, as_json: bool):
    if as_json:
        sys.stdout.write(json.dumps(rep.to_obj(), indent=1, default=str) + "\n")
    else:
        sys.stdout.write(rep.render() + "\n")


def _cmd_adjoint(args, rep: Report):
    from .pde import equation_text
    eq = _load_equation(args.eq)
    rep.add("input", equation_text(eq))
    adj = eq.adjoint()
    rep.add("adjoint", equation_text(adj))
    rep.check("involution", eq.adjoint().adjoint() == eq)


def _cmd_claw(args, rep: Report):
    from .claws import (Characteristic, canonical_conserved_vector,
                        divergence_residual, transform_characteristic,
                        transform_conserved_vector, verify_characteristic)
    eq = _load_equation(args.eq)
    alphas = _parse_list(args.alphas)
    if args.mode == "verify":
        for i, a in enumerate(alphas):
            resid = eq.adjoint_residual(a)
            rep.check("characteristic_%d" % i, is_zero(resid), resid)
        return
    if args.mode == "cv":
        for i, a in enumerate(alphas):
            cv = canonical_conserved_vector(eq, a)
            sub = Report()
            sub.add("F", to_string(cv.F))
            sub.add("G", to_string(cv.G))
            resid = divergence_residual(cv, eq)
            sub.check("divergence", is_zero(resid), resid)
            rep.add("conserved_vector_%d" % i, sub)
        return
    if not args.map:
        raise _UsageError("claw transform needs --map \"T;X;U1[;U0]\"")
    parts = _parse_list(args.map)
    if len(parts) not in (3, 4):
        raise _UsageError("--map needs T;X;U1[;U0]")
    tr = EquivalenceTransformation(*parts)
    for i, a in enumerate(alphas):
        ch = Characteristic(a, eq)
        out = transform_characteristic(ch, tr)
        sub = Report()
        sub.add("alpha", to_string(out.alpha))
        sub.check("verified_on_target", verify_characteristic(out.equation, out.alpha))
        rep.add("characteristic_%d" % i, sub)
        cv = canonical_conserved_vector(eq, a)
        cvt = transform_conserved_vector(cv, tr)
        sub2 = Report()
        sub2.add("F", to_string(cvt.F))
        sub2.add("G", to_string(cvt.G))
        sub2.check("divergence", is_zero(divergence_residual(cvt, cvt.equation)))
        rep.add("conserved_vector_%d" % i, sub2)


def _cmd_darboux(args, rep: Report):
    from .darboux import (DarbouxSeed, crum_target_equation, dt_apply,
                          dt_target_equation, dual_characteristics)
    from .funalg import FunctionTuple
    from .pde import equation_text
    eq = _load_equation(args.eq)
    seeds = _parse_list(args.seeds)
    seed = DarbouxSeed(FunctionTuple(seeds), eq)
    if args.mode == "apply":
        if not args.apply_expr:
            raise _UsageError("darboux apply needs --apply EXPR")
        if len(seed) != 1:
            raise _UsageError("darboux apply needs a single seed; use crum for tuples")
        w = parse(args.apply_expr)
        img = dt_apply(seed, w)
        rep.add("image", to_string(img))
        rep.check("image_solves_target", dt_target_equation(seed).is_solution(img))
        return
    if args.mode == "target":
        tgt = dt_target_equation(seed) if len(seed) == 1 else crum_target_equation(seed)
        rep.add("target", equation_text(tgt))
        return
    duals = dual_characteristics(seed)
    for i, a in enumerate(duals):
        rep.add("dual_%d" % i, to_string(a))
    rep.check("duals_verified", True)


def _cmd_crum(args, rep: Report):
    from .darboux import (DarbouxSeed, crum_apply, crum_target_equation,
                          iterated_target_equation)
    from .funalg import FunctionTuple
    from .pde import equation_text
    eq = _load_equation(args.eq)
    seed = DarbouxSeed(FunctionTuple(_parse_list(args.seeds)), eq)
    tgt = crum_target_equation(seed)
    rep.add("target", equation_text(tgt))
    rep.check("matches_iterated_steps", iterated_target_equation(seed) == tgt)
    if args.apply_expr:
        img = crum_apply(seed, parse(args.apply_expr))
        rep.add("image", to_string(img))
        rep.check("image_solves_target", tgt.is_solution(img))


def _cmd_frame(args, rep: Report):
    from .frame import build_frame, frame_consistency
    from .pde import equation_text
    eq = _load_equation(args.eq)
    alphas = _parse_list(args.alphas)
    fr = build_frame(eq, alphas)
    rep.add("p", str(fr.p))
    for s in range(1, fr.p + 1):
        sub = Report()
        sub.add("W", to_string(fr.W[s]))
        sub.add("H", to_string(fr.H[s]))
        sub.add("G", to_string(fr.G[s]))
        sub.add("B", to_string(fr.levelB[s]))
        sub.add("C", to_string(fr.levelC[s]))
        rep.add("level_%d" % s, sub)
    rep.add("modified_equation", equation_text(fr.modified_potential_equation(fr.p)))
    if args.mode == "check":
        for name, okay in frame_consistency(fr).items():
            rep.check(name, okay)
    else:
        rep.check("invariants_verified_at_build", True)


def _parse_operator(text: str):
    from .symmetry import PointOperator
    parts = _parse_list(text)
    if len(parts) not in (3, 4):
        raise _UsageError('operator must be "tau;xi;zeta1[;zeta0]"')
    return PointOperator(*parts)


def _cmd_symmetry(args, rep: Report):
    from .symmetry import invariance_residual, potential_symmetry_report, prolong_simplest
    from .symmetry import SimplestPotentialSystem
    eq = _load_equation(args.eq)
    if args.mode == "check":
        if not args.op:
            raise _UsageError("symmetry check needs --op")
        Q = _parse_operator(args.op)
        resid = invariance_residual(eq, Q)
        rep.check("lie_symmetry", is_zero(resid), resid)
        return
    if args.mode == "prolong":
        if not (args.op and args.alphas):
            raise _UsageError("symmetry prolong needs --op and --alphas")
        alphas = _parse_list(args.alphas)
        if len(alphas) == 1:
            sys_ = SimplestPotentialSystem.from_characteristic(eq, alphas[0])
            pro = prolong_simplest(_parse_operator(args.op), sys_)
            rep.add("eta", to_string(pro.eta))
            rep.add("theta", to_string(pro.coeffs["v1"]))
        else:
            from .frame import build_frame
            from .symmetry import prolong_frame
            fr = build_frame(eq, alphas)
            pro = prolong_frame(_parse_operator(args.op), fr)
            for k in sorted(pro.coeffs):
                rep.add("coefficient %s" % k, to_string(pro.coeffs[k]))
        rep.check("system_invariance", True)
        return
    if not args.alphas:
        raise _UsageError("symmetry potsym needs --alphas")
    r = potential_symmetry_report(eq, _parse_list(args.alphas))
    rep.add("case", r.case_tag)
    rep.add("pure_potential_symmetries", "YES" if r.exists else
            ("NO" if r.exists is not None else "UNDECIDED"))
    rep.add("generators", ", ".join(r.generators) or "-")
    rep.add("strictly_p_order", str(r.strict))
    for i, n in enumerate(r.notes):
        rep.add("note_%d" % i, n)


def _cmd_catalog(args, rep: Report):
    from .catalog import (fixture, heat_polynomial, pi_ladder_tuple,
                          potential_V_from_seeds)
    from .funalg import FunctionTuple, wronskian
    if args.mode == "heatpoly":
        rep.add("P_%d" % args.k, to_string(heat_polynomial(args.k)))
        return
    if args.mode == "ladder":
        from fractions import Fraction
        mu = Fraction(args.mu)
        tup = pi_ladder_tuple(mu, args.k)
        for i, phi in enumerate(tup):
            rep.add("phi_%d" % i, to_string(phi))
        W = wronskian(tup)
        rep.add("wronskian", to_string(W))
        rep.check("wronskian_constant",
                  not W.depends_on("t") and not W.depends_on("x"))
        return
    if args.mode == "fixture":
        if not args.name:
            raise _UsageError("catalog fixture needs --name")
        fx = fixture(args.name)
        rep.add("provenance", fx.provenance)
        rep.add("alpha", to_string(fx.alpha))
        for label, op in fx.operators:
            sub = Report()
            sub.add("tau", to_string(op.tau))
            sub.add("xi", to_string(op.xi))
            sub.add("eta", to_string(op.coeffs["u0"]))
            sub.add("theta", to_string(op.coeffs["v1"]))
            rep.add("operator %s" % label, sub)
        rep.check("operators_reverified", True)
        return
    if not args.seeds:
        raise _UsageError("catalog make-v needs --seeds")
    V = potential_V_from_seeds(parse(args.base), FunctionTuple(_parse_list(args.seeds)))
    rep.add("V", to_string(V))


_HANDLERS = {
    "adjoint": _cmd_adjoint,
    "claw": _cmd_claw,
    "darboux": _cmd_darboux,
    "crum": _cmd_crum,
    "frame": _cmd_frame,
    "symmetry": _cmd_symmetry,
    "catalog": _cmd_catalog,
}


if __name__ == "__main__":
    sys.exit(main())
