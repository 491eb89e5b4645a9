"""Command-line interface: ``fastmm <subcommand> ...``.

Exit codes: 0 success, 1 failed check, 2 usage error.  Commands that draw
random numbers require ``--seed``.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

import numpy as np

from . import bench as B
from .coefficient import CoeffMatrix
from .executor import DimensionError, RecursionPlan, recursive_mm
from .hm import HMRep, validate_matmul
from .isotropy import DescentOptions, minimize_gamma2
from .norms import MATMUL_NORMS, BoundError, Norm, error_bound, gamma2, growth_factor, plan_error_factor
from .schemes import External, SchemeId, bundled_matmul_schemes, load_scheme
from .slp import from_text, to_text, transpose_slp
from .slpopt import MODES, codegen_report, optimize
from .sms import SMSError, read_sms, write_float_sms, write_sms
from .sparsify import cob_quality, core_adds, core_gamma2, sparsify, verify_factorization

USAGE, CHECK_FAILED, OK = 2, 1, 0


class UsageError(Exception):
    pass


# -- helpers ------------------------------------------------------------------------------


def _scheme(args) -> HMRep:
    if getattr(args, "sms", None):
        return load_scheme(External(*args.sms, name=Path(args.sms[0]).stem))
    if not args.scheme:
        raise UsageError("give --scheme NAME or --sms L R P")
    try:
        return load_scheme(args.scheme)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None


def _add_scheme_args(p: argparse.ArgumentParser):
    p.add_argument("--scheme", help="bundled scheme name (see `catalog`)")
    p.add_argument("--sms", nargs=3, metavar=("L", "R", "P"), help="scheme given by three SMS files")


def _norm_pairs(args) -> list[tuple[Norm, Norm]]:
    try:
        ps = [Norm.parse(args.p)] if args.p else None
        qs = [Norm.parse(args.q)] if args.q else None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if ps is None and qs is None:
        return list(MATMUL_NORMS)
    ps = ps or [Norm.MAX, Norm.TWO]
    qs = qs or [Norm.MAX, Norm.TWO]
    return [(p, q) for p in ps for q in qs]


def _g(x: float) -> str:
    return f"{x:.10g}"


def _table(header: list[str], rows: list[list], fmt: str) -> str:
    rows = [[_g(v) if isinstance(v, float) else str(v) for v in r] for r in rows]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return buf.getvalue()
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(header)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(header, widths))]
    lines += ["  ".join(v.rjust(w) for v, w in zip(r, widths)) for r in rows]
    return "\n".join(lines) + "\n"


def _dims(text: str) -> tuple[int, int, int]:
    parts = [int(x) for x in text.replace("x", ",").split(",") if x]
    if len(parts) == 1:
        return (parts[0],) * 3
    if len(parts) != 3 or min(parts) < 1:
        raise UsageError(f"bad size {text!r}: use N or M,K,N")
    return tuple(parts)


# -- subcommands ----------------------------------------------------------------------------


def cmd_validate(args) -> int:
    H = _scheme(args)
    rep = validate_matmul(H)
    if rep.valid:
        print("valid")
        return OK
    print(f"invalid: {len(rep.failures)} tensor entries differ (max residual {rep.max_residual:.3g})")
    for idx, _ in rep.failures[:10]:
        print(f"  entry {idx}")
    return CHECK_FAILED


BOUND_HEADER = ["scheme", "p", "q", "gamma", "amp", "q0", "exponent", "leading_coeff"]


def _bound_rows(H: HMRep, pairs, ell: int, k0: int) -> list[list]:
    rows = []
    for p, q in pairs:
        try:
            b = error_bound(H, p, q, ell, k0)
            rows.append([H.name, p.value, q.value, b.gamma, b.amp, b.q0, b.exponent, b.leading_coeff])
        except BoundError:
            rows.append([H.name, p.value, q.value, growth_factor(H, p, q), "nan", "nan", "nan", "nan"])
    return rows


def cmd_gamma(args) -> int:
    H = _scheme(args)
    rows = _bound_rows(H, _norm_pairs(args), 1, 1)
    sys.stdout.write(_table(BOUND_HEADER, rows, args.format))
    return OK


def cmd_bounds(args) -> int:
    H = _scheme(args)
    header = BOUND_HEADER + ["levels", "k0", "e_ell"]
    rows = []
    for p, q in _norm_pairs(args):
        try:
            b = error_bound(H, p, q, args.levels, args.k0)
        except BoundError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return CHECK_FAILED
        rows.append([H.name, p.value, q.value, b.gamma, b.amp, b.q0, b.exponent, b.leading_coeff,
                     args.levels, args.k0, b.e_ell])
    sys.stdout.write(_table(header, rows, args.format))
    return OK


def cmd_orbit(args) -> int:
    H = _scheme(args)
    opts = DescentOptions(restarts=args.restarts, max_evals=args.budget, seed=args.seed, snap=args.snap)
    res = minimize_gamma2(H, opts)
    print(f"start_gamma2 {_g(res.start_gamma2)}")
    print(f"best_gamma2 {_g(res.gamma2)}")
    print(f"snapped {res.snapped}")
    for i, (rho, xi) in enumerate(zip(res.point.rho, res.point.xi)):
        print(f"factor{i} rho {' '.join(_g(v) for v in rho)} xi {' '.join(_g(v) for v in xi)}")
    if args.emit:
        for name, M in zip("LRP", res.rep.floats):
            print(f"# {name}")
            sys.stdout.write(write_float_sms(M))
    return OK


def _verify_slp(s, M: CoeffMatrix) -> bool:
    return s.matrix() == M


def cmd_optimize(args) -> int:
    if args.input:
        try:
            M = read_sms(args.input)
        except (OSError, SMSError) as exc:
            raise UsageError(str(exc)) from None
        s = optimize(M, args.mode)
        if not _verify_slp(s, M):
            print("error: program does not realize the input matrix", file=sys.stderr)
            return CHECK_FAILED
        if args.emit == "text-slp":
            sys.stdout.write(to_text(s))
        else:
            c = s.counts()
            sys.stdout.write(_table(["matrix", "strategy", "adds", "mults", "divs2"],
                                    [[Path(args.input).stem, args.mode, c.adds, c.mults, c.divs2]], "csv"))
        return OK
    H = _scheme(args)
    if not H.exact:
        raise UsageError("scheme has inexact coefficients")
    if args.emit == "csv-counts" and args.mode == "best":
        sys.stdout.write(codegen_report(H).to_csv())
        return OK
    rows = []
    for name in "LRP":
        M = getattr(H, name)
        s = optimize(M, args.mode)
        if not _verify_slp(s, M):
            print(f"error: program for {name} does not realize it", file=sys.stderr)
            return CHECK_FAILED
        if args.emit == "text-slp":
            print(f"# {name}")
            sys.stdout.write(to_text(s))
        else:
            c = s.counts()
            rows.append([H.name, name, args.mode, c.adds, c.mults, c.divs2])
    if rows:
        sys.stdout.write(_table(["scheme", "matrix", "strategy", "adds", "mults", "divs2"], rows, "csv"))
    return OK


def cmd_transpose(args) -> int:
    try:
        s = from_text(Path(args.input).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    t = transpose_slp(s)
    if t.matrix() != s.matrix().T:
        print("error: transposed program is wrong", file=sys.stderr)
        return CHECK_FAILED
    sys.stdout.write(to_text(t))
    a, b = s.counts(), t.counts()
    print(f"# adds {a.adds} -> {b.adds} (inputs {s.n_in}, outputs {s.n_out})", file=sys.stderr)
    return OK


def cmd_sparsify(args) -> int:
    H = _scheme(args)
    c = sparsify(H)
    ok = verify_factorization(H, c)
    for name in ("phi", "psi", "nu", "Ls", "Rs", "Ps"):
        print(f"# {name}")
        sys.stdout.write(write_sms(getattr(c, name), decimal=True))
    print("# quality")
    print(f"verified {ok}")
    print(f"sparse_core {c.sparse}")
    print(f"core_adds {core_adds(c)}")
    print(f"core_gamma2 {_g(core_gamma2(c))}")
    print(f"scheme_gamma2 {_g(gamma2(H))}")
    for p, q in MATMUL_NORMS:
        qual = cob_quality(c, p, q, H.dims)
        print(f"gamma_{p.value}_{q.value} core {_g(qual.gamma_core)} cob {_g(qual.cob_factor)} "
              f"mmab {_g(qual.gamma_mmab)} plain {_g(growth_factor(H, p, q))}")
    return OK if ok else CHECK_FAILED


def cmd_mm(args) -> int:
    m, k, n = _dims(args.size)
    inf = Norm.MAX
    if args.schedule:
        plan = RecursionPlan(tuple(_named(s) for s in args.schedule.split(",")))
        try:
            plan.check_dims(m, k, n)
        except DimensionError as exc:
            raise UsageError(str(exc)) from None
        runner = B._Runner(len(plan.levels), plan_error_factor(plan.levels, inf, inf, k // plan.factor[1]),
                           lambda A, Bm: recursive_mm(plan, A, Bm))
        label = args.schedule
    else:
        H = _scheme(args)
        kind = B.PlanKind.ALTBASIS if args.altbasis else B.PlanKind.PLAIN
        if H.name == SchemeId.CONVENTIONAL.value:
            kind = B.PlanKind.CLASSICAL
        case = B.BenchCase(H.name, kind)
        try:
            runner = _runner_for(H, case, (m, k, n), args.levels)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        label = f"{H.name}:{kind.value}"
    A = B.gen_matrix(args.dist, m, k, args.seed)
    Bm = B.gen_matrix(args.dist, k, n, args.seed + 1)
    ref = B.reference_mm(A, Bm)
    err = ref.error_max(runner.mult(A, Bm))
    scale = float(np.abs(A).max() * np.abs(Bm).max())
    bound = runner.factor * scale * B.UNIT_ROUNDOFF
    print(f"scheme {label}")
    print(f"size {m} {k} {n}")
    print(f"levels {runner.levels}")
    print(f"err_max {err:.6e}")
    print(f"rel_err {err / scale:.6e}")
    print(f"bound {bound:.6e}")
    print(f"ratio {err / bound:.6e}")
    return OK if err <= bound else CHECK_FAILED


def _named(name: str) -> HMRep:
    try:
        return load_scheme(name.strip())
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None


def _runner_for(H: HMRep, case: B.BenchCase, dims, levels):
    if case.plan is B.PlanKind.CLASSICAL:
        return B.make_runner(case, dims, levels)
    if H.name in {s.value for s in SchemeId}:
        return B.make_runner(case, dims, levels)
    # external scheme: plain recursion only
    ell = B.default_levels(H, *dims) if levels is None else levels
    plan = RecursionPlan.uniform(H, ell)
    plan.check_dims(*dims)
    return B._Runner(ell, plan_error_factor(plan.levels, Norm.MAX, Norm.MAX, dims[1] // H.k**ell),
                     lambda A, Bm: recursive_mm(plan, A, Bm))


def cmd_bench(args) -> int:
    cases = [B.BenchCase.parse(c) for c in args.cases.split(",")] if args.cases else list(B.DEFAULT_CASES)
    for c in cases:
        try:
            SchemeId.parse(c.scheme)
        except KeyError as exc:
            raise UsageError(str(exc.args[0])) from None
    sizes = [_dims(s) for s in args.sizes.split(";" if ";" in args.sizes else " ")] if args.sizes else list(B.DEFAULT_SIZES)
    cfg = B.BenchConfig(cases, sizes, args.dist, args.trials, args.seed, args.levels, args.cond, args.workers)
    res = B.run_bench(cfg)
    if args.out:
        Path(args.out).write_text(res.csv(), encoding="utf-8")
    else:
        sys.stdout.write(res.csv())
    sys.stderr.write(res.summary())
    bad = [r for r in res.records if r.ratio > 1.0]
    if bad:
        print(f"{len(bad)} records exceed the error bound", file=sys.stderr)
        return CHECK_FAILED
    return OK


def cmd_catalog(args) -> int:
    rows = []
    schemes = bundled_matmul_schemes() + [load_scheme(SchemeId.ALTBASIS_CORE)]
    for H in schemes:
        rep = validate_matmul(H)
        rows.append([H.name, f"{H.m}x{H.k}x{H.n}", H.r, "yes" if rep.valid else "no",
                     gamma2(H), H.provenance])
    sys.stdout.write(_table(["scheme", "dims", "rank", "matmul", "gamma2", "notes"], rows, args.format))
    return OK


# -- parser -----------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fastmm", description="Fast matrix multiplication toolkit.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check that a scheme multiplies matrices")
    _add_scheme_args(p)
    p.set_defaults(func=cmd_validate)

    for name, func, doc in (("gamma", cmd_gamma, "growth factors"), ("bounds", cmd_bounds, "forward error bounds")):
        p = sub.add_parser(name, help=doc)
        _add_scheme_args(p)
        p.add_argument("--p", help="output norm: 1, 2 or inf (default: 2 and inf)")
        p.add_argument("--q", help="input norm: 1, 2 or inf (default: 2 and inf)")
        p.add_argument("--format", choices=("text", "csv"), default="text")
        if name == "bounds":
            p.add_argument("--levels", type=int, default=1)
            p.add_argument("--k0", type=int, default=1, help="inner dimension of the classical base case")
        p.set_defaults(func=func)

    p = sub.add_parser("orbit", help="minimize gamma2 over the isotropy orbit")
    _add_scheme_args(p)
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--budget", type=int, default=20000, help="function evaluations per restart")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--snap", action="store_true", help="round parameters to recognizable constants")
    p.add_argument("--emit", action="store_true", help="print the transformed L, R, P as decimal SMS")
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("optimize", help="straight-line programs for linear operators")
    _add_scheme_args(p)
    p.add_argument("--input", help="SMS file of one matrix")
    p.add_argument("--mode", choices=[m for m in MODES], default="best")
    p.add_argument("--emit", choices=("text-slp", "csv-counts"), default="text-slp")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("transpose", help="transpose a text straight-line program")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_transpose)

    p = sub.add_parser("sparsify", help="alternative-basis factorization with a sparse core")
    _add_scheme_args(p)
    p.set_defaults(func=cmd_sparsify)

    p = sub.add_parser("mm", help="multiply random matrices and compare to a reference")
    _add_scheme_args(p)
    p.add_argument("--levels", type=int)
    p.add_argument("--schedule", help="comma-separated scheme per level, outermost first")
    p.add_argument("--size", default="256", help="N or M,K,N")
    p.add_argument("--dist", default="uniform", choices=[d.value for d in B.Dist])
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--altbasis", action="store_true")
    p.set_defaults(func=cmd_mm)

    p = sub.add_parser("bench", help="accuracy benchmark, CSV output")
    p.add_argument("--cases", help="comma-separated scheme[:plan] list")
    p.add_argument("--sizes", help="space- or semicolon-separated sizes (N or M,K,N)")
    p.add_argument("--dist", default="uniform", choices=[d.value for d in B.Dist])
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--levels", type=int)
    p.add_argument("--cond", type=float, default=1e12)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("catalog", help="list bundled schemes")
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.set_defaults(func=cmd_catalog)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"fastmm {args.command}: error: {exc}", file=sys.stderr)
        return USAGE
    except (SMSError, OSError) as exc:
        print(f"fastmm {args.command}: error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
