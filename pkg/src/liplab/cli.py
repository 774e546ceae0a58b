"""liplab command line.

Usage:
    liplab gen --kind path --n 5 --out path5.json
    liplab gen --kind snowflake --alpha 0.5 --base path5.json --out flake.json
    liplab validate space.json
    liplab lengthmetric space.json --out dL.csv
    liplab lip space.json field.csv --scale 1 --out profile.json
    liplab perturb space.json field.csv --delta 0.4 --r 0.5 --tau 0.01 --scale 1 \
        --out g.csv --report report.json
    liplab verify space.json field.csv g.csv --delta 0.4 --r 0.5 --tau 0.01 --scale 1
    liplab demo space.json field.csv --steps 8 --delta 1 --tau 1e-5 --scale 1

Exit codes: 0 success, 2 invalid flags, 3 unreadable or unwritable files,
4 field ids do not match the space, 5 a verification flag is false (or the
space is not quasi-convex), 6 the threshold is too coarse for the budget.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import io as lio
from .errors import IdMismatch, NotQuasiConvex, ThresholdTooCoarse
from .lipschitz import lip_field, singular_set
from .metric import analyze_space, length_distance
from .sard import PerturbParams, PerturbResult, perturb, residual_demo, select_epsilon, verify
from .spacegen import gen_space, snowflake

EXIT_OK, EXIT_FLAGS, EXIT_IO, EXIT_IDS, EXIT_VERIFY, EXIT_COARSE = 0, 2, 3, 4, 5, 6


def _emit(text: str, out) -> None:
    if out:
        lio.write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _load(args, with_field=True):
    space = lio.read_space(args.space)
    if not with_field:
        return space, None
    return space, lio.read_field(args.field, space.n)


def _params(args, parser) -> PerturbParams:
    try:
        return PerturbParams(delta=args.delta, r=args.r, tau=args.tau, h=args.scale,
                             epsilon=getattr(args, "epsilon", None))
    except ValueError as exc:
        parser.error(str(exc))


def cmd_gen(args, parser):
    if args.kind == "snowflake":
        if args.base is None or args.alpha is None:
            parser.error("snowflake needs --base and --alpha")
        if not 0 < args.alpha < 1:
            parser.error("--alpha must lie in (0, 1)")
        space = snowflake(lio.read_space(args.base), args.alpha)
    else:
        need = {"path": ["n"], "grid": ["rows", "cols"],
                "random_geometric": ["n", "radius", "seed"], "sierpinski": ["level"]}[args.kind]
        missing = [k for k in need if getattr(args, k) is None]
        if missing:
            parser.error(f"--kind {args.kind} needs " + ", ".join("--" + k for k in missing))
        try:
            space = gen_space(args.kind, **{k: getattr(args, k) for k in need})
        except ValueError as exc:
            parser.error(str(exc))
    _emit(lio.dumps(lio.space_to_dict(space)) + "\n", args.out)
    return EXIT_OK


def cmd_validate(args, parser):
    space, _ = _load(args, with_field=False)
    rep = analyze_space(space)
    out = {"metric_ok": rep.metric_ok, "n_violations": rep.n_violations,
           "violations": [list(v) for v in rep.violations], "connected": rep.connected,
           "C": rep.C, "worst_pair": list(rep.worst_pair) if rep.worst_pair else None}
    _emit(lio.dumps(out) + "\n", args.out)
    return EXIT_OK


def cmd_lengthmetric(args, parser):
    space, _ = _load(args, with_field=False)
    _emit(lio.matrix_to_csv(length_distance(space)), args.out)
    return EXIT_OK


def cmd_lip(args, parser):
    if not args.scale > 0:
        parser.error("--scale must be positive")
    space, f = _load(args)
    _emit(lio.dumps(lip_field(space, f, args.scale).to_dict()) + "\n", args.out)
    return EXIT_OK


def cmd_perturb(args, parser):
    params = _params(args, parser)
    space, f = _load(args)
    try:
        result = perturb(space, f, params)
    except ThresholdTooCoarse as exc:
        print(f"liplab: {exc}", file=sys.stderr)
        return EXIT_COARSE
    if args.out:
        lio.write_field(result.g, args.out)
    report = lio.dumps(result.to_report()) + "\n"
    if args.report:
        lio.write_atomic(args.report, report)
    else:
        sys.stdout.write(report)
    return EXIT_OK if result.verification.all_ok else EXIT_VERIFY


def cmd_verify(args, parser):
    params = _params(args, parser)
    space, f = _load(args)
    g = lio.read_field(args.perturbed, space.n)
    eps = params.epsilon
    if eps is None:
        S = singular_set(space, f, params.h, params.tau)
        eps = select_epsilon(space.dist, S.mask, space.mass, params.r) if S.mask.any() else 0.0
    stub = PerturbResult(g=g, epsilon=eps, lam=0.0, M=0.0, C=0.0, ghat=g * 0, K=None, params=params)
    rep = verify(space, f, g, params, stub)
    out = {"epsilon": eps, "dinf_distance": rep.dinf_distance,
           "singular_measure_before": rep.singular_measure_before,
           "singular_measure_after": rep.singular_measure_after,
           "flags": {"norm_ok": rep.norm_ok, "measure_ok": rep.measure_ok,
                     "inclusion_ok": rep.inclusion_ok, "atom_free": rep.atom_free}}
    _emit(lio.dumps(out) + "\n", args.report)
    return EXIT_OK if rep.all_ok else EXIT_VERIFY


def demo_table(steps) -> str:
    lines = ["k,r_k,delta_k,singular_measure,dinf_distance,status"]
    for s in steps:
        if s.result is None:
            lines.append(f"{s.k},{lio.fmt_float(s.r)},{lio.fmt_float(s.delta)},,,"
                         f"{s.error.split(':')[0]}")
            continue
        v = s.result.verification
        lines.append(",".join([str(s.k), lio.fmt_float(s.r), lio.fmt_float(s.delta),
                               lio.fmt_float(v.singular_measure_after),
                               lio.fmt_float(v.dinf_distance),
                               "ok" if v.measure_ok else "measure_exceeded"]))
    return "\n".join(lines) + "\n"


def cmd_demo(args, parser):
    if args.steps < 0:
        parser.error("--steps must be nonnegative")
    if not (args.delta > 0 and args.tau >= 0 and args.scale > 0):
        parser.error("need --delta > 0, --tau >= 0, --scale > 0")
    space, f = _load(args)
    schedule = [(args.delta * 2.0 ** -k, 2.0 ** -k) for k in range(1, args.steps + 1)]
    steps = residual_demo(space, f, schedule, tau=args.tau, h=args.scale)
    _emit(demo_table(steps), args.out)
    return EXIT_OK if all(s.ok for s in steps) else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="liplab", description="Lipschitz analysis on finite metric measure spaces")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a space file")
    g.add_argument("--kind", required=True,
                   choices=["path", "grid", "random_geometric", "sierpinski", "snowflake"])
    g.add_argument("--n", type=int)
    g.add_argument("--rows", type=int)
    g.add_argument("--cols", type=int)
    g.add_argument("--radius", type=float)
    g.add_argument("--seed", type=int)
    g.add_argument("--level", type=int)
    g.add_argument("--alpha", type=float)
    g.add_argument("--base", help="space file to snowflake")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("validate", help="metric axioms and quasi-convexity report")
    v.add_argument("space")
    v.add_argument("--out")
    v.set_defaults(func=cmd_validate)

    lm = sub.add_parser("lengthmetric", help="length metric as CSV")
    lm.add_argument("space")
    lm.add_argument("--out")
    lm.set_defaults(func=cmd_lengthmetric)

    lp = sub.add_parser("lip", help="pointwise Lipschitz profile")
    lp.add_argument("space")
    lp.add_argument("field")
    lp.add_argument("--scale", type=float, required=True)
    lp.add_argument("--out")
    lp.set_defaults(func=cmd_lip)

    def budget(sp, with_r=True):
        sp.add_argument("--delta", type=float, required=True)
        if with_r:
            sp.add_argument("--r", type=float, required=True)
        sp.add_argument("--tau", type=float, required=True)
        sp.add_argument("--scale", type=float, required=True)

    pt = sub.add_parser("perturb", help="perturb a field to shrink its singular set")
    pt.add_argument("space")
    pt.add_argument("field")
    budget(pt)
    pt.add_argument("--epsilon", type=float)
    pt.add_argument("--out", help="perturbed field CSV")
    pt.add_argument("--report", help="report JSON (default: stdout)")
    pt.set_defaults(func=cmd_perturb)

    vf = sub.add_parser("verify", help="check a perturbed field against the contracts")
    vf.add_argument("space")
    vf.add_argument("field")
    vf.add_argument("perturbed")
    budget(vf)
    vf.add_argument("--epsilon", type=float)
    vf.add_argument("--report")
    vf.set_defaults(func=cmd_verify)

    dm = sub.add_parser("demo", help="sweep r_k = 2^-k, delta_k = delta 2^-k")
    dm.add_argument("space")
    dm.add_argument("field")
    dm.add_argument("--steps", type=int, required=True)
    budget(dm, with_r=False)
    dm.add_argument("--out")
    dm.set_defaults(func=cmd_demo)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except IdMismatch as exc:
        print(f"liplab: {exc}", file=sys.stderr)
        return EXIT_IDS
    except NotQuasiConvex as exc:
        print(f"liplab: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"liplab: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
