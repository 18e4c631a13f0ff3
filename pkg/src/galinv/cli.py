"""galinv command line.

Exit codes: 0 ok / equivalent, 1 not equivalent, 2 configuration error,
3 degenerate curve, 4 no overlap, 5 not in group.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import io
from .curvejet import Helix, Polynomial, Transformed, arc_length_table, jets_fd
from .errors import (
    DegenerateJet, GalinvError, NoOverlap, NotInGroup, RegularityError,
)
from .galgroup import GalileanElement, random_special
from .invariants import (
    TOL_ANALYTIC, TOL_FD, equivalent, pullback, recover_transformation, signature,
)
from .reconstruct import ConstantInvariants, integrate_frame, initial_frame

EXIT_OK, EXIT_NOT_EQUIVALENT, EXIT_CONFIG, EXIT_DEGENERATE, EXIT_NO_OVERLAP, EXIT_NOT_IN_GROUP = range(6)
TOL_ENV = "GALINV_TOL"
FAMILIES = ("helix", "twisted", "line")


class ConfigError(Exception):
    pass


def _positive(kind):
    def parse(text):
        value = kind(text)
        if not value > 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return value
    return parse


def _default_tol(fallback: float) -> float:
    text = os.environ.get(TOL_ENV)
    if text is None:
        return fallback
    try:
        value = float(text)
    except ValueError:
        raise ConfigError(f"{TOL_ENV}={text!r} is not a number") from None
    if not value > 0:
        raise ConfigError(f"{TOL_ENV} must be positive")
    return value


def _emit(obj, out) -> None:
    text = io.dumps(obj)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _family_curve(args):
    if args.family == "helix":
        try:
            return Helix(args.a, args.b, arclength=not args.raw)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    if args.family == "twisted":
        return Polynomial([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]])
    return Polynomial([[0, 0, 0], [1, 0.5, 0.25]])


def _add_family_args(p):
    p.add_argument("--a", type=float, default=1.0, help="helix radius")
    p.add_argument("--b", type=float, default=1.0, help="helix pitch")
    p.add_argument("--raw", action="store_true",
                   help="parameterize the helix by angle instead of arc length")


def _read(path):
    if not Path(path).is_file():
        raise ConfigError(f"no such file: {path}")
    try:
        return io.read_curve_csv(path)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


# -- subcommands ------------------------------------------------------------

def cmd_generate(args) -> int:
    curve = _family_curve(args)
    g = None
    if args.transform_seed is not None:
        g = random_special(args.transform_seed)
    elif args.transform:
        g = GalileanElement.from_json(json.loads(Path(args.transform).read_text()))
    if g is not None:
        curve = Transformed(curve, g)
    io.write_curve_csv(args.output, curve.sample(args.t0, args.dt, args.n))
    if g is not None and args.transform_seed is not None:
        out = args.transform_out or str(Path(args.output).with_suffix(".transform.json"))
        io.write_json(out, g.to_json())
    return EXIT_OK


def _signature_for(args, path=None, param="time"):
    if args.method == "analytic":
        if not args.family:
            raise ConfigError("--method analytic needs --family")
        curve = _family_curve(args)
        return signature(curve, args.m or 201, span=(args.t_start, args.t_end),
                         parameter=param, source=args.family)
    return signature(_read(path), args.m, parameter=param, source=str(path))


def cmd_invariants(args) -> int:
    if args.method == "fd" and not args.input:
        raise ConfigError("an input CSV is required with --method fd")
    sig = _signature_for(args, args.input, args.param)
    _emit(sig.to_json(), args.output)
    if args.plot_csv:
        io.write_table_csv(args.plot_csv, ["s", "w1", "w2", "w3"], [sig.s, sig.w1, sig.w2, sig.w3])
    if args.figure:
        from .plotting import plot_signatures
        plot_signatures(args.figure, [sig], [args.input or args.family])
    return EXIT_OK


def cmd_equiv(args) -> int:
    tol = args.tol if args.tol is not None else _default_tol(TOL_FD)
    sa = signature(_read(args.a_csv), args.m, parameter=args.param, source=args.a_csv)
    sb = signature(_read(args.b_csv), args.m, parameter=args.param, source=args.b_csv)
    report = equivalent(sa, sb, tol)
    _emit(report.to_json(), args.output)
    if args.figure:
        from .plotting import plot_signatures
        plot_signatures(args.figure, [sa, sb], [args.a_csv, args.b_csv],
                        title="equivalent" if report.equivalent else "not equivalent")
    return EXIT_OK if report.equivalent else EXIT_NOT_EQUIVALENT


def cmd_recover(args) -> int:
    tol = args.tol if args.tol is not None else _default_tol(TOL_FD)
    ca, cb = _read(args.a_csv), _read(args.b_csv)
    t0 = ca.t0 + 4 * ca.dt if args.at is None else args.at
    try:
        report = recover_transformation(ca, cb, t0, residual_tol=tol)
    except NotInGroup as exc:
        out = {"error": "NotInGroup", "defect": exc.defect, "message": str(exc)}
        if getattr(exc, "report", None) is not None:
            out.update(exc.report.to_json())
        _emit(out, args.output)
        return EXIT_NOT_IN_GROUP
    _emit(report.to_json(), args.output)
    return EXIT_OK


def cmd_pullback(args) -> int:
    samples = _read(args.input)
    _, s = arc_length_table(samples)
    interior = np.arange(4, samples.n - 4)
    node = int(interior[np.argmin(np.abs(s[interior] - args.at))])
    jet = jets_fd(samples, [node])[0]
    try:
        w = pullback(jet)
    except DegenerateJet as exc:
        exc.index = node
        raise
    _emit({
        "at": args.at,
        "node": node,
        "s": float(s[node]),
        "t": jet.t,
        "matrix": [list(row) for row in w.m],
        "skew_defect": w.skew_defect(),
    }, args.output)
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    inv = ConstantInvariants(args.w1, args.w2)
    res = integrate_frame(inv, initial_frame(inv), args.length, args.h)
    io.write_curve_csv(args.output, res.samples)
    sidecar = args.sidecar or str(Path(args.output).with_suffix(".json"))
    io.write_json(sidecar, {
        "w1": inv.w1, "w2": inv.w2, "kappa": inv.kappa, "tau": inv.tau, "h": args.h,
        "reorthonormalizations": res.reorthonormalizations,
        "max_orth_defect": res.max_orth_defect,
    })
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="galinv",
                                     description="Special Galilean invariants of space-time curves.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="sample a built-in curve family to CSV")
    p.add_argument("family", choices=FAMILIES)
    _add_family_args(p)
    p.add_argument("--n", type=int, default=4001)
    p.add_argument("--dt", type=_positive(float), default=0.005)
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--transform-seed", type=int, help="apply a seeded random SGal element")
    p.add_argument("--transform", help="apply the element stored in this JSON file")
    p.add_argument("--transform-out", help="where to write the applied element "
                                           "(default OUTPUT with .transform.json)")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("invariants", help="signature (w1, w2, w3) of a curve")
    p.add_argument("input", nargs="?")
    p.add_argument("--method", choices=("fd", "analytic"), default="fd")
    p.add_argument("--family", choices=FAMILIES)
    _add_family_args(p)
    p.add_argument("--t-start", type=float, default=0.0)
    p.add_argument("--t-end", type=float, default=10.0)
    p.add_argument("--m", type=int)
    p.add_argument("--param", choices=("time", "arclength"), default="time")
    p.add_argument("--plot-csv", help="also write s,w1,w2,w3 columns here")
    p.add_argument("--figure", help="also render the signature to this image file")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("equiv", help="decide equivalence of two sampled curves")
    p.add_argument("a_csv")
    p.add_argument("b_csv")
    p.add_argument("--tol", type=_positive(float))
    p.add_argument("--m", type=int)
    p.add_argument("--param", choices=("time", "arclength"), default="time")
    p.add_argument("--figure")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("recover", help="recover g with B = g . A")
    p.add_argument("a_csv")
    p.add_argument("b_csv")
    p.add_argument("--at", type=float, help="time of A at which frames are matched")
    p.add_argument("--tol", type=_positive(float), help="largest acceptable residual")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("pullback", help="Maurer-Cartan pullback at an arc-length position")
    p.add_argument("input")
    p.add_argument("--at", type=float, required=True, help="arc length from the first sample")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_pullback)

    p = sub.add_parser("reconstruct", help="integrate a constant-invariant curve")
    p.add_argument("--w1", type=_positive(float), required=True)
    p.add_argument("--w2", type=_positive(float), required=True)
    p.add_argument("--length", type=_positive(float), default=20.0)
    p.add_argument("--h", type=_positive(float), default=1e-3)
    p.add_argument("--sidecar", help="JSON sidecar path (default OUTPUT with .json)")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_reconstruct)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    for name in ("m", "n"):
        value = getattr(args, name, None)
        if value is not None and value < 11:
            print(f"galinv: --{name} must be at least 11", file=sys.stderr)
            return EXIT_CONFIG
    try:
        return args.func(args)
    except (DegenerateJet, RegularityError) as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, DegenerateJet):
            err.update(node=exc.index, quantity=exc.quantity, value=exc.value)
        _emit(err, getattr(args, "output", None) if args.command != "generate" else None)
        print(f"galinv: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except NoOverlap as exc:
        print(f"galinv: {exc}", file=sys.stderr)
        return EXIT_NO_OVERLAP
    except NotInGroup as exc:
        print(f"galinv: {exc}", file=sys.stderr)
        return EXIT_NOT_IN_GROUP
    except (ConfigError, GalinvError, ValueError, OSError) as exc:
        print(f"galinv: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
