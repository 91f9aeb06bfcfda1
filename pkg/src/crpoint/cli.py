"""Command-line interface.

Exit codes: 0 pass, 1 verification failure, 2 input error, 3 degenerate or
non-generic input.  Errors are written to stderr as one JSON object with
``error`` and ``reason`` keys.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import __version__
from .canon import DEFAULT_TOL, classify_cosquare, genericity_defect, normal_form
from .errors import (
    DegenerateA,
    DegeneratePair,
    DeltaZero,
    FormatError,
    NonFiniteError,
    NonGeneric,
    NonSymmetricError,
    PerturbationFailed,
    SearchFailed,
)
from .homotopy import HomotopyOptions, HomotopyPath, connect_to_model
from .jsonio import dumps, loads
from .pairs import DEFAULT_SIGN_TOL, MatrixPair, Sign, act, sign_class

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_DEGENERATE = 3


class CLIError(Exception):
    def __init__(self, code: int, reason: str, message: str):
        self.code = code
        self.reason = reason
        super().__init__(message)


def _read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise CLIError(EXIT_INPUT, "io", str(exc)) from exc
    return loads(text)


def _read_pair(path: str) -> MatrixPair:
    return MatrixPair.from_json(_read_json(path))


def _emit(obj, args) -> None:
    text = dumps(obj)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _threads(args) -> int:
    raw = args.threads if args.threads is not None else os.environ.get("CRPOINT_THREADS", "1")
    try:
        n = int(raw)
    except (TypeError, ValueError):
        raise CLIError(EXIT_INPUT, "bad_threads", f"threads must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise CLIError(EXIT_INPUT, "bad_threads", "threads must be a positive integer")
    return n


def _positive(kind):
    def conv(text):
        try:
            v = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
        if not v > 0:
            raise argparse.ArgumentTypeError("must be positive")
        return v

    return conv


# --------------------------------------------------------------------------
# subcommands

def cmd_classify(args) -> int:
    p = _read_pair(args.pair)
    sc = sign_class(p, args.sign_tol)
    out = {
        "sign": sc.tag.value,
        "det4": sc.det4,
        "det4_normalized": sc.det4_normalized,
    }
    try:
        out["cosquare_class"] = classify_cosquare(p.A, args.tol).to_json()
    except DegenerateA:
        out["cosquare_class"] = {"tag": "degenerate_A"}
    out["genericity_defect"] = genericity_defect(p.A)
    _emit(out, args)
    if sc.tag is Sign.DEGENERATE and args.strict:
        return EXIT_DEGENERATE
    return EXIT_OK


def cmd_normal_form(args) -> int:
    p = _read_pair(args.pair)
    try:
        nf = normal_form(p, args.tol)
    except NonGeneric as exc:
        raise CLIError(EXIT_DEGENERATE, f"non_generic:{exc.reason}", str(exc)) from exc
    except DegenerateA as exc:
        raise CLIError(EXIT_DEGENERATE, "degenerate_A", str(exc)) from exc
    err = act(nf.witness, p).distance(nf.pair) / max(1.0, nf.pair.scale)
    if err > 1e-8:
        raise CLIError(EXIT_FAIL, "witness_check", f"witness reproduces the normal form only to {err:.3e}")
    _emit(nf.to_json(), args)
    return EXIT_OK


def cmd_homotopy(args) -> int:
    p = _read_pair(args.pair)
    opts = HomotopyOptions(samples=args.samples, margin=args.margin, seed=args.seed,
                           max_retries=args.max_retries, eta=args.eta, tol=args.tol)
    try:
        path = connect_to_model(p, opts)
    except DegeneratePair as exc:
        raise CLIError(EXIT_DEGENERATE, "degenerate_pair", str(exc)) from exc
    except (SearchFailed, PerturbationFailed) as exc:
        best = getattr(exc, "best_certificate", None)
        _emit({"error": str(exc), "best_certificate": best.to_json() if best else None}, args)
        return EXIT_FAIL
    _emit(path.to_json(), args)
    return EXIT_OK


def cmd_surface_check(args) -> int:
    from .surface import SurfaceGrid, SurfaceSpec, bounds, flatten, reverse_path, verify_no_new_complex_points

    path = HomotopyPath.from_json(_read_json(args.path))
    # paths from `homotopy` start at the input pair; the model goes to the center
    center_first = path if args.center_first else reverse_path(path)
    flat = flatten(center_first, args.samples, args.margin)
    if not flat.certificate.passed:
        _emit({"error": "path certificate fails", "certificate": flat.certificate.to_json()}, args)
        return EXIT_FAIL
    grid = SurfaceGrid(args.grid_s, args.grid_u, args.grid_theta)
    spec = SurfaceSpec(flat, args.epsilon, 1)
    try:
        b = bounds(spec, grid)
        spec.n = args.n if args.n is not None else b.n_required
        rep = verify_no_new_complex_points(spec, grid, fd_points=args.fd_points, seed=args.seed)
    except DeltaZero as exc:
        raise CLIError(EXIT_DEGENERATE, "delta_zero", str(exc)) from exc
    _emit(rep.to_json(), args)
    fd_ok = rep.fd_max_error is None or rep.fd_max_error < 1e-6
    return EXIT_OK if rep.passed and fd_ok else EXIT_FAIL


def cmd_levi_scan(args) -> int:
    from .levi import positivity_scan

    if args.radius > 0.1:
        raise CLIError(EXIT_INPUT, "bad_radius", "radius must be at most 0.1")
    rep = positivity_scan(args.model, args.radius, args.grid, args.exclude, args.seed,
                          include_origin=args.include_origin, keep_spectra=bool(args.csv))
    if args.csv:
        import numpy as np

        np.savetxt(args.csv, rep.spectra, delimiter=",", header="lambda1,lambda2,lambda3", comments="")
    _emit(rep.to_json(), args)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_selftest(args) -> int:
    from .acceptance import run_all

    only = None
    if args.cases:
        try:
            only = sorted({int(c) for c in args.cases.split(",")})
        except ValueError:
            raise CLIError(EXIT_INPUT, "bad_cases", f"--cases expects comma-separated numbers, got {args.cases!r}") from None
        if not all(1 <= c <= 8 for c in only):
            raise CLIError(EXIT_INPUT, "bad_cases", "criterion numbers run from 1 to 8")
    results = run_all(args.seed, args.scale, only=only,
                      report=lambda r: print(r.line(), file=sys.stderr, flush=True))
    ok = all(r.passed and r.within_time for r in results)
    _emit({"pass": ok, "seed": args.seed, "scale": args.scale, "criteria": [r.to_json() for r in results]}, args)
    return EXIT_OK if ok else EXIT_FAIL


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=_positive(float), default=DEFAULT_TOL,
                        help="classification tolerance for the cosquare (default %(default)g)")
    common.add_argument("--sign-tol", type=_positive(float), default=DEFAULT_SIGN_TOL,
                        help="relative tolerance of the sign classifier (default %(default)g)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="write JSON here instead of stdout")
    common.add_argument("--strict", action="store_true", help="exit 3 on degenerate input")
    common.add_argument("--threads", help="worker threads (default: $CRPOINT_THREADS or 1)")

    parser = argparse.ArgumentParser(prog="crpoint", description="Quadratic complex points of real 4-manifolds in C^3.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="sign and cosquare class of a pair")
    p.add_argument("pair", help="pair JSON file, or - for stdin")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("normal-form", parents=[common], help="h-congruence normal form with witness")
    p.add_argument("pair")
    p.set_defaults(func=cmd_normal_form)

    p = sub.add_parser("homotopy", parents=[common], help="certified path to the model pair")
    p.add_argument("pair")
    p.add_argument("--samples", type=_positive(int), default=512)
    p.add_argument("--margin", type=_positive(float), default=1e-6)
    p.add_argument("--max-retries", type=_positive(int), default=20)
    p.add_argument("--eta", type=_positive(float), default=0.5, help="bump amplitude")
    p.set_defaults(func=cmd_homotopy)

    p = sub.add_parser("surface-check", parents=[common], help="verify no new complex points")
    p.add_argument("path", help="path JSON as written by `homotopy`")
    p.add_argument("--epsilon", type=_positive(float), default=1.0)
    p.add_argument("--n", type=_positive(int), default=None, help="root index (default: n_required)")
    p.add_argument("--grid-s", type=_positive(int), default=64)
    p.add_argument("--grid-u", type=_positive(int), default=32)
    p.add_argument("--grid-theta", type=_positive(int), default=32)
    p.add_argument("--fd-points", type=int, default=100)
    p.add_argument("--samples", type=_positive(int), default=512)
    p.add_argument("--margin", type=_positive(float), default=1e-6)
    p.add_argument("--center-first", action="store_true", help="path(0) is already the center pair")
    p.set_defaults(func=cmd_surface_check)

    p = sub.add_parser("levi-scan", parents=[common], help="Levi form positivity scan")
    p.add_argument("--model", choices=["elliptic", "hyperbolic"], required=True)
    p.add_argument("--radius", type=_positive(float), default=0.05)
    p.add_argument("--grid", type=_positive(int), default=7**6, help="number of sample points")
    p.add_argument("--exclude", type=_positive(float), default=1e-6, help="radius excluded around the origin")
    p.add_argument("--include-origin", action="store_true")
    p.add_argument("--csv", help="write the per-point spectra here")
    p.set_defaults(func=cmd_levi_scan)

    p = sub.add_parser("selftest", parents=[common], help="run the acceptance criteria")
    p.add_argument("--scale", type=_positive(float), default=1.0, help="fraction of the full sample counts")
    p.add_argument("--cases", help="comma-separated criterion numbers (default: all)")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    try:
        _threads(args)
        return args.func(args)
    except CLIError as exc:
        sys.stderr.write(dumps({"error": str(exc), "reason": exc.reason}))
        return exc.code
    except (FormatError, NonSymmetricError, NonFiniteError) as exc:
        sys.stderr.write(dumps({"error": str(exc), "reason": "invalid_input"}))
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
