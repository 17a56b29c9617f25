"""Command-line front end: ``darboux <subcommand> [flags]``.

Tables are written as CSV (or JSON with ``--format json``) with floats in
scientific notation with 12 significant digits. Exit codes: 0 success,
1 verification failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np

from . import __version__
from .catalog import FAMILIES, catalog_get
from .kdv import CANDIDATES, check_candidate
from .scattering import ScatteringSample, _unwrap_from_top, numeric_phase_shift
from .schrodinger import shoot_eigen, write_wavefunction_csv
from .spectral import numerov_crosscheck, spectral_equation_build, spectral_roots
from .verify import PROFILES, run_all

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def fmt(v) -> str:
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(v)
    if isinstance(v, str):
        return v
    return f"{float(v):.11e}"


def threads() -> int:
    raw = os.environ.get("DARBOUX_THREADS", "")
    try:
        return max(1, int(raw)) if raw else min(4, os.cpu_count() or 1)
    except ValueError:
        raise UsageError(f"DARBOUX_THREADS must be an integer, got {raw!r}")


def _family_params(args) -> dict:
    params = {}
    for name in ("n", "mu", "a", "b", "seed"):
        v = getattr(args, name, None)
        if v is not None:
            params[name] = Fraction(v) if name == "mu" else v
    return params


def _spec(args):
    if args.family not in FAMILIES:
        raise UsageError(f"unknown family {args.family!r}; choose from {sorted(FAMILIES)}")
    try:
        return catalog_get(args.family, **_family_params(args))
    except ValueError as err:
        raise UsageError(str(err))


def _range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(s) for s in text.split(","))
    except ValueError:
        raise UsageError(f"--range expects 'lo,hi', got {text!r}")
    if not lo < hi:
        raise UsageError("--range needs lo < hi")
    return lo, hi


def _emit(args, header: list[str], rows: list[list], extra=None):
    if args.format == "json":
        payload = [dict(zip(header, r)) for r in rows]
        text = json.dumps(payload if extra is None else {**extra, "rows": payload}, indent=2)
        text += "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([fmt(v) for v in r])
        text = buf.getvalue()
    _write(args, text)


def _write(args, text: str):
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands


def cmd_potential(args) -> int:
    spec = _spec(args)
    lo, hi = _range(args.range)
    if args.samples < 2:
        raise UsageError("--samples must be >= 2")
    xs = np.linspace(lo, hi, args.samples)
    poles = sorted({p.lo.x for p in spec.pieces if not p.lo.infinite}
                   | {p.hi.x for p in spec.pieces if not p.hi.infinite})
    poles = [p for p in poles if lo <= p <= hi]
    step = (hi - lo) / (args.samples - 1)
    rows = []
    for x in xs:
        if any(abs(x - p) < 1e-9 * max(1.0, abs(p)) for p in poles):
            continue
        rows.append([float(x), float(spec.V(float(x))), _piece_index(spec, x), ""])
    for p in poles:
        rows.append([float(p), math.inf, -1, "pole"])
    rows.sort(key=lambda r: r[0])
    # rows closer than a quarter step to a pole are flagged as near-pole
    for r in rows:
        if r[3] == "" and any(abs(r[0] - p) < 0.25 * step for p in poles):
            r[3] = "near-pole"
    _emit(args, ["x", "V", "piece", "flag"], rows)
    return EXIT_OK


def _piece_index(spec, x) -> int:
    for i, p in enumerate(spec.pieces):
        if p.contains(float(x)):
            return i
    return -1


def _piece(spec, side):
    try:
        return spec.piece_named(side)
    except ValueError as err:
        raise UsageError(str(err))


def cmd_boundstate(args) -> int:
    spec = _spec(args)
    piece = _piece(spec, args.side)
    lo, hi = _range(args.range) if args.range else (-50.0, 0.0 if not piece.bounded else 400.0)
    states = shoot_eigen(spec, piece, (lo, hi), args.count, h=args.h)
    rows = [[s.index, s.energy, s.nodes] for s in states]
    _emit(args, ["index", "E", "nodes"], rows)
    if args.wavefunction and states:
        with open(args.wavefunction, "w", encoding="utf-8") as fh:
            write_wavefunction_csv(fh, states[0].x, states[0].psi)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    n = args.n if args.n is not None else 2
    mu = Fraction(args.mu) if args.mu is not None else Fraction(1)
    if mu <= 0:
        raise UsageError("--mu must be > 0")
    c = float(mu) ** (1.0 / (2 * n + 1))
    try:
        eq = spectral_equation_build(n, c, form=args.form)
    except ValueError as err:
        raise UsageError(str(err))
    roots = numerov_crosscheck(spectral_roots(eq, args.count), n, mu)
    rows = [[n, r.m, r.kappa, r.E, r.extra["E_numerov"], r.extra["rel_diff"]] for r in roots]
    _emit(args, ["n", "m", "kappa_m", "E_m", "E_m_numerov", "rel_diff"], rows)
    return EXIT_OK


def cmd_phaseshift(args) -> int:
    spec = _spec(args)
    piece = _piece(spec, args.side)
    if not 0 < args.kmin < args.kmax:
        raise UsageError("need 0 < --kmin < --kmax")
    ks = np.geomspace(args.kmin, args.kmax, args.samples)
    pid = f"{spec.family}-{args.side}"
    with ThreadPoolExecutor(max_workers=threads()) as pool:
        samples = list(pool.map(lambda k: numeric_phase_shift(spec, piece, float(k), piece_id=pid), ks))
    anchor = -(piece.lo.l if piece.hi.infinite else piece.hi.l) * math.pi / 2
    deltas = _unwrap_from_top([s.S for s in samples], anchor)
    samples = [ScatteringSample(s.k, s.S, d, s.piece) for s, d in zip(samples, deltas)]
    rows = [[s.k, s.S.real, s.S.imag, s.delta, s.piece] for s in samples]
    _emit(args, ["k", "Re S", "Im S", "delta_unwrapped", "piece_id"], rows)
    return EXIT_OK


def cmd_kdv_check(args) -> int:
    if args.candidate not in CANDIDATES:
        raise UsageError(f"unknown candidate {args.candidate!r}; choose from {sorted(CANDIDATES)}")
    verdict = check_candidate(args.candidate)
    _write(args, json.dumps(verdict, indent=2) + "\n")
    ok = verdict["exact"] if verdict["exact"] is not None else \
        verdict["max_numeric_residual"] < args.residual_tol
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify_all(args) -> int:
    results = run_all(args.tolerance)
    report = {
        "tolerance": args.tolerance,
        "summary": [r.line() for r in results],
        "passed": all(r.passed for r in results),
        "checks": [r.to_dict() for r in results],
    }
    for r in results:
        print(r.line(), file=sys.stderr)
    _write(args, json.dumps(report, indent=2, default=str) + "\n")
    return EXIT_OK if report["passed"] else EXIT_FAIL


# ---------------------------------------------------------------------------


def _add_family(p, required=True):
    p.add_argument("--family", required=required, help="family id, e.g. 10, 22, 32, 37-44")
    p.add_argument("--n", type=int, help="chain length / integer parameter")
    p.add_argument("--mu", help="rational mu > 0 (e.g. 1 or 3/2)")
    p.add_argument("--a", type=float, help="numerator constant of family 41")
    p.add_argument("--b", type=float, help="cos coefficient of family 41")
    p.add_argument("--seed", help="first-step seed for family 5: cos, x, cosh, sinh")


def _add_output(p):
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="darboux", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("potential", help="tabulate V(x) with pole rows flagged")
    _add_family(p)
    p.add_argument("--range", default="-3,4", help="lo,hi (default -3,4)")
    p.add_argument("--samples", type=int, default=701)
    _add_output(p)
    p.set_defaults(func=cmd_potential)

    p = sub.add_parser("boundstate", help="bound states of one piece by shooting")
    _add_family(p)
    p.add_argument("--side", default="right", choices=("left", "right", "middle", "whole"))
    p.add_argument("--count", type=int, default=5)
    p.add_argument("--range", help="energy bracket lo,hi")
    p.add_argument("--h", type=float, default=1e-3, help="Numerov step")
    p.add_argument("--wavefunction", help="CSV path for the lowest state (x, psi, dpsi)")
    _add_output(p)
    p.set_defaults(func=cmd_boundstate)

    p = sub.add_parser("spectrum", help="roots of the confining-piece spectral equation")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--mu", default="1")
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--form", choices=("constructed", "reference"), default="constructed")
    _add_output(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("phaseshift", help="numeric S(k) and unwrapped phase shift")
    _add_family(p)
    p.add_argument("--side", default="right", choices=("left", "right"))
    p.add_argument("--kmin", type=float, default=0.5)
    p.add_argument("--kmax", type=float, default=8.0)
    p.add_argument("--samples", type=int, default=40)
    _add_output(p)
    p.set_defaults(func=cmd_phaseshift)

    p = sub.add_parser("kdv-check", help="KdV residual verdict for a named candidate")
    p.add_argument("--candidate", required=True, help=", ".join(sorted(CANDIDATES)))
    p.add_argument("--residual-tol", type=float, default=1e-10)
    p.add_argument("--out")
    p.set_defaults(func=cmd_kdv_check)

    p = sub.add_parser("verify-all", help="run every acceptance check; JSON report")
    p.add_argument("--tolerance", choices=sorted(PROFILES), default="default")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify_all)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as err:
        parser.print_usage(sys.stderr)
        print(f"darboux: error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
