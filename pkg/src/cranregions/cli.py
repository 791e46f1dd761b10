"""Command-line front end.

Subcommands:
    corners   enumerate and verify the corner points of a spec's region
    verify    run named verification suites (lemma1..lemma6, thm1,
              telescope for uplink; lemma7, lemma8, thm3 for downlink)
    psi       evaluate the splitting map at a parameter vector, or invert
              it for a target dominant-face point
    face      dominant-face and face-membership predicates at one point
    slice     CSV plot data for a 2-D slice of the region

Exit codes: 0 success, 1 verification failure, 2 usage/parse error,
3 non-convergence.  Reports are JSON with sorted keys; identical
(spec, command, seed) inputs give byte-identical output apart from the
wall_time_s field.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time

import numpy as np

from . import downlink as dl
from . import face as df
from . import splitting as sp
from . import uplink as ul
from .prob import LawError, UplinkSpec, build_downlink_joint, build_uplink_joint
from .specio import SpecFileError, load_spec, spec_to_dict
from .suites import SUITES, run_suites

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_NO_CONVERGE = 3


class UsageError(Exception):
    """User-facing input problem; maps to exit code 2."""


def _report(command: str, args: dict, results, passed: bool, t0: float, seed=None,
            tolerances=None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "args": args,
        "seed": seed,
        "tolerances": tolerances or {},
        "results": results,
        "passed": passed,
        "wall_time_s": round(time.monotonic() - t0, 6),
    }


def _emit(report: dict):
    print(json.dumps(report, sort_keys=True, indent=2))


def _parse_floats(text: str, what: str):
    try:
        return [float(x) for x in text.split(",") if x.strip() != ""]
    except ValueError as e:
        raise UsageError(f"cannot parse {what} {text!r}: {e}") from e


def _parse_int_set(text: str, what: str):
    if not text.strip():
        return set()
    try:
        return {int(x) for x in text.split(",")}
    except ValueError as e:
        raise UsageError(f"cannot parse {what} {text!r}: {e}") from e


def _point_from_arg(text: str, K: int, L: int) -> ul.RateFronthaulPoint:
    vals = _parse_floats(text, "point")
    if len(vals) != K + L:
        raise UsageError(
            f"point needs {K + L} coordinates (R1..R{K},C1..C{L}), got {len(vals)}"
        )
    return ul.RateFronthaulPoint.from_vector(np.array(vals), K, L)


def cmd_corners(args) -> int:
    t0 = time.monotonic()
    spec = load_spec(args.spec)
    if isinstance(spec, UplinkSpec):
        law = build_uplink_joint(spec)
        enum = ul.enumerate_corners(law, dedup_tol=args.dedup_tol)
        verify = lambda p: ul.verify_corner(law, p)
    else:
        law = build_downlink_joint(spec)
        enum = dl.downlink_enumerate_corners(law, dedup_tol=args.dedup_tol)
        verify = lambda p: dl.verify_downlink_corner(law, p)
    rows = []
    all_ok = True
    for order, point in enum.corners:
        rep = verify(point)
        rows.append(
            {
                "permutation": ",".join(order.labels),
                "point": [round(v, 12) for v in point.as_vector()],
                "is_corner": rep.is_corner,
            }
        )
        all_ok = all_ok and rep.is_corner
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf)
        labels = [f"R{i}" for i in range(1, spec.K + 1)] + [
            f"C{j}" for j in range(1, spec.L + 1)
        ]
        w.writerow(["permutation"] + labels + ["is_corner"])
        seen = set()
        for row in rows:
            key = tuple(round(v, 9) for v in row["point"])
            if args.dedup and key in seen:
                continue
            seen.add(key)
            w.writerow([row["permutation"]] + row["point"] + [row["is_corner"]])
        sys.stdout.write(buf.getvalue())
    else:
        results = {
            "corners": rows,
            "n_vertices": len(enum.vertices),
            "vertices": [[round(v, 12) for v in p.as_vector()] for p in enum.vertices],
        }
        _emit(
            _report(
                "corners",
                {"spec": args.spec, "dedup_tol": args.dedup_tol, "format": args.format},
                results,
                all_ok,
                t0,
                tolerances={"dedup": args.dedup_tol},
            )
        )
    return EXIT_OK if all_ok else EXIT_FAIL


def cmd_verify(args) -> int:
    t0 = time.monotonic()
    spec = load_spec(args.spec)
    names = args.suite.split(",") if args.suite != "all" else ["all"]
    try:
        passed, results = run_suites(spec, names, seed=args.seed, samples=args.samples)
    except ValueError as e:
        raise UsageError(str(e)) from e
    _emit(
        _report(
            "verify",
            {"spec": args.spec, "suite": args.suite, "samples": args.samples},
            results,
            passed,
            t0,
            seed=args.seed,
            tolerances={"corner_match": 1e-9, "membership": 1e-9, "face": 1e-8},
        )
    )
    return EXIT_OK if passed else EXIT_FAIL


def cmd_psi(args) -> int:
    t0 = time.monotonic()
    spec = load_spec(args.spec)
    if not isinstance(spec, UplinkSpec):
        raise UsageError("psi requires an uplink spec")
    if (args.alpha is None) == (args.invert is None):
        raise UsageError("psi needs exactly one of --alpha or --invert")
    if args.alpha is not None:
        alpha = _parse_floats(args.alpha, "--alpha")
        if len(alpha) != spec.K + spec.L - 1:
            raise UsageError(
                f"--alpha needs {spec.K + spec.L - 1} entries, got {len(alpha)}"
            )
        if not all(0.0 <= a <= 1.0 for a in alpha):
            raise UsageError("--alpha entries must lie in [0, 1]")
        config, betas, point = sp.psi_detail(spec, alpha)
        results = {
            "alpha": alpha,
            "order": list(config.order),
            "betas": {k: round(v, 12) for k, v in betas.items()},
            "point": [round(v, 12) for v in point.as_vector()],
        }
        _emit(
            _report(
                "psi",
                {"spec": args.spec, "alpha": args.alpha},
                results,
                True,
                t0,
                tolerances={"merge": 1e-12, "telescope": 1e-9},
            )
        )
        return EXIT_OK
    target = _point_from_arg(args.invert, spec.K, spec.L)
    try:
        res = sp.invert_psi(
            spec, target, tol=args.tol, max_iters=args.max_iters, seed=args.seed
        )
    except sp.NotOnDominantFaceError as e:
        raise UsageError(str(e)) from e
    results = {
        "target": [float(v) for v in target.as_vector()],
        "alpha": [round(float(a), 12) for a in res.alpha],
        "residual": res.residual,
        "n_evals": res.n_evals,
        "converged": res.converged,
    }
    _emit(
        _report(
            "psi",
            {
                "spec": args.spec,
                "invert": args.invert,
                "tol": args.tol,
                "max_iters": args.max_iters,
            },
            results,
            res.converged,
            t0,
            seed=args.seed,
            tolerances={"residual": args.tol, "face": 1e-8},
        )
    )
    return EXIT_OK if res.converged else EXIT_NO_CONVERGE


def cmd_face(args) -> int:
    t0 = time.monotonic()
    spec = load_spec(args.spec)
    if not isinstance(spec, UplinkSpec):
        raise UsageError("face requires an uplink spec")
    law = build_uplink_joint(spec)
    point = _point_from_arg(args.point, spec.K, spec.L)
    results = {
        "point": [float(v) for v in point.as_vector()],
        "in_region": ul.in_jd_region(law, point),
        "on_dominant_face": df.on_dominant_face(law, point),
        "on_dominant_face_alt": df.on_dominant_face_alt(law, point),
    }
    if args.S is not None or args.T is not None:
        S = _parse_int_set(args.S or "", "--S")
        T = _parse_int_set(args.T or "", "--T")
        results["S"] = sorted(S)
        results["T"] = sorted(T)
        if S == set(range(1, spec.K + 1)) and T == set(range(1, spec.L + 1)):
            # the full pair selects the whole dominant face, not a sub-face
            results["in_face"] = results["on_dominant_face"]
            results["degenerate"] = False
        else:
            try:
                q = df.FaceQuery(frozenset(S), frozenset(T))
                q.validate(spec.K, spec.L)
            except ValueError as e:
                raise UsageError(str(e)) from e
            results["in_face"] = df.in_face_FST(law, point, q)
            results["degenerate"] = df.degeneracy_condition(law, q)
    _emit(
        _report(
            "face",
            {"spec": args.spec, "point": args.point, "S": args.S, "T": args.T},
            results,
            results["on_dominant_face"],
            t0,
            tolerances={"membership": 1e-9, "face": 1e-8, "mi_zero": 1e-10},
        )
    )
    return EXIT_OK if results["on_dominant_face"] else EXIT_FAIL


def cmd_slice(args) -> int:
    """CSV plot data: region membership on a grid over two free coordinates."""
    spec = load_spec(args.spec)
    K, L = spec.K, spec.L
    labels = [f"R{i}" for i in range(1, K + 1)] + [f"C{j}" for j in range(1, L + 1)]
    vary = [s.strip() for s in args.vary.split(",")]
    if len(vary) != 2 or any(v not in labels for v in vary) or vary[0] == vary[1]:
        raise UsageError(
            f"--vary needs two distinct coordinates from {labels}, got {args.vary!r}"
        )
    fixed = {}
    if args.fixed:
        for part in args.fixed.split(","):
            if "=" not in part:
                raise UsageError(f"--fixed entries look like R2=0.3, got {part!r}")
            name, val = part.split("=", 1)
            name = name.strip()
            if name not in labels or name in vary:
                raise UsageError(f"--fixed names a bad coordinate {name!r}")
            fixed[name] = float(val)
    missing = [n for n in labels if n not in vary and n not in fixed]
    if missing:
        raise UsageError(f"coordinates {missing} need --fixed values")

    if isinstance(spec, UplinkSpec):
        law = build_uplink_joint(spec)
        member = lambda p: ul.in_jd_region(law, p)
    else:
        law = build_downlink_joint(spec)
        member = lambda p: dl.in_je_region(law, p)

    grid = np.linspace(args.min, args.max, args.steps)
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow([vary[0], vary[1], "in_region"])
    base = np.zeros(K + L)
    for name, val in fixed.items():
        base[labels.index(name)] = val
    i0, i1 = labels.index(vary[0]), labels.index(vary[1])
    for x in grid:
        for y in grid:
            vec = base.copy()
            vec[i0], vec[i1] = x, y
            p = ul.RateFronthaulPoint.from_vector(vec, K, L)
            w.writerow([round(float(x), 12), round(float(y), 12), int(member(p))])
    sys.stdout.write(buf.getvalue())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cranregions",
        description="Rate-fronthaul region computations for finite-alphabet relay networks.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("corners", help="enumerate and verify corner points")
    p.add_argument("spec")
    p.add_argument("--dedup-tol", type=float, default=ul.DEDUP_TOL)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--dedup", action="store_true",
                   help="in csv mode, drop duplicate points")
    p.set_defaults(fn=cmd_corners)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("spec")
    p.add_argument("--suite", default="all",
                   help="comma-separated suite names, or 'all' (choices: %s)"
                        % ",".join(SUITES))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=None)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("psi", help="evaluate or invert the splitting map")
    p.add_argument("spec")
    p.add_argument("--alpha", help="comma-separated parameter vector in [0,1]^(K+L-1)")
    p.add_argument("--invert", help="comma-separated target point R1,..,CL")
    p.add_argument("--tol", type=float, default=1e-4)
    p.add_argument("--max-iters", type=int, default=5000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_psi)

    p = sub.add_parser("face", help="dominant-face membership at one point")
    p.add_argument("spec")
    p.add_argument("--point", required=True, help="comma-separated R1,..,CL")
    p.add_argument("--S", help="comma-separated user subset")
    p.add_argument("--T", help="comma-separated relay subset")
    p.set_defaults(fn=cmd_face)

    p = sub.add_parser("slice", help="CSV membership grid over two coordinates")
    p.add_argument("spec")
    p.add_argument("--vary", required=True, help="two coordinates, e.g. R1,C1")
    p.add_argument("--fixed", help="values for the rest, e.g. R2=0.3,C2=0.5")
    p.add_argument("--min", type=float, default=0.0)
    p.add_argument("--max", type=float, default=2.0)
    p.add_argument("--steps", type=int, default=41)
    p.set_defaults(fn=cmd_slice)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors and 0 on --help; keep its code.
        return int(e.code or 0)
    try:
        return args.fn(args)
    except (UsageError, SpecFileError, LawError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
