"""Named verification suites driven by the CLI.

Each suite runs one of the numerically-verifiable structural claims
(corner-procedure equivalences, face descriptions, degeneracy and
dimension predicates, split identities) against a user-supplied spec and
returns a (passed, details) pair with deterministic, seed-reproducible
contents.
"""

from __future__ import annotations

import itertools

import numpy as np

from . import downlink as dl
from . import face as df
from . import splitting as sp
from . import uplink as ul
from .prob import (
    DownlinkSpec,
    UplinkSpec,
    build_downlink_joint,
    build_uplink_joint,
    mutual_info,
)

UPLINK_SUITES = (
    "lemma1",
    "lemma2",
    "lemma3",
    "lemma4",
    "lemma5",
    "lemma6",
    "thm1",
    "telescope",
)
DOWNLINK_SUITES = ("lemma7", "lemma8", "thm3")


def _all_solve_orders(K, L):
    labels = [f"R{i}" for i in range(1, K + 1)] + [f"C{j}" for j in range(1, L + 1)]
    for perm in itertools.permutations(labels):
        yield ul.SolveOrder(perm, K, L)


def _admissible_queries(K, L):
    for S in ul.subsets(range(1, K + 1)):
        for T in ul.subsets(range(1, L + 1)):
            S_, T_ = set(S), set(T)
            Sc = set(range(1, K + 1)) - S_
            Tc = set(range(1, L + 1)) - T_
            if (S_ | T_) and (Sc | Tc):
                yield df.FaceQuery(frozenset(S_), frozenset(T_))


def _random_box_points(law, n, rng):
    """Random probe points in an inflated bounding box of the corners."""
    K, L = ul.uplink_dims(law)
    mat = np.array([v.as_vector() for v in ul.enumerate_corners(law).vertices])
    lo = mat.min(axis=0) - 0.25
    hi = mat.max(axis=0) + 0.25
    pts = []
    for _ in range(n):
        vec = rng.uniform(lo, hi)
        pts.append(ul.RateFronthaulPoint.from_vector(vec, K, L))
    return pts


def suite_lemma1(spec: UplinkSpec, seed=0, samples=100):
    law = build_uplink_joint(spec)
    worst = 0.0
    for order in _all_solve_orders(spec.K, spec.L):
        a = ul.corner_iterative(law, order).as_vector()
        b = ul.corner_closed(law, order).as_vector()
        worst = max(worst, float(np.max(np.abs(a - b))))
    return worst <= 1e-9, {"max_deviation": worst, "tolerance": 1e-9}


def suite_lemma2(spec: UplinkSpec, seed=0, samples=100):
    law = build_uplink_joint(spec)
    failures = []
    for order, point in ul.enumerate_corners(law).corners:
        rep = ul.verify_corner(law, point)
        if not rep.is_corner:
            failures.append(",".join(order.labels))
    return not failures, {"n_corners": _fact(spec.K + spec.L), "failures": failures}


def suite_lemma3(spec: UplinkSpec, seed=0, samples=500):
    law = build_uplink_joint(spec)
    rng = np.random.default_rng(seed)
    pts = list(ul.enumerate_corners(law).vertices)
    pts += df.sample_face_points(law, samples // 2, rng)
    pts += _random_box_points(law, samples - samples // 2, rng)
    disagreements = 0
    for p in pts:
        if df.on_dominant_face(law, p) != df.on_dominant_face_alt(law, p):
            disagreements += 1
    return disagreements == 0, {"n_points": len(pts), "disagreements": disagreements}


def suite_lemma4(spec: UplinkSpec, seed=0, samples=200):
    law = build_uplink_joint(spec)
    results = {}
    ok = True
    for q in _admissible_queries(spec.K, spec.L):
        rep = df.check_face_decomposition(law, q, samples=samples, seed=seed)
        key = f"S={sorted(q.S)},T={sorted(q.T)}"
        results[key] = {
            "forward_failures": rep.forward_failures,
            "converse_failures": rep.converse_failures,
        }
        ok = ok and rep.passed
    return ok, results


def suite_lemma5(spec: UplinkSpec, seed=0, samples=100):
    law = build_uplink_joint(spec)
    results = {}
    ok = True
    for q in _admissible_queries(spec.K, spec.L):
        degen = df.degeneracy_condition(law, q)
        factor = df.check_degenerate_factorization(law, q)
        key = f"S={sorted(q.S)},T={sorted(q.T)}"
        results[key] = {"degenerate": degen, "factorizes": factor}
        ok = ok and (degen == factor)
    return ok, results


def suite_lemma6(spec: UplinkSpec, seed=0, samples=100):
    law = build_uplink_joint(spec)
    dim = df.dominant_face_dimension(law)
    any_degen = any(
        df.degeneracy_condition(law, q) for q in _admissible_queries(spec.K, spec.L)
    )
    ok = any_degen == (dim < spec.K + spec.L - 1)
    return ok, {"dimension": dim, "full": spec.K + spec.L - 1, "degenerate_pair_exists": any_degen}


def suite_thm1(spec: UplinkSpec, seed=0, samples=100):
    law = build_uplink_joint(spec)
    worst = 0.0
    members = True
    for order in _all_solve_orders(spec.K, spec.L):
        corner = ul.corner_closed(law, order)
        sd = ul.sd_corner(law, ul.solve_order_to_decode_order(order))
        worst = max(worst, float(np.max(np.abs(corner.as_vector() - sd.as_vector()))))
    labels = [f"X{i}" for i in range(1, spec.K + 1)] + [
        f"Yh{j}" for j in range(1, spec.L + 1)
    ]
    for perm in itertools.permutations(labels):
        sd = ul.sd_corner(law, ul.DecodeOrder(tuple(perm), spec.K, spec.L))
        if not ul.in_jd_region(law, sd, tol=1e-9):
            members = False
    return worst <= 1e-9 and members, {
        "max_deviation": worst,
        "all_sd_corners_in_region": members,
    }


def suite_telescope(spec: UplinkSpec, seed=0, samples=100):
    law = build_uplink_joint(spec)
    rng = np.random.default_rng(seed)
    d = spec.K + spec.L - 1
    worst_gap = 0.0
    all_on_face = True
    for _ in range(samples):
        alpha = rng.uniform(0.0, 1.0, size=d)
        point = sp.psi(spec, alpha)
        worst_gap = max(worst_gap, abs(df.face_gap(law, point)))
        if not df.on_dominant_face(law, point, tol=1e-8):
            all_on_face = False
    return worst_gap <= 1e-9 and all_on_face, {
        "samples": samples,
        "max_telescoping_gap": worst_gap,
        "all_on_dominant_face": all_on_face,
    }


def suite_lemma7(spec: DownlinkSpec, seed=0, samples=100):
    law = build_downlink_joint(spec)
    worst = 0.0
    for order in _all_solve_orders(spec.K, spec.L):
        a = dl.downlink_corner_iterative(law, order).as_vector()
        b = dl.downlink_corner_closed(law, order).as_vector()
        worst = max(worst, float(np.max(np.abs(a - b))))
    return worst <= 1e-9, {"max_deviation": worst, "tolerance": 1e-9}


def suite_lemma8(spec: DownlinkSpec, seed=0, samples=100):
    law = build_downlink_joint(spec)
    failures = []
    negatives = []
    for order, point in dl.downlink_enumerate_corners(law).corners:
        rep = dl.verify_downlink_corner(law, point)
        if not rep.is_corner:
            failures.append(",".join(order.labels))
        if rep.negative_coords:
            negatives.append(",".join(order.labels))
    return not failures, {
        "n_corners": _fact(spec.K + spec.L),
        "failures": failures,
        "orders_with_negative_coords": negatives,
    }


def suite_thm3(spec: DownlinkSpec, seed=0, samples=100):
    law = build_downlink_joint(spec)
    worst = 0.0
    members = True
    for order in _all_solve_orders(spec.K, spec.L):
        corner = dl.downlink_corner_closed(law, order)
        se = dl.se_corner(law, dl.solve_order_to_encode_order(order))
        worst = max(worst, float(np.max(np.abs(corner.as_vector() - se.as_vector()))))
        if not dl.in_je_region(law, se, tol=1e-9):
            members = False
    return worst <= 1e-9 and members, {
        "max_deviation": worst,
        "all_se_corners_in_region": members,
    }


def _fact(n):
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


SUITES = {
    "lemma1": (suite_lemma1, "uplink"),
    "lemma2": (suite_lemma2, "uplink"),
    "lemma3": (suite_lemma3, "uplink"),
    "lemma4": (suite_lemma4, "uplink"),
    "lemma5": (suite_lemma5, "uplink"),
    "lemma6": (suite_lemma6, "uplink"),
    "thm1": (suite_thm1, "uplink"),
    "telescope": (suite_telescope, "uplink"),
    "lemma7": (suite_lemma7, "downlink"),
    "lemma8": (suite_lemma8, "downlink"),
    "thm3": (suite_thm3, "downlink"),
}


def run_suites(spec, names, seed=0, samples=None):
    """Run the named suites against a spec; returns (all_passed, results)."""
    direction = "uplink" if isinstance(spec, UplinkSpec) else "downlink"
    if names == ["all"]:
        names = [n for n, (_, d) in SUITES.items() if d == direction]
    results = {}
    all_ok = True
    for name in names:
        if name not in SUITES:
            raise ValueError(f"unknown suite {name!r}")
        fn, d = SUITES[name]
        if d != direction:
            raise ValueError(f"suite {name!r} applies to {d} specs, got {direction}")
        kwargs = {"seed": seed}
        if samples is not None:
            kwargs["samples"] = samples
        ok, details = fn(spec, **kwargs)
        results[name] = {"passed": ok, "details": details}
        all_ok = all_ok and ok
    return all_ok, results
