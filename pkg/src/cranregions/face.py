"""Dominant face of the uplink joint-decoding region.

The dominant face collects the region points with
C([L]) - R([K]) = I(Y_1..Y_L; Yh_1..Yh_L | X_1..X_K); every region point
is dominated by a face point, so splitting schemes only ever target the
face.  This module provides the two equivalent face descriptions, the
faces F_{S,T} cut out by tight (S, T) constraints, their product
decomposition into sub-face factors, and the degeneracy/dimension
predicates that detect when the network factors into independent
sub-networks.

All sub-face predicates are evaluated as conditional mutual informations
on the single master joint law; the marginal channels of the two
sub-problems are never materialized.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .prob import JointLaw, mutual_info, subsets
from .uplink import (
    MEMBERSHIP_TOL,
    PIVOT_TOL,
    RateFronthaulPoint,
    _row_rank,
    _xs,
    _yhs,
    _ys,
    dedup_points,
    enumerate_corners,
    in_jd_region,
    uplink_dims,
)

FACE_TOL = 1e-8
MI_ZERO_TOL = 1e-10


@dataclass(frozen=True)
class FaceQuery:
    """User subset S and relay subset T selecting the face F_{S,T}."""

    S: frozenset
    T: frozenset

    def __post_init__(self):
        object.__setattr__(self, "S", frozenset(self.S))
        object.__setattr__(self, "T", frozenset(self.T))

    def validate(self, K: int, L: int):
        if not (self.S <= set(range(1, K + 1)) and self.T <= set(range(1, L + 1))):
            raise ValueError(f"face query out of range for K={K}, L={L}: {self}")
        Sc = set(range(1, K + 1)) - self.S
        Tc = set(range(1, L + 1)) - self.T
        if not (self.S | self.T):
            raise ValueError("face query needs S u T nonempty")
        if not (Sc | Tc):
            raise ValueError("face query needs S^c u T^c nonempty")


def face_gap(law: JointLaw, point: RateFronthaulPoint) -> float:
    """C([L]) - R([K]) minus the face level I(Y_all; Yh_all | X_all)."""
    K, L = uplink_dims(law)
    level = mutual_info(
        law, _ys(range(1, L + 1)), _yhs(range(1, L + 1)), _xs(range(1, K + 1))
    )
    return float(point.C.sum() - point.R.sum() - level)


def on_dominant_face(
    law: JointLaw, point: RateFronthaulPoint, tol: float = MEMBERSHIP_TOL
) -> bool:
    return in_jd_region(law, point, tol) and abs(face_gap(law, point)) <= tol


def on_dominant_face_alt(
    law: JointLaw, point: RateFronthaulPoint, tol: float = MEMBERSHIP_TOL
) -> bool:
    """Alternative description: two-sided constraint per (S, T) pair.

    For every S, T the gap C(T) - R(S) must sit between
    I(Y_T;Yh_T|X_[K]) - I(X_S;Yh_{T^c}|X_{S^c}) and I(Y_T;Yh_T|X_S).
    Agrees with `on_dominant_face` everywhere (verified numerically).
    """
    K, L = uplink_dims(law)
    allx = _xs(range(1, K + 1))
    for S in subsets(range(1, K + 1)):
        for T in subsets(range(1, L + 1)):
            S_, T_ = set(S), set(T)
            Sc = set(range(1, K + 1)) - S_
            Tc = set(range(1, L + 1)) - T_
            gap = point.c_sum(T_) - point.r_sum(S_)
            lb = mutual_info(law, _ys(T_), _yhs(T_), allx) - mutual_info(
                law, _xs(S_), _yhs(Tc), _xs(Sc)
            )
            ub = mutual_info(law, _ys(T_), _yhs(T_), _xs(S_))
            if gap < lb - tol or gap > ub + tol:
                return False
    return True


def in_face_FST(
    law: JointLaw,
    point: RateFronthaulPoint,
    q: FaceQuery,
    tol: float = FACE_TOL,
) -> bool:
    """Membership in F_{S,T}: on the dominant face with C(T) - R(S) at its cap."""
    K, L = uplink_dims(law)
    q.validate(K, L)
    if not on_dominant_face(law, point, tol):
        return False
    cap = mutual_info(law, _ys(q.T), _yhs(q.T), _xs(q.S))
    return abs(point.c_sum(q.T) - point.r_sum(q.S) - cap) <= tol


def in_sub_face_DST(
    law: JointLaw,
    point: RateFronthaulPoint,
    q: FaceQuery,
    tol: float = FACE_TOL,
) -> bool:
    """Membership of the (S, T) coordinates in the leading sub-face factor.

    Only the R_S and C_T coordinates of `point` are read.
    """
    K, L = uplink_dims(law)
    q.validate(K, L)
    S, T = q.S, q.T
    for A in subsets(S):
        for B in subsets(T):
            A_, B_ = set(A), set(B)
            gap = point.c_sum(B_) - point.r_sum(A_)
            lb = mutual_info(law, _ys(B_), _yhs(B_), _xs(S) + _yhs(T - B_)) - mutual_info(
                law, _xs(A_), _yhs(T - B_), _xs(S - A_)
            )
            ub = mutual_info(law, _ys(B_), _yhs(B_), _xs(A_))
            if gap < lb - tol or gap > ub + tol:
                return False
    return True


def in_sub_face_cond(
    law: JointLaw,
    point: RateFronthaulPoint,
    q: FaceQuery,
    tol: float = FACE_TOL,
) -> bool:
    """Membership of the complement coordinates in the conditional sub-face.

    The conditional sub-problem sees (X_S, Yh_T) as decoder side
    information; only the R_{S^c} and C_{T^c} coordinates are read.
    """
    K, L = uplink_dims(law)
    q.validate(K, L)
    S, T = set(q.S), set(q.T)
    Sc = set(range(1, K + 1)) - S
    Tc = set(range(1, L + 1)) - T
    for A in subsets(Sc):
        for B in subsets(Tc):
            A_, B_ = set(A), set(B)
            gap = point.c_sum(B_) - point.r_sum(A_)
            lb = mutual_info(
                law,
                _ys(B_),
                _yhs(B_),
                _xs(range(1, K + 1)) + _yhs((Tc - B_) | T),
            ) - mutual_info(
                law, _xs(A_), _yhs((Tc - B_) | T), _xs((Sc - A_) | S)
            )
            ub = mutual_info(
                law, _ys(B_), _yhs(B_), _xs(A_ | S) + _yhs(T)
            ) - mutual_info(law, _xs(A_), _yhs(T), _xs(S))
            if gap < lb - tol or gap > ub + tol:
                return False
    return True


def sample_face_points(law: JointLaw, n: int, rng: np.random.Generator):
    """Random dominant-face members: Dirichlet convex combinations of face corners."""
    vertices = enumerate_corners(law).vertices
    K, L = uplink_dims(law)
    mat = np.array([v.as_vector() for v in vertices])
    out = []
    for _ in range(n):
        w = rng.dirichlet(np.ones(len(vertices)))
        out.append(RateFronthaulPoint.from_vector(w @ mat, K, L))
    return out


@dataclass(frozen=True)
class FaceDecompositionReport:
    query: FaceQuery
    n_face_points: int
    n_product_points: int
    forward_failures: int
    converse_failures: int

    @property
    def passed(self) -> bool:
        return self.forward_failures == 0 and self.converse_failures == 0


def check_face_decomposition(
    law: JointLaw,
    q: FaceQuery,
    samples: int = 200,
    seed: int = 0,
    tol: float = FACE_TOL,
) -> FaceDecompositionReport:
    """Numerical check of F_{S,T} = D_{S,T} x D_{S^c,T^c | S,T}.

    Forward: every corner on F_{S,T} and random convex combinations of
    them satisfy both sub-face predicates.  Converse: recombining the
    (S,T) half of one face sample with the complement half of another
    (a generic member of the product) lands back on F_{S,T}.
    """
    K, L = uplink_dims(law)
    q.validate(K, L)
    rng = np.random.default_rng(seed)
    face_corners = [
        v for v in enumerate_corners(law).vertices if in_face_FST(law, v, q, tol)
    ]
    if not face_corners:
        return FaceDecompositionReport(q, 0, 0, 0, 0)
    mat = np.array([v.as_vector() for v in face_corners])
    points = list(face_corners)
    for _ in range(samples):
        w = rng.dirichlet(np.ones(len(face_corners)))
        points.append(RateFronthaulPoint.from_vector(w @ mat, K, L))

    forward_failures = 0
    for p in points:
        if not (in_sub_face_DST(law, p, q, tol) and in_sub_face_cond(law, p, q, tol)):
            forward_failures += 1

    # Coordinate mask for the (S, T) block of the full vector.
    mask = np.zeros(K + L, dtype=bool)
    for i in q.S:
        mask[i - 1] = True
    for j in q.T:
        mask[K + j - 1] = True

    converse_failures = 0
    n_product = 0
    for _ in range(samples):
        w1 = rng.dirichlet(np.ones(len(face_corners)))
        w2 = rng.dirichlet(np.ones(len(face_corners)))
        vec = np.where(mask, w1 @ mat, w2 @ mat)
        n_product += 1
        if not in_face_FST(law, RateFronthaulPoint.from_vector(vec, K, L), q, tol):
            converse_failures += 1
    return FaceDecompositionReport(
        q, len(points), n_product, forward_failures, converse_failures
    )


def degeneracy_condition(
    law: JointLaw, q: FaceQuery, tol: float = MI_ZERO_TOL
) -> bool:
    """True iff the (S, T) block decouples: both cross informations vanish."""
    K, L = uplink_dims(law)
    q.validate(K, L)
    S, T = set(q.S), set(q.T)
    Sc = set(range(1, K + 1)) - S
    Tc = set(range(1, L + 1)) - T
    a = mutual_info(law, _xs(S), _yhs(Tc), _xs(Sc))
    b = mutual_info(law, _xs(Sc), _yhs(T), _xs(S))
    return a <= tol and b <= tol


def check_degenerate_factorization(
    law: JointLaw, q: FaceQuery, tol: float = FACE_TOL
) -> bool:
    """Check D = D_{S,T} x D_{S^c,T^c} via corner sets.

    Under factorization the corner set of D equals the Cartesian product
    of its coordinate projections, which are exactly the corner sets of
    the two independent sub-problems.
    """
    K, L = uplink_dims(law)
    q.validate(K, L)
    vertices = enumerate_corners(law).vertices
    mat = np.array([v.as_vector() for v in vertices])
    mask = np.zeros(K + L, dtype=bool)
    for i in q.S:
        mask[i - 1] = True
    for j in q.T:
        mask[K + j - 1] = True

    def dedup_rows(rows):
        out = []
        for r in rows:
            if not any(np.max(np.abs(r - o)) <= tol for o in out):
                out.append(r)
        return out

    proj_a = dedup_rows(list(mat[:, mask]))
    proj_b = dedup_rows(list(mat[:, ~mask]))
    full = dedup_rows(list(mat))
    if len(full) != len(proj_a) * len(proj_b):
        return False
    for ra in proj_a:
        for rb in proj_b:
            vec = np.empty(K + L)
            vec[mask] = ra
            vec[~mask] = rb
            if not any(np.max(np.abs(vec - f)) <= tol for f in full):
                return False
    return True


def dominant_face_dimension(law: JointLaw, pivot_tol: float = PIVOT_TOL) -> int:
    """Affine dimension of the dominant face from its enumerated corners."""
    vertices = dedup_points(enumerate_corners(law).vertices)
    mat = np.array([v.as_vector() for v in vertices])
    if len(mat) <= 1:
        return 0
    diffs = mat[1:] - mat[0]
    return _row_rank(list(diffs), pivot_tol)
