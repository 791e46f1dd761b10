"""Downlink rate-fronthaul regions: joint encoding, successive encoding,
corner procedures and their equivalence.

The joint-encoding region is cut out by

    C(T) - R(S) >= I(U_S; X_T) - sum_{k in S} I(U_k; Y_k)
                   + Istar(U_S) + Istar(X_T)

where Istar is the multivariate correlation sum_j H(.) - H(joint).  The
corner procedures mirror the uplink ones with the roles of the index
sets swapped: a rate step tightens the constraint with S = I_k u {b_k},
T = J_k.  Unlike the uplink, the encoding order achieving a corner is
the solve order itself (no reversal).

Computed rates R_k = I(U_k;Y_k) - I(U_k; prior) can be negative for
poorly matched auxiliary joints; they are reported raw and flagged, not
clamped, so the iterative/closed-form equality stays exact.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass

import numpy as np

from .prob import JointLaw, LawError, entropy, mutual_info, subsets
from .uplink import (
    ACTIVE_TOL,
    DEDUP_TOL,
    MAX_ENUM,
    MEMBERSHIP_TOL,
    PIVOT_TOL,
    CornerEnumeration,
    RateFronthaulPoint,
    SolveOrder,
    _row_rank,
    dedup_points,
)

NEGATIVE_RATE_TOL = 1e-9


@dataclass(frozen=True)
class EncodeOrder:
    """Permutation of the variable labels (U_1..U_K, X_1..X_L)."""

    labels: tuple[str, ...]
    K: int
    L: int

    def __post_init__(self):
        expected = {f"U{i}" for i in range(1, self.K + 1)} | {
            f"X{j}" for j in range(1, self.L + 1)
        }
        if set(self.labels) != expected or len(self.labels) != self.K + self.L:
            raise ValueError(
                f"labels {self.labels} are not a permutation of {sorted(expected)}"
            )

    @classmethod
    def from_labels(cls, labels) -> "EncodeOrder":
        labels = tuple(labels)
        K = sum(1 for s in labels if s.startswith("U"))
        return cls(labels, K, len(labels) - K)


def downlink_dims(law: JointLaw) -> tuple[int, int]:
    K = sum(1 for n in law.names if re.match(r"^U\d+$", n))
    L = sum(1 for n in law.names if re.match(r"^X\d+$", n))
    return K, L


def _us(idx):
    return [f"U{i}" for i in sorted(idx)]


def _xs(idx):
    return [f"X{l}" for l in sorted(idx)]


def istar(law: JointLaw, names) -> float:
    """Multivariate correlation sum_j H(component_j) - H(joint), in bits.

    Only within-group sets are meaningful here: all U's or all X's.
    """
    names = list(names)
    groups = {n[0] for n in names}
    if len(groups) > 1:
        raise LawError(f"istar over mixed variable groups: {sorted(names)}")
    if not names:
        return 0.0
    val = sum(entropy(law, [n]) for n in names) - entropy(law, names)
    if abs(val) <= 1e-12:
        return max(val, 0.0)
    return val


def je_slack(law: JointLaw, point: RateFronthaulPoint, S, T) -> float:
    """Slack of the joint-encoding constraint for user set S, relay set T."""
    S, T = set(S), set(T)
    rhs = (
        mutual_info(law, _us(S), _xs(T))
        - sum(mutual_info(law, [f"U{k}"], [f"Y{k}"]) for k in S)
        + istar(law, _us(S))
        + istar(law, _xs(T))
    )
    return point.c_sum(T) - point.r_sum(S) - rhs


def min_je_slack(law: JointLaw, point: RateFronthaulPoint):
    K, L = downlink_dims(law)
    best, arg = math.inf, (set(), set())
    for S in subsets(range(1, K + 1)):
        for T in subsets(range(1, L + 1)):
            s = je_slack(law, point, S, T)
            if s < best:
                best, arg = s, (set(S), set(T))
    return best, arg


def in_je_region(law: JointLaw, point: RateFronthaulPoint, tol: float = MEMBERSHIP_TOL) -> bool:
    return min_je_slack(law, point)[0] >= -tol


def se_corner(law: JointLaw, order: EncodeOrder) -> RateFronthaulPoint:
    """Extreme point of the successive-encoding region for encode order pi."""
    K, L = order.K, order.L
    R = np.zeros(K)
    C = np.zeros(L)
    before: list[str] = []
    for lab in order.labels:
        if lab.startswith("U"):
            k = int(lab[1:])
            R[k - 1] = mutual_info(law, [lab], [f"Y{k}"]) - mutual_info(
                law, [lab], before
            )
        else:
            l = int(lab[1:])
            C[l - 1] = mutual_info(law, [lab], before)
        before.append(lab)
    return RateFronthaulPoint(R, C)


def downlink_corner_iterative(law: JointLaw, order: SolveOrder) -> RateFronthaulPoint:
    """Corner point solved coordinate by coordinate against tight constraints.

    A rate step tightens the constraint with S = I_k u {b_k}, T = J_k; a
    fronthaul step tightens S = I_k, T = J_k u {b_k}.
    """
    K, L = order.K, order.L
    R = np.zeros(K)
    C = np.zeros(L)
    a, b = order.a, order.b
    for k in range(1, K + L + 1):
        I, J = order.index_sets(k)
        bk = b[k - 1]
        r_sum = float(sum(R[i - 1] for i in I))
        c_sum = float(sum(C[j - 1] for j in J))
        if a[k - 1] == 1:
            S = I | {bk}
            val = (
                c_sum
                - r_sum
                + sum(mutual_info(law, [f"U{i}"], [f"Y{i}"]) for i in S)
                - istar(law, _us(S))
                - istar(law, _xs(J))
                - mutual_info(law, _us(S), _xs(J))
            )
            R[bk - 1] = val
        else:
            T = J | {bk}
            val = (
                r_sum
                - c_sum
                - sum(mutual_info(law, [f"U{i}"], [f"Y{i}"]) for i in I)
                + istar(law, _us(I))
                + istar(law, _xs(T))
                + mutual_info(law, _us(I), _xs(T))
            )
            C[bk - 1] = val
    return RateFronthaulPoint(R, C)


def downlink_corner_closed(law: JointLaw, order: SolveOrder) -> RateFronthaulPoint:
    """Closed-form corner; agrees with the iterative procedure to 1e-9."""
    K, L = order.K, order.L
    R = np.zeros(K)
    C = np.zeros(L)
    a, b = order.a, order.b
    for k in range(1, K + L + 1):
        I, J = order.index_sets(k)
        bk = b[k - 1]
        if a[k - 1] == 1:
            R[bk - 1] = mutual_info(law, [f"U{bk}"], [f"Y{bk}"]) - mutual_info(
                law, [f"U{bk}"], _us(I) + _xs(J)
            )
        else:
            C[bk - 1] = mutual_info(law, [f"X{bk}"], _us(I) + _xs(J))
    return RateFronthaulPoint(R, C)


def solve_order_to_encode_order(order: SolveOrder) -> EncodeOrder:
    """Encoding order achieving the corner: elementwise map, no reversal."""
    labels = []
    for lab in order.labels:
        if lab.startswith("R"):
            labels.append("U" + lab[1:])
        else:
            labels.append("X" + lab[1:])
    return EncodeOrder(tuple(labels), order.K, order.L)


@dataclass(frozen=True)
class DownlinkCornerReport:
    point: RateFronthaulPoint
    min_slack: float
    in_region: bool
    active: tuple
    rank: int
    is_corner: bool
    negative_coords: tuple  # coordinate labels below -1e-9

    @property
    def in_nonnegative_orthant(self) -> bool:
        return not self.negative_coords


def verify_downlink_corner(
    law: JointLaw,
    point: RateFronthaulPoint,
    membership_tol: float = MEMBERSHIP_TOL,
    active_tol: float = ACTIVE_TOL,
    pivot_tol: float = PIVOT_TOL,
) -> DownlinkCornerReport:
    K, L = downlink_dims(law)
    active = []
    normals = []
    min_slack = math.inf
    for S in subsets(range(1, K + 1)):
        for T in subsets(range(1, L + 1)):
            s = je_slack(law, point, S, T)
            min_slack = min(min_slack, s)
            if abs(s) <= active_tol and (S or T):
                active.append((tuple(S), tuple(T)))
                n = np.zeros(K + L)
                for i in S:
                    n[i - 1] = -1.0
                for j in T:
                    n[K + j - 1] = 1.0
                normals.append(n)
    rank = _row_rank(normals, pivot_tol)
    in_region = min_slack >= -membership_tol
    negative = tuple(
        [f"R{i + 1}" for i in range(K) if point.R[i] < -NEGATIVE_RATE_TOL]
        + [f"C{j + 1}" for j in range(L) if point.C[j] < -NEGATIVE_RATE_TOL]
    )
    return DownlinkCornerReport(
        point=point,
        min_slack=min_slack,
        in_region=in_region,
        active=tuple(active),
        rank=rank,
        is_corner=in_region and rank >= K + L,
        negative_coords=negative,
    )


def downlink_enumerate_corners(
    law: JointLaw, dedup_tol: float = DEDUP_TOL
) -> CornerEnumeration:
    K, L = downlink_dims(law)
    if K + L > MAX_ENUM:
        raise ValueError(f"K+L = {K + L} exceeds enumeration guard {MAX_ENUM}")
    labels = [f"R{i}" for i in range(1, K + 1)] + [f"C{j}" for j in range(1, L + 1)]
    corners = []
    for perm in itertools.permutations(labels):
        order = SolveOrder(perm, K, L)
        corners.append((order, downlink_corner_closed(law, order)))
    vertices = dedup_points([p for _, p in corners], dedup_tol)
    return CornerEnumeration(tuple(corners), tuple(vertices))
