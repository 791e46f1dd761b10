"""Uplink rate-fronthaul regions: joint decoding, successive decoding,
corner-point procedures and the joint/successive equivalence check.

The joint-decoding region is cut out by one inequality per pair of a user
subset S and a relay subset T,

    C(T) - R(S) >= I(Y_T; Yh_T | X_[K]) - I(X_S; Yh_{T^c} | X_{S^c}),

and has (K+L)! corner points, one per permutation of the coordinates.
Each corner can be computed either by the iterative procedure (solving
one coordinate at a time against the tight constraint) or by a one-shot
closed form; the two must agree to 1e-9, which the tests verify.

The corner equivalences assume each relay observes its own channel
output: p(y_1..y_L | x) must factor as a product over relays (each
factor may depend on all inputs).  With cross-relay noise correlation
the two procedures genuinely disagree.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass

import numpy as np

from .prob import JointLaw, LawError, mutual_info, subsets

MEMBERSHIP_TOL = 1e-9
ACTIVE_TOL = 1e-8
PIVOT_TOL = 1e-7
DEDUP_TOL = 1e-8
MAX_ENUM = 8  # guard: (K+L)! enumeration only up to K+L = 8


@dataclass(frozen=True)
class RateFronthaulPoint:
    """Vector (R_1..R_K, C_1..C_L) in bits per channel use."""

    R: np.ndarray
    C: np.ndarray

    def __post_init__(self):
        R = np.asarray(self.R, dtype=float)
        C = np.asarray(self.C, dtype=float)
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "C", C)
        if not (np.all(np.isfinite(R)) and np.all(np.isfinite(C))):
            raise ValueError("non-finite rate-fronthaul coordinates")
        R.setflags(write=False)
        C.setflags(write=False)

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.R, self.C])

    @classmethod
    def from_vector(cls, vec, K: int, L: int) -> "RateFronthaulPoint":
        vec = np.asarray(vec, dtype=float)
        if vec.shape != (K + L,):
            raise ValueError(f"expected vector of length {K + L}, got {vec.shape}")
        return cls(vec[:K], vec[K:])

    def r_sum(self, S) -> float:
        return float(sum(self.R[i - 1] for i in S))

    def c_sum(self, T) -> float:
        return float(sum(self.C[l - 1] for l in T))


_RATE_LABEL = re.compile(r"^R(\d+)$")
_FRONT_LABEL = re.compile(r"^C(\d+)$")


@dataclass(frozen=True)
class SolveOrder:
    """Permutation of the coordinate labels (R_1..R_K, C_1..C_L).

    a[k] is 1 when the k-th solved coordinate is a rate, 0 when it is a
    fronthaul capacity; b[k] is its 1-based user/relay index.
    """

    labels: tuple[str, ...]
    K: int
    L: int

    def __post_init__(self):
        expected = {f"R{i}" for i in range(1, self.K + 1)} | {
            f"C{j}" for j in range(1, self.L + 1)
        }
        if set(self.labels) != expected or len(self.labels) != self.K + self.L:
            raise ValueError(
                f"labels {self.labels} are not a permutation of {sorted(expected)}"
            )

    @classmethod
    def from_labels(cls, labels) -> "SolveOrder":
        labels = tuple(labels)
        K = sum(1 for s in labels if _RATE_LABEL.match(s))
        L = len(labels) - K
        return cls(labels, K, L)

    @property
    def a(self) -> tuple[int, ...]:
        return tuple(1 if s.startswith("R") else 0 for s in self.labels)

    @property
    def b(self) -> tuple[int, ...]:
        return tuple(int(s[1:]) for s in self.labels)

    def index_sets(self, k: int) -> tuple[set, set]:
        """(I_k, J_k): user/relay indices solved strictly before step k (1-based)."""
        I = {int(s[1:]) for s in self.labels[: k - 1] if s.startswith("R")}
        J = {int(s[1:]) for s in self.labels[: k - 1] if s.startswith("C")}
        return I, J


@dataclass(frozen=True)
class DecodeOrder:
    """Permutation of the variable labels (X_1..X_K, Yh_1..Yh_L)."""

    labels: tuple[str, ...]
    K: int
    L: int

    def __post_init__(self):
        expected = {f"X{i}" for i in range(1, self.K + 1)} | {
            f"Yh{j}" for j in range(1, self.L + 1)
        }
        if set(self.labels) != expected or len(self.labels) != self.K + self.L:
            raise ValueError(
                f"labels {self.labels} are not a permutation of {sorted(expected)}"
            )

    @classmethod
    def from_labels(cls, labels) -> "DecodeOrder":
        labels = tuple(labels)
        K = sum(1 for s in labels if not s.startswith("Yh"))
        return cls(labels, K, len(labels) - K)


def uplink_dims(law: JointLaw) -> tuple[int, int]:
    K = sum(1 for n in law.names if re.match(r"^X\d+$", n))
    L = sum(1 for n in law.names if re.match(r"^Yh\d+$", n))
    return K, L


def _xs(idx):
    return [f"X{i}" for i in sorted(idx)]


def _ys(idx):
    return [f"Y{l}" for l in sorted(idx)]


def _yhs(idx):
    return [f"Yh{l}" for l in sorted(idx)]


def jd_slack(law: JointLaw, point: RateFronthaulPoint, S, T) -> float:
    """Slack of the joint-decoding constraint for user set S, relay set T.

    Nonnegative slack for every (S, T) pair means the point is in the
    joint-decoding region.
    """
    K, L = uplink_dims(law)
    S, T = set(S), set(T)
    Sc = set(range(1, K + 1)) - S
    Tc = set(range(1, L + 1)) - T
    rhs = mutual_info(law, _ys(T), _yhs(T), _xs(range(1, K + 1))) - mutual_info(
        law, _xs(S), _yhs(Tc), _xs(Sc)
    )
    return point.c_sum(T) - point.r_sum(S) - rhs


def min_jd_slack(law: JointLaw, point: RateFronthaulPoint):
    """Minimum slack over all 2^K * 2^L (S, T) pairs and its argmin."""
    K, L = uplink_dims(law)
    best, arg = math.inf, (set(), set())
    for S in subsets(range(1, K + 1)):
        for T in subsets(range(1, L + 1)):
            s = jd_slack(law, point, S, T)
            if s < best:
                best, arg = s, (set(S), set(T))
    return best, arg


def in_jd_region(law: JointLaw, point: RateFronthaulPoint, tol: float = MEMBERSHIP_TOL) -> bool:
    return min_jd_slack(law, point)[0] >= -tol


def sd_corner(law: JointLaw, order: DecodeOrder) -> RateFronthaulPoint:
    """Extreme point of the successive-decoding region for decode order pi.

    Every inequality is set to equality: a user decoded at some position
    gets R_k = I(X_k; everything decoded before it), a quantization
    codeword gets C_l = I(Y_l; Yh_l) - I(Yh_l; everything before it).
    """
    K, L = order.K, order.L
    R = np.zeros(K)
    C = np.zeros(L)
    before: list[str] = []
    for lab in order.labels:
        if lab.startswith("Yh"):
            l = int(lab[2:])
            C[l - 1] = mutual_info(law, [f"Y{l}"], [lab]) - mutual_info(
                law, [lab], before
            )
        else:
            k = int(lab[1:])
            R[k - 1] = mutual_info(law, [lab], before)
        before.append(lab)
    return RateFronthaulPoint(R, C)


def corner_iterative(law: JointLaw, order: SolveOrder) -> RateFronthaulPoint:
    """Corner point solved one coordinate at a time, in the given order.

    Step k sets the joint-decoding constraint with S = I_k u {b_k},
    T = J_k (rate step) or S = I_k, T = J_k u {b_k} (fronthaul step) to
    equality, substituting the coordinates already solved.
    """
    K, L = order.K, order.L
    allx = _xs(range(1, K + 1))
    R = np.zeros(K)
    C = np.zeros(L)
    a, b = order.a, order.b
    for k, lab in enumerate(order.labels, start=1):
        I, J = order.index_sets(k)
        Ic = set(range(1, K + 1)) - I
        Jc = set(range(1, L + 1)) - J
        r_sum = float(sum(R[i - 1] for i in I))
        c_sum = float(sum(C[j - 1] for j in J))
        if a[k - 1] == 1:
            val = (
                c_sum
                - r_sum
                - mutual_info(law, _ys(J), _yhs(J), allx)
                + mutual_info(law, _xs(I | {b[k - 1]}), _yhs(Jc), _xs(Ic - {b[k - 1]}))
            )
            R[b[k - 1] - 1] = val
        else:
            val = (
                r_sum
                - c_sum
                + mutual_info(law, _ys(J | {b[k - 1]}), _yhs(J | {b[k - 1]}), allx)
                - mutual_info(law, _xs(I), _yhs(Jc - {b[k - 1]}), _xs(Ic))
            )
            C[b[k - 1] - 1] = val
    return RateFronthaulPoint(R, C)


def corner_closed(law: JointLaw, order: SolveOrder) -> RateFronthaulPoint:
    """Closed-form corner point; agrees with corner_iterative to 1e-9."""
    K, L = order.K, order.L
    R = np.zeros(K)
    C = np.zeros(L)
    a, b = order.a, order.b
    for k in range(1, K + L + 1):
        I, J = order.index_sets(k)
        Ic = set(range(1, K + 1)) - I
        Jc = set(range(1, L + 1)) - J
        bk = b[k - 1]
        if a[k - 1] == 1:
            R[bk - 1] = mutual_info(law, [f"X{bk}"], _yhs(Jc), _xs(Ic - {bk}))
        else:
            C[bk - 1] = mutual_info(law, [f"Y{bk}"], [f"Yh{bk}"]) - mutual_info(
                law, [f"Yh{bk}"], _xs(Ic) + _yhs(Jc - {bk})
            )
    return RateFronthaulPoint(R, C)


def solve_order_to_decode_order(order: SolveOrder) -> DecodeOrder:
    """Successive-decoding order achieving the corner of a solve order.

    The solve order is reversed wholesale: the coordinate solved last is
    decoded first, with R_i mapping to X_i and C_j mapping to Yh_j.
    """
    labels = []
    for lab in reversed(order.labels):
        if lab.startswith("R"):
            labels.append("X" + lab[1:])
        else:
            labels.append("Yh" + lab[1:])
    return DecodeOrder(tuple(labels), order.K, order.L)


def _row_rank(rows, pivot_tol: float = PIVOT_TOL) -> int:
    """Rank by Gaussian elimination with column pivoting at `pivot_tol`."""
    if not rows:
        return 0
    a = np.array(rows, dtype=float)
    rank = 0
    for col in range(a.shape[1]):
        if rank >= a.shape[0]:
            break
        pivot = rank + int(np.argmax(np.abs(a[rank:, col])))
        if abs(a[pivot, col]) <= pivot_tol:
            continue
        a[[rank, pivot]] = a[[pivot, rank]]
        a[rank] /= a[rank, col]
        for r in range(a.shape[0]):
            if r != rank:
                a[r] -= a[r, col] * a[rank]
        rank += 1
    return rank


@dataclass(frozen=True)
class CornerReport:
    point: RateFronthaulPoint
    min_slack: float
    in_region: bool
    active: tuple  # tuples (S, T) with |slack| <= ACTIVE_TOL
    rank: int
    is_corner: bool


def verify_corner(
    law: JointLaw,
    point: RateFronthaulPoint,
    membership_tol: float = MEMBERSHIP_TOL,
    active_tol: float = ACTIVE_TOL,
    pivot_tol: float = PIVOT_TOL,
) -> CornerReport:
    """Check corner-hood: region membership plus K+L independent tight constraints.

    The normal of constraint (S, T) carries -1 on rates in S and +1 on
    capacities in T; a true corner needs normals of full rank K+L among
    the active constraints.
    """
    K, L = uplink_dims(law)
    active = []
    normals = []
    min_slack = math.inf
    for S in subsets(range(1, K + 1)):
        for T in subsets(range(1, L + 1)):
            s = jd_slack(law, point, S, T)
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
    return CornerReport(
        point=point,
        min_slack=min_slack,
        in_region=in_region,
        active=tuple(active),
        rank=rank,
        is_corner=in_region and rank >= K + L,
    )


@dataclass(frozen=True)
class CornerEnumeration:
    corners: tuple  # (SolveOrder, RateFronthaulPoint) per permutation
    vertices: tuple  # deduplicated RateFronthaulPoints


def dedup_points(points, tol: float = DEDUP_TOL):
    """Deduplicate points in the infinity norm, keeping first occurrences."""
    out = []
    for p in points:
        v = p.as_vector()
        if not any(np.max(np.abs(v - q.as_vector())) <= tol for q in out):
            out.append(p)
    return out


def enumerate_corners(
    law: JointLaw, dedup_tol: float = DEDUP_TOL
) -> CornerEnumeration:
    """All (K+L)! corner points, one per solve order, plus the distinct vertices."""
    K, L = uplink_dims(law)
    if K + L > MAX_ENUM:
        raise ValueError(f"K+L = {K + L} exceeds enumeration guard {MAX_ENUM}")
    labels = [f"R{i}" for i in range(1, K + 1)] + [f"C{j}" for j in range(1, L + 1)]
    corners = []
    for perm in itertools.permutations(labels):
        order = SolveOrder(perm, K, L)
        corners.append((order, corner_closed(law, order)))
    vertices = dedup_points([p for _, p in corners], dedup_tol)
    return CornerEnumeration(tuple(corners), tuple(vertices))
