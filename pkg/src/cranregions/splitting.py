"""Rate splitting and quantization splitting for the uplink.

Each channel input except the first is split into two independent binary
virtual inputs merged by max(); each quantization codeword is split into
two virtual descriptions, also merged by max().  A parameter vector
alpha in [0,1]^{K+L-1} picks one split parameter per variable and a
decoding order over the 2(K+L)-1 virtual indices, turning the original
problem into a (2K-1)-user, 2L-relay virtual network whose successive
decoding rates assemble to a point on the dominant face of the original
region.  That assembly is the map psi; its numerical inverse recovers a
parameter vector for any face point.

Binary alphabets only: the constructions are the explicit binary ones,
whose invariants (pushforward laws, Markov chains, endpoint
degeneracies) are exactly checkable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.stats import qmc

from .face import on_dominant_face
from .prob import JointLaw, LawError, build_uplink_joint, mutual_info, UplinkSpec
from .uplink import RateFronthaulPoint

MERGE_TOL = 1e-12
TELESCOPE_TOL = 1e-9


@dataclass(frozen=True)
class RateSplit:
    """Binary split of a Bern(alpha_x) input into independent U, V with f = max."""

    alpha_x: float
    epsilon: float
    p_u: np.ndarray  # pmf of U over {0, 1}
    p_v: np.ndarray  # pmf of V over {0, 1}
    f: np.ndarray  # merge table, f[u, v] = max(u, v)


def make_rate_split(alpha_x: float, epsilon: float) -> RateSplit:
    """Binary rate split: U ~ Bern(a*e), V ~ Bern(a(1-e)/(1-a*e)), f = max.

    The pushforward of p_U p_V through max is Bern(alpha_x) for every
    epsilon; epsilon = 0 makes the merge independent of U, epsilon = 1
    makes it a function of U alone.
    """
    if not (0.0 <= alpha_x <= 1.0 and 0.0 <= epsilon <= 1.0):
        raise LawError(f"alpha_x={alpha_x}, epsilon={epsilon} outside [0,1]")
    denom = 1.0 - alpha_x * epsilon
    if denom <= 0.0:
        raise LawError(
            f"degenerate rate split: alpha_x*epsilon = {alpha_x * epsilon} leaves "
            "a zero denominator"
        )
    pu1 = alpha_x * epsilon
    pv1 = alpha_x * (1.0 - epsilon) / denom
    f = np.maximum.outer(np.arange(2), np.arange(2))
    return RateSplit(
        alpha_x=alpha_x,
        epsilon=epsilon,
        p_u=np.array([1.0 - pu1, pu1]),
        p_v=np.array([1.0 - pv1, pv1]),
        f=f,
    )


@dataclass(frozen=True)
class QuantSplit:
    """Binary split of a quantizer output into descriptions (U, V), g = max.

    Construction: with (Y, Yh) drawn from the source law and an
    independent latent T ~ Bern(epsilon), set (U, V) = (0, Yh) when
    T = 0 and (Yh, 0) when T = 1.  Then Y - Yh - (U, V) is Markov and
    max(U, V) = Yh exactly.
    """

    epsilon: float
    p_uv_given_yhat: np.ndarray  # shape (2, 2, 2): [yhat, u, v]
    p_uv_given_y: np.ndarray  # shape (|Y|, 2, 2)
    g: np.ndarray


def make_quant_split(p_y, test_channel, epsilon: float) -> QuantSplit:
    p_y = np.asarray(p_y, dtype=float)
    w = np.asarray(test_channel, dtype=float)
    if p_y.shape != (2,) or w.shape != (2, 2):
        raise LawError("quantization split requires binary source and quantizer alphabets")
    if not 0.0 <= epsilon <= 1.0:
        raise LawError(f"epsilon={epsilon} outside [0,1]")
    p_uv_yh = np.zeros((2, 2, 2))
    for yh in range(2):
        p_uv_yh[yh, 0, yh] += 1.0 - epsilon  # T = 0: (U, V) = (0, Yh)
        p_uv_yh[yh, yh, 0] += epsilon  # T = 1: (U, V) = (Yh, 0)
    p_uv_y = np.einsum("yh,huv->yuv", w, p_uv_yh)
    g = np.maximum.outer(np.arange(2), np.arange(2))
    return QuantSplit(
        epsilon=epsilon, p_uv_given_yhat=p_uv_yh, p_uv_given_y=p_uv_y, g=g
    )


def generalized_order(n: int):
    """Recursively interleaved label sequence of length 2^n - 1.

    Labels are (row, column) pairs; the sequence for n interleaves row
    n's columns (odd positions) with the sequence for n-1 (even positions).
    """
    if not 1 <= n <= 8:
        raise ValueError(f"generalized order supports 1 <= n <= 8, got {n}")
    order = [(1, 1)]
    for i in range(2, n + 1):
        row = [(i, c) for c in range(1, 2 ** (i - 1) + 1)]
        merged = []
        for k in range(len(row) + len(order)):
            merged.append(row[k // 2] if k % 2 == 0 else order[k // 2])
        order = merged
    return tuple(order)


def alpha_to_indices(alpha_i: float, i: int) -> tuple[int, float]:
    """Active subinterval index j_i and split parameter epsilon_i for row i.

    The interval [0, m_i] with m_i = 2^{i-1} - 1 is cut into m_i unit
    subintervals; j_i is the subinterval containing alpha_i * m_i and
    epsilon_i its normalized position inside it.
    """
    if i < 2:
        raise ValueError("row 1 is never split; alpha indices start at 2")
    if not 0.0 <= alpha_i <= 1.0:
        raise ValueError(f"alpha={alpha_i} outside [0,1]")
    m = 2 ** (i - 1) - 1
    if alpha_i == 1.0:
        j = m
    else:
        j = int(math.floor(alpha_i * m)) + 1
    eps = alpha_i * m - j + 1
    return j, float(eps)


@dataclass(frozen=True)
class SplitConfig:
    """Derived split parameters and virtual decoding order for one alpha."""

    K: int
    L: int
    alpha: tuple[float, ...]
    j: dict  # row i (2..K+L) -> active subinterval index
    epsilon: dict  # row i (2..K+L) -> split parameter
    order: tuple[str, ...]  # permutation of P = {1, 2a, 2b, .., 1c, 1d, ..}


def _virtual_labels(K: int, L: int):
    labels = ["1"]
    for i in range(2, K + 1):
        labels += [f"{i}a", f"{i}b"]
    for l in range(1, L + 1):
        labels += [f"{l}c", f"{l}d"]
    return labels


def decode_order_from_alpha(K: int, L: int, alpha) -> SplitConfig:
    """Decoding order over the virtual index set from the parameter vector.

    Row 1 of the generalized order is the un-split first user; rows
    2..K are the split users, rows K+1..K+L the split relays.  In each
    split row the two active elements are (i, j_i) and (i, j_i + 1); the
    one appearing earlier in the generalized order becomes the "a"/"c"
    half, the later one the "b"/"d" half, which keeps the order
    well-formed (coarse half decoded first).
    """
    alpha = tuple(float(a) for a in alpha)
    if len(alpha) != K + L - 1:
        raise ValueError(f"alpha must have length K+L-1 = {K + L - 1}, got {len(alpha)}")
    js, eps = {}, {}
    for idx, i in enumerate(range(2, K + L + 1)):
        js[i], eps[i] = alpha_to_indices(alpha[idx], i)
    active = {(1, 1)}
    for i in range(2, K + L + 1):
        active.add((i, js[i]))
        active.add((i, js[i] + 1))
    order = []
    seen_per_row = {i: 0 for i in range(1, K + L + 1)}
    for row, col in generalized_order(K + L):
        if (row, col) not in active:
            continue
        occurrence = seen_per_row[row]
        seen_per_row[row] += 1
        if row == 1:
            order.append("1")
        elif row <= K:
            order.append(f"{row}{'a' if occurrence == 0 else 'b'}")
        else:
            order.append(f"{row - K}{'c' if occurrence == 0 else 'd'}")
    assert len(order) == 2 * (K + L) - 1
    return SplitConfig(K=K, L=L, alpha=alpha, j=js, epsilon=eps, order=tuple(order))


@dataclass(frozen=True)
class VirtualCran:
    """Joint law of the (2K-1)-user, 2L-relay virtual network.

    Variables: X1, X2a, X2b, .., XKa, XKb, Y1..YL, Yh1c, Yh1d, ..,
    YhLc, YhLd, all binary.  Merging the virtual pairs with max()
    recovers the original uplink joint entrywise.
    """

    K: int
    L: int
    joint: JointLaw
    config: SplitConfig

    def merged_joint(self) -> np.ndarray:
        """Pushforward through the merge maps, axes (X_1..X_K, Y, Yh_1..Yh_L)."""
        K, L = self.K, self.L
        vshape = self.joint.probs.shape
        grids = np.indices(vshape)
        name_to_grid = dict(zip(self.joint.names, grids))
        out_idx = [name_to_grid["X1"]]
        for i in range(2, K + 1):
            out_idx.append(np.maximum(name_to_grid[f"X{i}a"], name_to_grid[f"X{i}b"]))
        for l in range(1, L + 1):
            out_idx.append(name_to_grid[f"Y{l}"])
        for l in range(1, L + 1):
            out_idx.append(np.maximum(name_to_grid[f"Yh{l}c"], name_to_grid[f"Yh{l}d"]))
        out = np.zeros((2,) * (K + 2 * L))
        np.add.at(out, tuple(out_idx), self.joint.probs)
        return out


def build_virtual_cran(spec: UplinkSpec, config: SplitConfig) -> VirtualCran:
    """Assemble the virtual joint from the per-variable splits.

    The channel only sees the merged inputs; each relay's two virtual
    descriptions are generated jointly from its output through the
    quantization-split conditional.
    """
    K, L = spec.K, spec.L
    if config.K != K or config.L != L:
        raise ValueError("split config dimensions do not match spec")
    if any(len(p) != 2 for p in spec.input_pmfs) or any(
        t.shape != (2, 2) for t in spec.test_channels
    ):
        raise LawError("virtual C-RAN construction requires binary alphabets")

    orig = build_uplink_joint(spec)
    n_in = 2 * K - 1
    n = n_in + L + 2 * L

    in_names = ["X1"]
    in_pmfs = [spec.input_pmfs[0]]
    for i in range(2, K + 1):
        rs = make_rate_split(float(spec.input_pmfs[i - 1][1]), config.epsilon[i])
        in_names += [f"X{i}a", f"X{i}b"]
        in_pmfs += [rs.p_u, rs.p_v]

    px = np.ones(())
    for p in in_pmfs:
        px = np.multiply.outer(px, p)

    # Channel evaluated at merged inputs, broadcast over virtual input axes.
    grids = np.indices((2,) * n_in)
    merged = [grids[0]]
    for i in range(2, K + 1):
        merged.append(np.maximum(grids[2 * i - 3], grids[2 * i - 2]))
    vchan = spec.channel[tuple(merged)]  # shape (2,)*n_in + y_sizes

    joint = px.reshape((2,) * n_in + (1,) * L) * vchan
    full = np.broadcast_to(
        joint.reshape(joint.shape + (1,) * (2 * L)), (2,) * n
    ).copy()
    for l in range(1, L + 1):
        p_yl = orig.marginal([f"Y{l}"])
        qs = make_quant_split(p_yl, spec.test_channels[l - 1], config.epsilon[K + l])
        shape = [1] * n
        shape[n_in + l - 1] = 2
        shape[n_in + L + 2 * (l - 1)] = 2
        shape[n_in + L + 2 * (l - 1) + 1] = 2
        full *= qs.p_uv_given_y.reshape(shape)

    names = (
        tuple(in_names)
        + tuple(f"Y{l}" for l in range(1, L + 1))
        + tuple(
            name for l in range(1, L + 1) for name in (f"Yh{l}c", f"Yh{l}d")
        )
    )
    vc = VirtualCran(K=K, L=L, joint=JointLaw(names, full), config=config)
    if np.max(np.abs(vc.merged_joint() - orig.probs)) > MERGE_TOL:
        raise LawError("virtual joint does not merge back to the original joint")
    return vc


def _input_var(label: str) -> str:
    return "X1" if label == "1" else f"X{label}"


def _quant_var(label: str) -> str:
    return f"Yh{label}"


def beta_rates(vc: VirtualCran, config: SplitConfig):
    """Per-index successive rates and the assembled rate-fronthaul point.

    The k-th decoded virtual input gets beta = I(X_k; decoded-so-far);
    the k-th decoded virtual description of relay l gets
    beta = I(Y_l; Yh_k | decoded-so-far).  User and relay rates are the
    sums of their two halves.
    """
    law = vc.joint
    K, L = vc.K, vc.L
    betas = {}
    decoded: list[str] = []
    for lab in config.order:
        if lab == "1" or lab[-1] in "ab":
            var = _input_var(lab)
            betas[lab] = mutual_info(law, [var], decoded)
        else:
            l = int(lab[:-1])
            var = _quant_var(lab)
            betas[lab] = mutual_info(law, [f"Y{l}"], [var], decoded)
        decoded.append(var)
    R = np.zeros(K)
    C = np.zeros(L)
    R[0] = betas["1"]
    for i in range(2, K + 1):
        R[i - 1] = betas[f"{i}a"] + betas[f"{i}b"]
    for l in range(1, L + 1):
        C[l - 1] = betas[f"{l}c"] + betas[f"{l}d"]
    return betas, RateFronthaulPoint(R, C)


def psi(spec: UplinkSpec, alpha) -> RateFronthaulPoint:
    """Map a parameter vector to a dominant-face point via splitting."""
    return psi_detail(spec, alpha)[2]


def psi_detail(spec: UplinkSpec, alpha):
    """(SplitConfig, per-index rates, point) for one parameter vector."""
    config = decode_order_from_alpha(spec.K, spec.L, alpha)
    vc = build_virtual_cran(spec, config)
    betas, point = beta_rates(vc, config)
    return config, betas, point


class NotOnDominantFaceError(ValueError):
    """Raised when an inversion target is not on the dominant face."""


@dataclass(frozen=True)
class InversionResult:
    alpha: tuple[float, ...]
    residual: float
    n_evals: int
    converged: bool


def invert_psi(
    spec: UplinkSpec,
    target: RateFronthaulPoint,
    tol: float = 1e-4,
    max_iters: int = 5000,
    restarts: int = 20,
    seed: int = 0,
) -> InversionResult:
    """Numerically invert psi: find alpha with psi(alpha) near `target`.

    psi is continuous but only piecewise smooth (the active subinterval
    index jumps), so the search is derivative free: the hypercube
    vertices and a Sobol batch seed multistart Nelder-Mead on the
    infinity-norm residual within a total budget of `max_iters` psi
    evaluations.  Never returns a silent wrong answer: non-convergence
    is reported in the result.
    """
    law = build_uplink_joint(spec)
    if not on_dominant_face(law, target, tol=1e-8):
        raise NotOnDominantFaceError(
            f"target {target.as_vector().tolist()} is not on the dominant face"
        )
    d = spec.K + spec.L - 1
    tvec = target.as_vector()
    count = 0

    def objective(alpha):
        nonlocal count
        count += 1
        a = np.clip(alpha, 0.0, 1.0)
        return float(np.max(np.abs(psi(spec, a).as_vector() - tvec)))

    best_alpha, best_res = None, math.inf

    def consider(alpha, res):
        nonlocal best_alpha, best_res
        if res < best_res:
            best_alpha, best_res = tuple(np.clip(alpha, 0.0, 1.0)), res

    starts = []
    if 2**d <= 64:
        starts += [np.array(v, dtype=float) for v in np.ndindex(*(2,) * d)]
    sob = qmc.Sobol(d, scramble=True, seed=seed)
    n_sobol = 1 << (max(restarts, 1) - 1).bit_length()  # power of two for balance
    starts += list(sob.random(n_sobol)[: max(restarts, 1)])

    scored = []
    for s in starts:
        if count >= max_iters:
            break
        r = objective(s)
        consider(s, r)
        scored.append((r, s))
        if best_res <= tol:
            return InversionResult(best_alpha, best_res, count, True)
    scored.sort(key=lambda t: t[0])

    for _, s in scored[:restarts]:
        if count >= max_iters or best_res <= tol:
            break
        budget = max_iters - count
        # starting on the hypercube boundary degenerates the initial simplex
        s = np.clip(s, 0.02, 0.98)
        res = minimize(
            objective,
            s,
            method="Nelder-Mead",
            bounds=[(0.0, 1.0)] * d,
            options={
                "maxfev": min(budget, max(200, max_iters // max(restarts, 1))),
                "fatol": tol / 10,
                "xatol": 1e-7,
            },
        )
        consider(res.x, float(res.fun))
    return InversionResult(best_alpha, best_res, count, best_res <= tol)
