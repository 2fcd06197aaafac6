"""Binary Hamming evaluators.

Test channels everywhere are erasure-plus-flip: a description is produced
with probability q and, when produced, equals the source flipped with
probability alpha; the reconstruction distortion against side information of
crossover beta is then q * min(alpha, beta) + (1 - q) * beta.

The layered scheme constrains the common-layer description to be a degraded
version of the refinement description (q_c <= q_r and alpha_c >= alpha_r);
separate coding allows either degradation order of its two descriptions.
Tradeoff regions are traced by exhaustive grid sweeps; for fixed values of
the remaining parameters the best grid value of the last q axis is selected
directly (the distortion is monotone in q and the rate constraint is linear
in q, so this is exactly the grid minimum).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .core import (
    BinaryProblem,
    DistortionPoint,
    RateTriple,
    RoleAssignment,
    TradeoffCurve,
    parse_kappa,
    require_two_receivers,
    validate_problem,
)
from .infotheory import binary_convolution, binary_entropy, wz_rate_kernel
from .optimize import lower_envelope_indices

FEAS_TOL = 1e-12
# index slack when flooring a continuous q bound onto the grid, in grid units
_IDX_EPS = 1e-9


class TChoice(enum.Enum):
    """Auxiliary-variable choice for the layered channel code."""

    T_EQUALS_UC = "uc"
    T_EQUALS_UC_XOR_UR = "xor"


@dataclass(frozen=True)
class BinarySourceParams:
    """Erasure/flip parameters of the two source descriptions.

    The common description must be a degraded version of the refinement one:
    q_c <= q_r and alpha_c >= alpha_r.
    """

    q_c: float
    q_r: float
    alpha_c: float
    alpha_r: float

    def __post_init__(self):
        for name in ("q_c", "q_r"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")
        for name in ("alpha_c", "alpha_r"):
            v = getattr(self, name)
            if not 0.0 <= v <= 0.5:
                raise ValueError(f"{name} must lie in [0, 1/2], got {v}")
        if self.q_c > self.q_r:
            raise ValueError(f"degraded order requires q_c <= q_r, got {self.q_c} > {self.q_r}")
        if self.alpha_c < self.alpha_r:
            raise ValueError(
                f"degraded order requires alpha_c >= alpha_r, got {self.alpha_c} < {self.alpha_r}"
            )


@dataclass(frozen=True)
class BinaryChannelParams:
    """Bernoulli parameters of the two channel-code layers and the auxiliary choice."""

    gamma_c: float
    gamma_r: float
    t_choice: TChoice = TChoice.T_EQUALS_UC

    def __post_init__(self):
        for name in ("gamma_c", "gamma_r"):
            v = getattr(self, name)
            if not 0.0 <= v <= 0.5:
                raise ValueError(f"{name} must lie in [0, 1/2], got {v}")


def layer_distortion(q, alpha, beta):
    """Distortion q * min(alpha, beta) + (1 - q) * beta of one description layer."""
    return q * np.minimum(alpha, beta) + (1.0 - q) * beta


def binary_capacity(p: float) -> float:
    """BSC capacity 1 - H2(p) in bits per channel use."""
    return 1.0 - binary_entropy(p)


def binary_wz_distortion(beta: float, R: float, grid_resolution: int = 2001) -> float:
    """Point-to-point distortion-rate value with side information.

    Minimizes q * alpha + (1 - q) * beta over gridded alpha in [0, beta] with
    q * r(alpha, beta) <= R; for each alpha the optimal q = min(1, R / r) is
    computed analytically rather than gridded.
    """
    if not 0.0 <= beta <= 0.5:
        raise ValueError(f"beta must lie in [0, 1/2], got {beta}")
    if R < 0:
        raise ValueError(f"rate must be nonnegative, got {R}")
    if grid_resolution < 2:
        raise ValueError(f"grid_resolution must be >= 2, got {grid_resolution}")
    if beta == 0.0:
        return 0.0
    alphas = np.linspace(0.0, beta, grid_resolution)
    rates = wz_rate_kernel(alphas, beta)
    q = np.where(rates > 0.0, np.minimum(1.0, R / np.where(rates > 0.0, rates, 1.0)), 1.0)
    d = q * alphas + (1.0 - q) * beta
    return float(d.min())


def binary_trivial_converse(problem: BinaryProblem, grid_resolution: int = 2001) -> tuple:
    """Per-receiver lower bounds from the point-to-point distortion-rate value
    at rate kappa * (1 - H2(p_k))."""
    validate_problem(problem)
    kappa = float(problem.kappa)
    return tuple(
        binary_wz_distortion(b, kappa * binary_capacity(p), grid_resolution)
        for p, b in zip(problem.crossovers, problem.sideinfo_crossovers)
    )


def binary_uncoded(problem: BinaryProblem) -> DistortionPoint:
    """Uncoded transmission: D_k = min(p_k, beta_k)."""
    validate_problem(problem)
    if problem.kappa != 1:
        raise ValueError("uncoded requires bandwidth match (kappa = 1), got "
                         f"kappa = {problem.kappa}")
    D = tuple(min(p, b) for p, b in zip(problem.crossovers, problem.sideinfo_crossovers))
    point = DistortionPoint(D=D, scheme="uncoded", params={})
    assert point.within_bounds(problem)
    return point


def _grids(resolution: int):
    if resolution < 3:
        raise ValueError(f"grid too coarse: resolution must be >= 3, got {resolution}")
    qs = np.linspace(0.0, 1.0, resolution)
    alphas = np.linspace(0.0, 0.5, resolution)
    return qs, alphas


def binary_cds_points(problem: BinaryProblem, resolution: int = 41):
    """Feasible single-description (q, alpha) grid points and their distortions.

    Returns flat arrays (d1, d2, q, alpha).  A cell is kept when
    q * r(alpha, beta_k) <= kappa * (1 - H2(p_k)) for every receiver.
    """
    validate_problem(problem)
    qs, alphas = _grids(resolution)
    kappa = float(problem.kappa)
    feasible = np.ones((resolution, resolution), dtype=bool)
    for p, beta in zip(problem.crossovers, problem.sideinfo_crossovers):
        cap = kappa * binary_capacity(p)
        feasible &= np.outer(qs, wz_rate_kernel(alphas, beta)) <= cap + FEAS_TOL
    d1 = layer_distortion(qs[:, None], alphas[None, :], problem.sideinfo_crossovers[0])
    d2 = layer_distortion(qs[:, None], alphas[None, :], problem.sideinfo_crossovers[1])
    qi, ai = np.nonzero(feasible)
    return d1[qi, ai], d2[qi, ai], qs[qi], alphas[ai]


def binary_cds_region(problem: BinaryProblem, resolution: int = 41) -> TradeoffCurve:
    """Tradeoff curve of the single-description scheme (envelope applied)."""
    d1, d2, q, alpha = binary_cds_points(problem, resolution)
    keep = lower_envelope_indices(d1, d2)
    points = tuple(
        DistortionPoint(
            D=(d1[i], d2[i]), scheme="cds", params={"q": float(q[i]), "alpha": float(alpha[i])}
        )
        for i in keep
    )
    return TradeoffCurve(points=points, envelope_applied=True)


def binary_lds_source_rates(
    src: BinarySourceParams, beta_c: float, beta_r: float
) -> RateTriple:
    """Source coding rates (bits per source symbol) of the two layers.

    R_cc = q_c r(alpha_c, beta_c), R_cr = q_c r(alpha_c, beta_r),
    R_rr = q_r r(alpha_r, beta_r) - q_c r(alpha_c, beta_r), clamped at 0.
    """
    r_cc = src.q_c * wz_rate_kernel(src.alpha_c, beta_c)
    r_cr = src.q_c * wz_rate_kernel(src.alpha_c, beta_r)
    r_rr = src.q_r * wz_rate_kernel(src.alpha_r, beta_r) - r_cr
    return RateTriple(r_cc, r_cr, r_rr).clamp()


def binary_lds_channel_rates(
    p_c: float, p_r: float, ch: BinaryChannelParams, kappa=1
) -> RateTriple:
    """Channel rates (bits per source symbol, kappa applied) of the layered code.

    With T = U_c the common-layer input is pinned to the capacity-achieving
    uniform distribution (gamma_c = 1/2), giving
    kappa * (1 - H2(gamma_r * p_c), 1 - H2(gamma_r * p_r), r(p_r, gamma_r)).
    With T = U_c xor U_r the rates are
    kappa * (r(p_k, gamma_c * gamma_r) - r(gamma_c, gamma_r)) for the common
    layer and kappa * r(gamma_c, gamma_r) for the refinement layer; negative
    values are clamped to 0 with the flag set.
    """
    k = float(parse_kappa(kappa))
    if ch.t_choice is TChoice.T_EQUALS_UC:
        r_cc = k * (1.0 - binary_entropy(binary_convolution(ch.gamma_r, p_c)))
        r_cr = k * (1.0 - binary_entropy(binary_convolution(ch.gamma_r, p_r)))
        r_rr = k * wz_rate_kernel(p_r, ch.gamma_r)
    else:
        g = binary_convolution(ch.gamma_c, ch.gamma_r)
        shared = wz_rate_kernel(ch.gamma_c, ch.gamma_r)
        r_cc = k * (wz_rate_kernel(p_c, min(g, 0.5)) - shared)
        r_cr = k * (wz_rate_kernel(p_r, min(g, 0.5)) - shared)
        r_rr = k * shared
    return RateTriple(r_cc, r_cr, r_rr).clamp()


def _lds_channel_tuples(p_c, p_r, kappa, resolution):
    """Yield (t_choice, gamma_c, gamma_r, clamped RateTriple) over the gamma grids."""
    _, gammas = _grids(resolution)
    for g_r in gammas:
        ch = BinaryChannelParams(0.5, float(g_r), TChoice.T_EQUALS_UC)
        yield ch, binary_lds_channel_rates(p_c, p_r, ch, kappa)
    for g_c in gammas:
        for g_r in gammas:
            ch = BinaryChannelParams(float(g_c), float(g_r), TChoice.T_EQUALS_UC_XOR_UR)
            yield ch, binary_lds_channel_rates(p_c, p_r, ch, kappa)


def _best_refinement_points(rates, qs, alphas, r_c, r_r, dc_tab, dr_tab):
    """Per common-layer cell, the best refinement cell for one channel tuple.

    rates is the clamped channel triple.  Returns index arrays
    (qc, ac, qr, ar) of the kept cells plus their (d_c, d_r); the refinement
    q is the largest grid value satisfying the rate budget, which attains the
    grid minimum of D_r for each alpha_r.
    """
    res = qs.size
    cl_ok = (np.outer(qs, r_c) <= rates.R_cc + FEAS_TOL) & (
        np.outer(qs, r_r) <= rates.R_cr + FEAS_TOL
    )
    if not cl_ok.any():
        return None
    budget = rates.R_rr + np.outer(qs, r_r)  # (qc, ac)
    with np.errstate(divide="ignore", invalid="ignore"):
        qmax = budget[:, :, None] / r_r[None, None, :]
    qmax = np.where(r_r[None, None, :] <= 0.0, np.inf, qmax)
    qmax = np.minimum(qmax, 1.0)
    qr_idx = (qmax * (res - 1) + _IDX_EPS).astype(np.int64)
    qc_idx = np.arange(res)[:, None, None]
    valid = (
        (qr_idx >= qc_idx)
        & (alphas[None, None, :] <= alphas[None, :, None] + FEAS_TOL)
        & cl_ok[:, :, None]
    )
    dr_cand = np.where(valid, dr_tab[qr_idx, np.arange(res)[None, None, :]], np.inf)
    ar_best = np.argmin(dr_cand, axis=2)
    dr_min = np.take_along_axis(dr_cand, ar_best[:, :, None], axis=2)[:, :, 0]
    ok = np.isfinite(dr_min)
    if not ok.any():
        return None
    qc, ac = np.nonzero(ok)
    ar = ar_best[qc, ac]
    qr = qr_idx[qc, ac, ar]
    return qc, ac, qr, ar, dc_tab[qc, ac], dr_min[qc, ac]


def _binary_lds_vertices(problem, assign, resolution):
    """Envelope vertices (receiver coordinates) contributed by one role assignment."""
    qs, alphas = _grids(resolution)
    beta_c = problem.sideinfo_crossovers[assign.c]
    beta_r = problem.sideinfo_crossovers[assign.r]
    p_c = problem.crossovers[assign.c]
    p_r = problem.crossovers[assign.r]
    r_c = wz_rate_kernel(alphas, beta_c)
    r_r = wz_rate_kernel(alphas, beta_r)
    dc_tab = layer_distortion(qs[:, None], alphas[None, :], beta_c)
    dr_tab = layer_distortion(qs[:, None], alphas[None, :], beta_r)
    corner = [None, None]
    corner[assign.c] = beta_c
    corner[assign.r] = beta_r
    vertices = [
        # zero-rate corner: the all-q=0 tuple is feasible for every channel tuple
        DistortionPoint(
            D=tuple(corner),
            scheme="lds",
            params={
                "assign": (assign.common_receiver, assign.refinement_receiver),
                "q_c": 0.0,
                "alpha_c": 0.0,
                "q_r": 0.0,
                "alpha_r": 0.0,
            },
        )
    ]
    for ch, rates in _lds_channel_tuples(p_c, p_r, problem.kappa, resolution):
        if rates.clamped:
            # a materially negative common-layer bound admits no nonnegative
            # source rate, so the whole channel tuple is infeasible
            continue
        got = _best_refinement_points(rates, qs, alphas, r_c, r_r, dc_tab, dr_tab)
        if got is None:
            continue
        qc, ac, qr, ar, d_c, d_r = got
        d = [None, None]
        d[assign.c] = d_c
        d[assign.r] = d_r
        keep = lower_envelope_indices(d[0], d[1])
        for i in keep:
            params = {
                "assign": (assign.common_receiver, assign.refinement_receiver),
                "t": ch.t_choice.value,
                "gamma_c": ch.gamma_c,
                "gamma_r": ch.gamma_r,
                "q_c": float(qs[qc[i]]),
                "alpha_c": float(alphas[ac[i]]),
                "q_r": float(qs[qr[i]]),
                "alpha_r": float(alphas[ar[i]]),
                "rate_clamped": rates.clamped,
            }
            point = DistortionPoint(D=(d[0][i], d[1][i]), scheme="lds", params=params)
            assert point.within_bounds(problem)
            vertices.append(point)
    return vertices


def binary_lds_region(problem: BinaryProblem, resolution: int = 41) -> TradeoffCurve:
    """Tradeoff curve of the layered scheme (envelope applied).

    Both role assignments and both auxiliary-variable choices are swept and
    merged; a parameter tuple is kept when its source rate triple is
    componentwise at most its channel rate triple.
    """
    validate_problem(problem)
    require_two_receivers(problem)
    vertices = []
    for assign in (RoleAssignment(1, 2), RoleAssignment(2, 1)):
        vertices.extend(_binary_lds_vertices(problem, assign, resolution))
    if not vertices:
        raise ValueError("layered sweep produced no feasible points")
    x = np.array([v.D[0] for v in vertices])
    y = np.array([v.D[1] for v in vertices])
    keep = lower_envelope_indices(x, y)
    return TradeoffCurve(points=tuple(vertices[i] for i in keep), envelope_applied=True)


def binary_lds_cds_pinned_points(problem: BinaryProblem, resolution: int = 41):
    """Layered sweep restricted to the single-description sub-grid.

    Pins q_c = q_r, alpha_c = alpha_r, gamma_r = 0 with T = U_c under the
    identity role assignment, and emits every feasible cell (no inner
    minimization), for comparison against the single-description sweep.
    Returns flat arrays (d1, d2, q, alpha).
    """
    validate_problem(problem)
    require_two_receivers(problem)
    qs, alphas = _grids(resolution)
    beta_1, beta_2 = problem.sideinfo_crossovers
    ch = BinaryChannelParams(0.5, 0.0, TChoice.T_EQUALS_UC)
    rates = binary_lds_channel_rates(problem.crossovers[0], problem.crossovers[1], ch,
                                     problem.kappa)
    r_1 = wz_rate_kernel(alphas, beta_1)
    r_2 = wz_rate_kernel(alphas, beta_2)
    src_cc = np.outer(qs, r_1)
    src_cr = np.outer(qs, r_2)
    src_rr = src_cr - src_cr  # refinement layer coincides with the common layer
    feasible = (
        (src_cc <= rates.R_cc + FEAS_TOL)
        & (src_cr <= rates.R_cr + FEAS_TOL)
        & (src_rr <= rates.R_rr + FEAS_TOL)
    )
    d1 = layer_distortion(qs[:, None], alphas[None, :], beta_1)
    d2 = layer_distortion(qs[:, None], alphas[None, :], beta_2)
    qi, ai = np.nonzero(feasible)
    return d1[qi, ai], d2[qi, ai], qs[qi], alphas[ai]


def separate_coding_labels(problem: BinaryProblem) -> tuple:
    """0-based (bad, good) receiver indices: the bad receiver has the larger
    channel crossover; equal crossovers label the receiver with smaller
    side-information crossover as good."""
    validate_problem(problem)
    require_two_receivers(problem)
    p1, p2 = problem.crossovers
    if p1 > p2:
        return 0, 1
    if p2 > p1:
        return 1, 0
    b1, b2 = problem.sideinfo_crossovers
    return (0, 1) if b2 <= b1 else (1, 0)


def binary_separate_region(problem: BinaryProblem, resolution: int = 41) -> TradeoffCurve:
    """Achievable tradeoff of separate source and channel coding.

    Sweeps the channel power-split parameter theta and the two description
    test channels.  The bad receiver's description rate must fit its channel
    rate kappa * (1 - H2(theta * p_b)); the good receiver's cumulative source
    rate must fit the cumulative channel rate
    kappa * (1 - H2(theta * p_b)) + kappa * (H2(theta * p_g) - H2(p_g)),
    with the cumulative source rate picked by the side-information order.
    Either degradation order of the two descriptions is allowed.
    """
    validate_problem(problem)
    require_two_receivers(problem)
    b, g = separate_coding_labels(problem)
    p_b, p_g = problem.crossovers[b], problem.crossovers[g]
    beta_b, beta_g = problem.sideinfo_crossovers[b], problem.sideinfo_crossovers[g]
    kappa = float(problem.kappa)
    qs, alphas = _grids(resolution)
    thetas = np.linspace(0.0, 0.5, resolution)
    good_first = beta_g <= beta_b  # side information order: the good receiver's is better
    r_bb = wz_rate_kernel(alphas, beta_b)  # r(alpha, beta_b) on the alpha grid
    r_bg = wz_rate_kernel(alphas, beta_g)
    d_b_tab = layer_distortion(qs[:, None], alphas[None, :], beta_b)
    d_g_tab = layer_distortion(qs[:, None], alphas[None, :], beta_g)
    # degradation-order mask over (q_b, alpha_b, alpha_g, q_g), q_b handled per row
    vertices = []
    for theta in thetas:
        cap_b = kappa * (1.0 - binary_entropy(binary_convolution(theta, p_b)))
        cap_tot = cap_b + kappa * (
            binary_entropy(binary_convolution(theta, p_g)) - binary_entropy(p_g)
        )
        pts_x, pts_y, pts_params = [], [], []
        for qb_i, q_b in enumerate(qs):
            S = q_b * r_bb  # (alpha_b,)
            ok_b = S <= cap_b + FEAS_TOL
            if not ok_b.any():
                continue
            if good_first:
                E = q_b * r_bg
                lhs = S[:, None, None] + np.maximum(
                    0.0, qs[None, None, :] * r_bg[None, :, None] - E[:, None, None]
                )
            else:
                qr_g = qs[None, None, :] * r_bg[None, :, None]
                lhs = qr_g + np.maximum(0.0, S[:, None, None] - qs[None, None, :] * r_bb[None, :, None])
            cond = lhs <= cap_tot + FEAS_TOL  # (alpha_b, alpha_g, q_g)
            order = (
                (q_b <= qs[None, None, :] + FEAS_TOL)
                & (alphas[:, None, None] >= alphas[None, :, None] - FEAS_TOL)
            ) | (
                (qs[None, None, :] <= q_b + FEAS_TOL)
                & (alphas[None, :, None] >= alphas[:, None, None] - FEAS_TOL)
            )
            valid = cond & order & ok_b[:, None, None]
            if not valid.any():
                continue
            d_g_cand = np.where(valid, d_g_tab.T[None, :, :], np.inf)  # (ab, ag, qg)
            flat = d_g_cand.reshape(valid.shape[0], -1)
            best = np.argmin(flat, axis=1)
            d_g_min = flat[np.arange(flat.shape[0]), best]
            for ab_i in np.nonzero(np.isfinite(d_g_min))[0]:
                ag_i, qg_i = divmod(int(best[ab_i]), len(qs))
                pts_x.append(d_b_tab[qb_i, ab_i])
                pts_y.append(d_g_min[ab_i])
                pts_params.append((theta, q_b, alphas[ab_i], qs[qg_i], alphas[ag_i]))
        if not pts_x:
            continue
        # receiver coordinates: D1 on the x axis
        xb = np.asarray(pts_x) if b == 0 else np.asarray(pts_y)
        yb = np.asarray(pts_y) if b == 0 else np.asarray(pts_x)
        keep = lower_envelope_indices(xb, yb)
        for i in keep:
            theta_i, qb_v, ab_v, qg_v, ag_v = pts_params[i]
            point = DistortionPoint(
                D=(xb[i], yb[i]),
                scheme="separate",
                params={
                    "theta": float(theta_i),
                    "q_b": float(qb_v),
                    "alpha_b": float(ab_v),
                    "q_g": float(qg_v),
                    "alpha_g": float(ag_v),
                },
            )
            assert point.within_bounds(problem)
            vertices.append(point)
    if not vertices:
        raise ValueError("separate-coding sweep produced no feasible points")
    x = np.array([v.D[0] for v in vertices])
    y = np.array([v.D[1] for v in vertices])
    keep = lower_envelope_indices(x, y)
    return TradeoffCurve(points=tuple(vertices[i] for i in keep), envelope_applied=True)
