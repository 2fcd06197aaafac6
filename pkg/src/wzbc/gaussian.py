"""Quadratic Gaussian evaluators.

Notation follows the unit-variance convention of the problem types: P is the
channel input power, W_k the channel noise variance at receiver k, and N_k the
MMSE of estimating the source from side information k.  All rates are in bits;
channel rates are per channel use unless stated otherwise.

The layered scheme splits the power as nu*P for the common layer and
(1-nu)*P for the refinement layer, and precodes the common layer against the
refinement codeword with combining parameter gamma.  Negative common-layer
rate expressions are clamped to 0 and flagged; sweeps skip flagged points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    DistortionPoint,
    GaussianProblem,
    RateTriple,
    RoleAssignment,
    require_two_receivers,
    validate_problem,
)

RANGE_GUARD = 1e-12  # floating-point slack on closed-interval domain checks


def gaussian_capacity(P: float, W: float) -> float:
    """Point-to-point AWGN capacity (1/2) log2(1 + P/W) in bits per channel use."""
    if P < 0:
        raise ValueError(f"power must be nonnegative, got {P}")
    if W <= 0:
        raise ValueError(f"noise variance must be positive, got {W}")
    return 0.5 * math.log2(1.0 + P / W)


def gaussian_wz_distortion(N: float, R: float) -> float:
    """Distortion-rate value N * 2^(-2R) for side information of quality N."""
    if not 0 < N <= 1:
        raise ValueError(f"N must lie in (0, 1], got {N}")
    if R < 0:
        raise ValueError(f"rate must be nonnegative, got {R}")
    return N * 2.0 ** (-2.0 * R)


def gaussian_trivial_converse(problem: GaussianProblem) -> tuple:
    """Per-receiver lower bounds D_k >= N_k / (1 + P/W_k)^kappa."""
    validate_problem(problem)
    kappa = float(problem.kappa)
    return tuple(
        n / (1.0 + problem.power / w) ** kappa
        for w, n in zip(problem.noise_vars, problem.sideinfo_vars)
    )


def gaussian_uncoded(problem: GaussianProblem) -> DistortionPoint:
    """Distortion of transmitting the scaled source directly: N_k W_k / (W_k + N_k P)."""
    validate_problem(problem)
    if problem.kappa != 1:
        raise ValueError("uncoded requires bandwidth match (kappa = 1), got "
                         f"kappa = {problem.kappa}")
    P = problem.power
    D = tuple(
        n * w / (w + n * P) for w, n in zip(problem.noise_vars, problem.sideinfo_vars)
    )
    point = DistortionPoint(D=D, scheme="uncoded", params={})
    assert point.within_bounds(problem)
    return point


def _quality(P: float, W: float, N: float, kappa: float) -> float:
    """Combined channel and side information quality ((1 + P/W)^kappa - 1) / N."""
    return ((1.0 + P / W) ** kappa - 1.0) / N


def gaussian_cds(problem: GaussianProblem) -> DistortionPoint:
    """Single-description point: 1/D_k = 1/N_k + min_k' quality_k'."""
    validate_problem(problem)
    P = problem.power
    kappa = float(problem.kappa)
    best = min(_quality(P, w, n, kappa)
               for w, n in zip(problem.noise_vars, problem.sideinfo_vars))
    D = tuple(1.0 / (1.0 / n + best) for n in problem.sideinfo_vars)
    point = DistortionPoint(D=D, scheme="cds", params={})
    assert point.within_bounds(problem)
    return point


def choose_refinement_receiver(problem: GaussianProblem) -> RoleAssignment:
    """Send the refinement layer to the receiver with better combined quality.

    The assignment satisfies quality_c <= quality_r; for kappa = 1 this is the
    product rule W_c N_c >= W_r N_r.  Ties assign receiver 1 as c.
    """
    validate_problem(problem)
    require_two_receivers(problem)
    P = problem.power
    kappa = float(problem.kappa)
    q1 = _quality(P, problem.noise_vars[0], problem.sideinfo_vars[0], kappa)
    q2 = _quality(P, problem.noise_vars[1], problem.sideinfo_vars[1], kappa)
    if q1 <= q2:
        return RoleAssignment(common_receiver=1, refinement_receiver=2)
    return RoleAssignment(common_receiver=2, refinement_receiver=1)


def _check_assignment(problem: GaussianProblem, assign: RoleAssignment) -> None:
    P = problem.power
    kappa = float(problem.kappa)
    qc = _quality(P, problem.noise_vars[assign.c], problem.sideinfo_vars[assign.c], kappa)
    qr = _quality(P, problem.noise_vars[assign.r], problem.sideinfo_vars[assign.r], kappa)
    if qc > qr + RANGE_GUARD:
        raise ValueError(
            "role assignment violates the refinement-receiver rule: "
            f"quality_c = {qc} > quality_r = {qr}"
        )


@dataclass(frozen=True)
class GaussianLdsParams:
    """Power fraction nu for the common layer and precoding parameter gamma."""

    nu: float
    gamma: float

    def __post_init__(self):
        if not 0.0 <= self.nu <= 1.0:
            raise ValueError(f"nu must lie in [0, 1], got {self.nu}")
        if self.nu == 0.0 and self.gamma != 0.0:
            raise ValueError(
                f"nu = 0 requires gamma = 0 (limit convention), got gamma = {self.gamma}"
            )


def gaussian_lds_channel_rates(
    problem: GaussianProblem, assign: RoleAssignment, params: GaussianLdsParams
) -> RateTriple:
    """Effective channel rates of the layered scheme, per channel use.

    R_cc = (1/2) log2 [(1 + P/W_c) / (1 + nubar P (gamma^2/(nu P) + (1-gamma)^2/W_c))],
    R_cr the same with W_r, and R_rr = (1/2) log2 of that denominator with W_r.
    Negative values are clamped to 0 with the clamped flag set.
    """
    validate_problem(problem)
    require_two_receivers(problem)
    P = problem.power
    W_c = problem.noise_vars[assign.c]
    W_r = problem.noise_vars[assign.r]
    nu, gamma = params.nu, params.gamma
    nubar = 1.0 - nu
    if nu == 0.0:
        dpc = 0.0  # gamma is pinned to 0, the gamma^2/(nu P) term vanishes in the limit
    else:
        dpc = gamma * gamma / (nu * P)
    denom_c = 1.0 + nubar * P * (dpc + (1.0 - gamma) ** 2 / W_c)
    denom_r = 1.0 + nubar * P * (dpc + (1.0 - gamma) ** 2 / W_r)
    r_cc = 0.5 * math.log2((1.0 + P / W_c) / denom_c)
    r_cr = 0.5 * math.log2((1.0 + P / W_r) / denom_r)
    r_rr = 0.5 * math.log2(denom_r)
    return RateTriple(r_cc, r_cr, r_rr).clamp()


def gaussian_lds_distortions(
    problem: GaussianProblem, assign: RoleAssignment, rates: RateTriple
) -> DistortionPoint:
    """Best distortion pair for a given channel-rate triple.

    phi = min{(2^(2 kappa R_cc) - 1)/N_c, (2^(2 kappa R_cr) - 1)/N_r},
    D_c = N_c / (1 + N_c phi), D_r = N_r / (1 + N_r phi) * 2^(-2 kappa R_rr).
    """
    validate_problem(problem)
    require_two_receivers(problem)
    if min(rates.as_tuple()) < 0:
        raise ValueError(f"rates must be nonnegative, got {rates.as_tuple()}")
    kappa = float(problem.kappa)
    N_c = problem.sideinfo_vars[assign.c]
    N_r = problem.sideinfo_vars[assign.r]
    phi = min(
        (2.0 ** (2.0 * kappa * rates.R_cc) - 1.0) / N_c,
        (2.0 ** (2.0 * kappa * rates.R_cr) - 1.0) / N_r,
    )
    d_c = N_c / (1.0 + N_c * phi)
    d_r = N_r / (1.0 + N_r * phi) * 2.0 ** (-2.0 * kappa * rates.R_rr)
    D = [0.0, 0.0]
    D[assign.c] = d_c
    D[assign.r] = d_r
    point = DistortionPoint(
        D=tuple(D),
        scheme="lds",
        params={
            "assign": (assign.common_receiver, assign.refinement_receiver),
            "rates": rates.as_tuple(),
            "rate_clamped": rates.clamped,
        },
    )
    assert point.within_bounds(problem)
    return point


def gaussian_lds_dc_range(problem: GaussianProblem, assign: RoleAssignment) -> tuple:
    """Domain [D_c_min, D_c_max] of the bandwidth-matched layered closed form."""
    validate_problem(problem)
    require_two_receivers(problem)
    if problem.kappa != 1:
        raise ValueError(f"closed form requires kappa = 1, got {problem.kappa}")
    _check_assignment(problem, assign)
    P = problem.power
    W_c, W_r = problem.noise_vars[assign.c], problem.noise_vars[assign.r]
    N_c, N_r = problem.sideinfo_vars[assign.c], problem.sideinfo_vars[assign.r]
    d_min = N_c * W_c / (P + W_c)
    if N_c < N_r and W_c > W_r:
        d_max = N_c * min(1.0, N_r * (W_c - W_r) / ((P + W_c) * (N_r - N_c)))
    elif N_c >= N_r and W_c >= W_r:
        d_max = N_c
    elif N_c > N_r and W_c < W_r:
        d_max = N_c * (
            W_c / (P + W_c)
            + P * (W_c * N_c - W_r * N_r) / ((P + W_c) * (N_c - N_r) * W_r)
        )
    else:
        # N_c <= N_r with W_c <= W_r is excluded by the refinement-receiver rule
        raise ValueError("parameter ordering excluded by the refinement-receiver rule")
    return d_min, d_max


def gaussian_lds_closed_form(
    problem: GaussianProblem,
    assign: RoleAssignment,
    D_c: float,
    extend_flat: bool = False,
) -> float:
    """Bandwidth-matched layered tradeoff D_r as a function of D_c.

    D_r = N_r N_c^2 / (D_c N_c + N_r (N_c - D_c)) * F where
    F = W_r D_c / ((W_r - W_c) N_c + (P + W_c) D_c) when W_c > W_r and
    F = W_c / (P + W_c) when W_c <= W_r.  With ``extend_flat`` the curve is
    continued at the refinement receiver's point-to-point floor for
    D_c in (D_c_max, N_c].
    """
    d_min, d_max = gaussian_lds_dc_range(problem, assign)
    P = problem.power
    W_c, W_r = problem.noise_vars[assign.c], problem.noise_vars[assign.r]
    N_c, N_r = problem.sideinfo_vars[assign.c], problem.sideinfo_vars[assign.r]
    if extend_flat and d_max < N_c and d_max - RANGE_GUARD < D_c <= N_c + RANGE_GUARD:
        return gaussian_wz_distortion(N_r, gaussian_capacity(P, W_r))
    if not d_min - RANGE_GUARD <= D_c <= d_max + RANGE_GUARD:
        raise ValueError(f"D_c = {D_c} outside the closed-form domain [{d_min}, {d_max}]")
    lead = N_r * N_c * N_c / (D_c * N_c + N_r * (N_c - D_c))
    if W_c > W_r:
        factor = W_r * D_c / ((W_r - W_c) * N_c + (P + W_c) * D_c)
    else:
        factor = W_c / (P + W_c)
    return lead * factor


def gaussian_lds_dc_of_dr(
    problem: GaussianProblem, assign: RoleAssignment, D_r: float
) -> float:
    """Inverse of the W_c < W_r branch of the closed form: best D_c at a given D_r.

    Used when the refinement receiver has the worse channel, so the separate
    coding comparison is naturally parameterized by D_r.  Valid for
    D_r in [N_r W_r / (P + W_r), N_c N_r W_c / (N_c W_c + P N_r)].
    """
    validate_problem(problem)
    require_two_receivers(problem)
    if problem.kappa != 1:
        raise ValueError(f"closed form requires kappa = 1, got {problem.kappa}")
    _check_assignment(problem, assign)
    P = problem.power
    W_c, W_r = problem.noise_vars[assign.c], problem.noise_vars[assign.r]
    N_c, N_r = problem.sideinfo_vars[assign.c], problem.sideinfo_vars[assign.r]
    if not W_c < W_r:
        raise ValueError("inverse form applies to the W_c < W_r branch only")
    lo = N_r * W_r / (P + W_r)
    hi = N_c * N_r * W_c / (N_c * W_c + P * N_r)
    if not lo - RANGE_GUARD <= D_r <= hi + RANGE_GUARD:
        raise ValueError(f"D_r = {D_r} outside [{lo}, {hi}]")
    return N_c * N_r / (N_c - N_r) * (N_c * W_c / ((P + W_c) * D_r) - 1.0)


def separate_coding_labels(problem: GaussianProblem) -> tuple:
    """0-based (bad, good) receiver indices for separate coding.

    The bad receiver is the one with the larger channel noise variance; equal
    noise variances fall back to labeling the receiver with smaller N as good.
    """
    validate_problem(problem)
    require_two_receivers(problem)
    W1, W2 = problem.noise_vars
    if W1 > W2:
        return 0, 1
    if W2 > W1:
        return 1, 0
    N1, N2 = problem.sideinfo_vars
    return (0, 1) if N2 <= N1 else (1, 0)


def gaussian_separate_closed_form(problem: GaussianProblem, D_b: float) -> float:
    """Bandwidth-matched separate source/channel coding tradeoff D_g(D_b).

    The branch is selected by the side information degradation order: the
    single-expression form when the good channel also has the better side
    information (N_g <= N_b), otherwise the max of the two constraints.
    """
    validate_problem(problem)
    require_two_receivers(problem)
    if problem.kappa != 1:
        raise ValueError(f"closed form requires kappa = 1, got {problem.kappa}")
    b, g = separate_coding_labels(problem)
    P = problem.power
    W_b, W_g = problem.noise_vars[b], problem.noise_vars[g]
    N_b, N_g = problem.sideinfo_vars[b], problem.sideinfo_vars[g]
    lo = gaussian_wz_distortion(N_b, gaussian_capacity(P, W_b))
    if not lo - RANGE_GUARD <= D_b <= N_b + RANGE_GUARD:
        raise ValueError(f"D_b = {D_b} outside [{lo}, {N_b}]")
    denom_ch = (W_g - W_b) * N_b + (P + W_b) * D_b
    if N_g <= N_b:
        return (N_g * N_b * N_b * W_g * D_b) / (
            (D_b * N_b + N_g * (N_b - D_b)) * denom_ch
        )
    alt = N_b * (N_g * W_g - (P + W_b) * D_b - N_b * (W_g - W_b)) / (N_g - N_b)
    return N_g / denom_ch * max(W_g * D_b, alt)


def gaussian_separate_feasible(
    problem: GaussianProblem, nu: float, D_b: float, D_g: float
) -> bool:
    """Feasibility of (D_b, D_g) under separate coding with power split nu.

    The bad-channel condition N_b/D_b <= (1 + nu P / (nubar P + W_b))^kappa
    must hold together with the good-channel condition appropriate to the
    side information order (general kappa).
    """
    validate_problem(problem)
    require_two_receivers(problem)
    if not 0.0 <= nu <= 1.0:
        raise ValueError(f"nu must lie in [0, 1], got {nu}")
    b, g = separate_coding_labels(problem)
    P = problem.power
    kappa = float(problem.kappa)
    W_b, W_g = problem.noise_vars[b], problem.noise_vars[g]
    N_b, N_g = problem.sideinfo_vars[b], problem.sideinfo_vars[g]
    nubar = 1.0 - nu
    bad_rhs = (1.0 + nu * P / (nubar * P + W_b)) ** kappa
    if N_b / D_b > bad_rhs * (1.0 + RANGE_GUARD):
        return False
    good_rhs = bad_rhs * (1.0 + nubar * P / W_g) ** kappa
    if N_g <= N_b:
        lhs = N_b * N_b * N_g / (D_g * (N_g * N_b + D_b * (N_b - N_g)))
    else:
        lhs = N_g / min(D_g, D_b + D_b * D_g * (N_g - N_b) / (N_b * N_g))
    return lhs <= good_rhs * (1.0 + RANGE_GUARD)


def gaussian_scheme3_rates(
    problem: GaussianProblem, assign: RoleAssignment, nu: float
) -> RateTriple:
    """Channel rates (per channel use) of the reversed-decoding layered variant.

    The refinement codeword is decoded first while the common layer acts as
    noise; the precoding parameter is set to its point-to-point optimum, which
    only affects R_cc.
    """
    validate_problem(problem)
    require_two_receivers(problem)
    if not 0.0 <= nu <= 1.0:
        raise ValueError(f"nu must lie in [0, 1], got {nu}")
    P = problem.power
    W_c, W_r = problem.noise_vars[assign.c], problem.noise_vars[assign.r]
    nubar = 1.0 - nu
    r_cc = 0.5 * math.log2(1.0 + nu * P / W_c)
    r_cr = 0.5 * math.log2(1.0 + nu * P / W_r)
    r_rr = 0.5 * math.log2(1.0 + nubar * P / (nu * P + W_r)) if nu > 0 else gaussian_capacity(P, W_r)
    return RateTriple(r_cc, r_cr, r_rr)


def gaussian_scheme3_closed_form(
    problem: GaussianProblem, assign: RoleAssignment, D_c: float
) -> float:
    """Bandwidth-matched closed form of the reversed-decoding variant.

    D_r = [N_r W_r / (P + W_r)] * [D_c N_c + (N_c W_c / W_r)(N_c - D_c)]
                                / [D_c N_c + N_r (N_c - D_c)]
    for D_c in [N_c W_c / (P + W_c), N_c].
    """
    validate_problem(problem)
    require_two_receivers(problem)
    if problem.kappa != 1:
        raise ValueError(f"closed form requires kappa = 1, got {problem.kappa}")
    P = problem.power
    W_c, W_r = problem.noise_vars[assign.c], problem.noise_vars[assign.r]
    N_c, N_r = problem.sideinfo_vars[assign.c], problem.sideinfo_vars[assign.r]
    lo = N_c * W_c / (P + W_c)
    if not lo - RANGE_GUARD <= D_c <= N_c + RANGE_GUARD:
        raise ValueError(f"D_c = {D_c} outside [{lo}, {N_c}]")
    lead = N_r * W_r / (P + W_r)
    num = D_c * N_c + (N_c * W_c / W_r) * (N_c - D_c)
    den = D_c * N_c + N_r * (N_c - D_c)
    return lead * num / den


def lds_parametric_cloud(
    problem: GaussianProblem,
    assign: RoleAssignment,
    nu_count: int = 400,
    gamma_count: int = 400,
    gamma_lo: float = -1.0,
    gamma_hi: float = 2.0,
):
    """Vectorized (nu, gamma) grid sweep of the layered scheme.

    Returns a dict of flat arrays {d_c, d_r, nu, gamma} over the grid cells
    whose rate triple needed no clamping (clamped cells are skipped, as are
    nu = 0 cells with gamma != 0, where only the gamma = 0 limit is defined).
    """
    validate_problem(problem)
    require_two_receivers(problem)
    P = problem.power
    kappa = float(problem.kappa)
    W_c, W_r = problem.noise_vars[assign.c], problem.noise_vars[assign.r]
    N_c, N_r = problem.sideinfo_vars[assign.c], problem.sideinfo_vars[assign.r]
    nu = np.linspace(0.0, 1.0, nu_count)
    gamma = np.linspace(gamma_lo, gamma_hi, gamma_count)
    NU, G = np.meshgrid(nu, gamma, indexing="ij")
    nubar = 1.0 - NU
    with np.errstate(divide="ignore", invalid="ignore"):
        dpc = np.where(NU > 0, G * G / (NU * P), np.inf)
        dpc = np.where((NU == 0) & (G == 0), 0.0, dpc)
        valid = np.isfinite(dpc)
        denom_c = 1.0 + nubar * P * (dpc + (1.0 - G) ** 2 / W_c)
        denom_r = 1.0 + nubar * P * (dpc + (1.0 - G) ** 2 / W_r)
        r_cc = 0.5 * np.log2((1.0 + P / W_c) / denom_c)
        r_cr = 0.5 * np.log2((1.0 + P / W_r) / denom_r)
        r_rr = 0.5 * np.log2(denom_r)
        # snap float boundary noise to 0; skip materially clamped cells
        valid &= (r_cc >= -RANGE_GUARD) & (r_cr >= -RANGE_GUARD)
        r_cc = np.maximum(r_cc, 0.0)
        r_cr = np.maximum(r_cr, 0.0)
        r_rr = np.maximum(r_rr, 0.0)
        phi = np.minimum(
            (2.0 ** (2.0 * kappa * r_cc) - 1.0) / N_c,
            (2.0 ** (2.0 * kappa * r_cr) - 1.0) / N_r,
        )
        d_c = N_c / (1.0 + N_c * phi)
        d_r = N_r / (1.0 + N_r * phi) * 2.0 ** (-2.0 * kappa * r_rr)
    keep = valid.ravel()
    out = {
        "d_c": d_c.ravel()[keep],
        "d_r": d_r.ravel()[keep],
        "nu": NU.ravel()[keep],
        "gamma": G.ravel()[keep],
    }
    if not np.any(out["nu"] == 0.0):
        # gamma grid lacks 0: append the nu = 0 limit corner (gamma forced to 0)
        corner_dr = N_r * 2.0 ** (-2.0 * kappa * gaussian_capacity(P, W_r))
        out = {
            "d_c": np.append(out["d_c"], N_c),
            "d_r": np.append(out["d_r"], corner_dr),
            "nu": np.append(out["nu"], 0.0),
            "gamma": np.append(out["gamma"], 0.0),
        }
    return out


def gaussian_separate_sweep(problem: GaussianProblem, count: int = 400):
    """Separate-coding boundary for general kappa by sweeping the power split.

    For each nu the bad-channel condition is tightened to equality, fixing
    D_b, and the applicable good-channel condition is tightened to give the
    smallest D_g.  Returns flat arrays {d_b, d_g, nu} in receiver-label order
    (bad first).
    """
    validate_problem(problem)
    require_two_receivers(problem)
    b, g = separate_coding_labels(problem)
    P = problem.power
    kappa = float(problem.kappa)
    W_b, W_g = problem.noise_vars[b], problem.noise_vars[g]
    N_b, N_g = problem.sideinfo_vars[b], problem.sideinfo_vars[g]
    nu = np.linspace(0.0, 1.0, count)
    nubar = 1.0 - nu
    bad_rhs = (1.0 + nu * P / (nubar * P + W_b)) ** kappa
    d_b = N_b / bad_rhs
    good_rhs = bad_rhs * (1.0 + nubar * P / W_g) ** kappa
    if N_g <= N_b:
        d_g = N_b * N_b * N_g / (good_rhs * (N_g * N_b + d_b * (N_b - N_g)))
    else:
        sol1 = N_g / good_rhs
        with np.errstate(divide="ignore", invalid="ignore"):
            sol2 = (N_g / good_rhs - d_b) * N_b * N_g / (d_b * (N_g - N_b))
        d_g = np.maximum(sol1, np.where(np.isfinite(sol2), sol2, sol1))
    return {"d_b": d_b, "d_g": d_g, "nu": nu}
