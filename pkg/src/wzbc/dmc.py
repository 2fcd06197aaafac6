"""Generic finite-alphabet rate-region evaluators for the layered schemes.

Inputs are an explicit joint distribution over the named auxiliary and input
variables (T, U_c, U_r, U, and optionally the encoder state S) together with
the two channel conditionals p(V_c|U) and p(V_r|U).  Every evaluator verifies
the Markov structure its rate expressions require numerically (conditional
mutual information below 1e-9) instead of trusting the caller.  Rates are
returned unclamped; clamping is a consumer policy.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import RateTriple, parse_kappa
from .infotheory import JointDistribution, mutual_information

MARKOV_TOL = 1e-9


class MarkovChainViolation(ValueError):
    """A required Markov chain fails its numerical conditional-independence check."""


@dataclass(frozen=True)
class SchemeInputs:
    """Joint distribution of the code variables plus the broadcast channel.

    channel_to_common / channel_to_refinement are row-stochastic arrays of
    shape (|U|, |V_k|) giving p(V_k | U).
    """

    joint: JointDistribution
    channel_to_common: np.ndarray
    channel_to_refinement: np.ndarray
    kappa: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "kappa", parse_kappa(self.kappa))
        u_size = self.joint.pmf.shape[self.joint.axis("U")]
        for name, ch in (
            ("channel_to_common", self.channel_to_common),
            ("channel_to_refinement", self.channel_to_refinement),
        ):
            arr = np.asarray(ch, dtype=float)
            if arr.ndim != 2 or arr.shape[0] != u_size:
                raise ValueError(
                    f"{name} must have shape (|U|={u_size}, outputs), got {arr.shape}"
                )
            if np.any(arr < 0) or np.any(np.abs(arr.sum(axis=1) - 1.0) > 1e-12):
                raise ValueError(f"{name} rows must be pmfs summing to 1")
            object.__setattr__(self, name, arr)


def extend_with_outputs(inputs: SchemeInputs) -> JointDistribution:
    """Joint over the input variables plus the channel outputs V_c and V_r.

    The outputs are conditionally independent given U, which is enough for
    the marginal rate expressions evaluated here.
    """
    joint = inputs.joint
    u_ax = joint.axis("U")
    p = np.moveaxis(joint.pmf, u_ax, -1)
    ext = (
        p[..., :, None, None]
        * inputs.channel_to_common[:, :, None]
        * inputs.channel_to_refinement[:, None, :]
    )
    names = tuple(n for n in joint.names if n != "U") + ("U", "V_c", "V_r")
    return JointDistribution(names, ext)


def _require_markov(joint, a, b, given, label):
    value = mutual_information(joint, a, b, given)
    if value > MARKOV_TOL:
        raise MarkovChainViolation(
            f"Markov chain {label} violated: conditional mutual information = {value:.3e}"
        )


def _require_layered_markov(ext: JointDistribution) -> None:
    _require_markov(ext, ("T",), ("V_c", "V_r"), ("U_c", "U_r"), "T-(U_r,U_c)-(V_r,V_c)")
    _require_markov(ext, ("U_c", "U_r"), ("V_c", "V_r"), ("U",), "(U_r,U_c)-U-(V_r,V_c)")


def cds_dpc_rate_bound(inputs: SchemeInputs, receiver: str) -> float:
    """Single-description rate with encoder state precoding:
    kappa * [I(T; V_k) - I(T; S)] for receiver k in {"c", "r"}.

    May be negative; not clamped.  With S independent of T this is the plain
    single-description rate kappa * I(T; V_k).
    """
    if receiver not in ("c", "r"):
        raise ValueError(f'receiver must be "c" or "r", got {receiver!r}')
    for name in ("T", "S", "U"):
        inputs.joint.axis(name)
    ext = extend_with_outputs(inputs)
    v = "V_c" if receiver == "c" else "V_r"
    kappa = float(inputs.kappa)
    return kappa * (mutual_information(ext, ("T",), (v,)) - mutual_information(ext, ("T",), ("S",)))


def lds_rate_triple(inputs: SchemeInputs) -> RateTriple:
    """Layered-scheme rate triple
    (kappa [I(T;V_c) - I(T;U_r)], kappa [I(T;V_r) - I(T;U_r)], kappa I(U_r; T,V_r)).
    """
    ext = extend_with_outputs(inputs)
    _require_layered_markov(ext)
    kappa = float(inputs.kappa)
    i_t_ur = mutual_information(ext, ("T",), ("U_r",))
    return RateTriple(
        kappa * (mutual_information(ext, ("T",), ("V_c",)) - i_t_ur),
        kappa * (mutual_information(ext, ("T",), ("V_r",)) - i_t_ur),
        kappa * mutual_information(ext, ("U_r",), ("T", "V_r")),
    )


def scheme1_rate_triple(inputs: SchemeInputs) -> RateTriple:
    """Superposition-without-precoding rate triple
    (kappa I(U_c;V_c), kappa I(U_c;V_r), kappa I(U;V_r|U_c))."""
    ext = extend_with_outputs(inputs)
    _require_markov(ext, ("U_c",), ("V_c", "V_r"), ("U",), "U_c-U-(V_c,V_r)")
    kappa = float(inputs.kappa)
    return RateTriple(
        kappa * mutual_information(ext, ("U_c",), ("V_c",)),
        kappa * mutual_information(ext, ("U_c",), ("V_r",)),
        kappa * mutual_information(ext, ("U",), ("V_r",), ("U_c",)),
    )


def scheme2_rate_triple(inputs: SchemeInputs) -> RateTriple:
    """Refinement-precoded-first rate triple
    (kappa I(U_c;V_c), kappa I(U_c;T,V_r), kappa [I(T;V_r) - I(T;U_c)])."""
    ext = extend_with_outputs(inputs)
    _require_layered_markov(ext)
    kappa = float(inputs.kappa)
    return RateTriple(
        kappa * mutual_information(ext, ("U_c",), ("V_c",)),
        kappa * mutual_information(ext, ("U_c",), ("T", "V_r")),
        kappa
        * (
            mutual_information(ext, ("T",), ("V_r",))
            - mutual_information(ext, ("T",), ("U_c",))
        ),
    )


def scheme3_rate_triple(inputs: SchemeInputs) -> RateTriple:
    """Reversed-decoding rate triple
    (kappa [I(T;V_c) - I(T;U_r)], kappa I(T;V_r|U_r), kappa I(U_r;V_r))."""
    ext = extend_with_outputs(inputs)
    _require_layered_markov(ext)
    kappa = float(inputs.kappa)
    return RateTriple(
        kappa
        * (
            mutual_information(ext, ("T",), ("V_c",))
            - mutual_information(ext, ("T",), ("U_r",))
        ),
        kappa * mutual_information(ext, ("T",), ("V_r",), ("U_r",)),
        kappa * mutual_information(ext, ("U_r",), ("V_r",)),
    )


def bsc_matrix(p: float) -> np.ndarray:
    """2x2 binary symmetric channel transition matrix."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"crossover must lie in [0, 1], got {p}")
    return np.array([[1.0 - p, p], [p, 1.0 - p]])


def binary_superposition_inputs(
    p_c: float,
    p_r: float,
    gamma_c: float,
    gamma_r: float,
    t_choice: str = "uc",
    kappa=1,
) -> SchemeInputs:
    """Binary layered instantiation: independent U_c ~ Ber(gamma_c) and
    U_r ~ Ber(gamma_r), channel input U = U_c xor U_r, encoder state S = U_r,
    and T = U_c ("uc") or T = U_c xor U_r ("xor")."""
    if t_choice not in ("uc", "xor"):
        raise ValueError(f't_choice must be "uc" or "xor", got {t_choice!r}')
    pmf = np.zeros((2, 2, 2, 2, 2))  # axes (T, U_c, U_r, U, S)
    for uc in (0, 1):
        for ur in (0, 1):
            u = uc ^ ur
            t = uc if t_choice == "uc" else u
            w = (gamma_c if uc else 1.0 - gamma_c) * (gamma_r if ur else 1.0 - gamma_r)
            pmf[t, uc, ur, u, ur] += w
    joint = JointDistribution(("T", "U_c", "U_r", "U", "S"), pmf)
    return SchemeInputs(joint, bsc_matrix(p_c), bsc_matrix(p_r), kappa)
