"""Problem definitions and shared result types.

Conventions baked into the Gaussian problem: the source and every side
information variable have unit variance, so ``sideinfo_vars[k]`` is both the
noise variance of the virtual side channel and the MMSE of estimating the
source from side information k.  The bandwidth ratio kappa (channel uses per
source symbol) is stored as an exact rational so that the bandwidth-matched
case kappa == 1 can be gated exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Union


class InvalidProblem(ValueError):
    """A problem definition violates one of its invariants."""


class UnsupportedReceiverCount(ValueError):
    """A layered-scheme operation was called on a problem without exactly two receivers."""


def parse_kappa(value) -> Fraction:
    """Parse a bandwidth ratio given as Fraction, int, or a "num/den" string."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidProblem(f"kappa string not parseable as a rational: {value!r}") from exc
    if isinstance(value, float) and value.is_integer():
        return Fraction(int(value))
    raise InvalidProblem(
        f"kappa must be a rational ('num/den' string, integer, or Fraction), got {value!r}"
    )


@dataclass(frozen=True)
class GaussianProblem:
    """Quadratic Gaussian broadcast problem.

    power           -- channel input power constraint P
    noise_vars      -- channel noise variance W_k per receiver
    sideinfo_vars   -- MMSE N_k of estimating the unit-variance source from
                       side information k; the correlation is sqrt(1 - N_k)
    kappa           -- channel uses per source symbol
    """

    power: float
    noise_vars: tuple
    sideinfo_vars: tuple
    kappa: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "noise_vars", tuple(float(w) for w in self.noise_vars))
        object.__setattr__(self, "sideinfo_vars", tuple(float(n) for n in self.sideinfo_vars))
        object.__setattr__(self, "power", float(self.power))
        object.__setattr__(self, "kappa", parse_kappa(self.kappa))

    @property
    def receivers(self) -> int:
        return len(self.noise_vars)


@dataclass(frozen=True)
class BinaryProblem:
    """Binary Hamming broadcast problem.

    crossovers          -- BSC transition probability p_k per receiver
    sideinfo_crossovers -- crossover beta_k of the virtual side channel
    kappa               -- channel uses per source symbol
    """

    crossovers: tuple
    sideinfo_crossovers: tuple
    kappa: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "crossovers", tuple(float(p) for p in self.crossovers))
        object.__setattr__(
            self, "sideinfo_crossovers", tuple(float(b) for b in self.sideinfo_crossovers)
        )
        object.__setattr__(self, "kappa", parse_kappa(self.kappa))

    @property
    def receivers(self) -> int:
        return len(self.crossovers)


Problem = Union[GaussianProblem, BinaryProblem]


def validate_problem(problem: Problem) -> Problem:
    """Check every type invariant, returning the problem unchanged if all hold.

    The first violated invariant is reported with field name and offending
    value.  Validation is idempotent.
    """
    if isinstance(problem, GaussianProblem):
        if not problem.power > 0:
            raise InvalidProblem(f"power must be positive (power={problem.power})")
        if len(problem.noise_vars) < 2:
            raise InvalidProblem(
                f"need at least two receivers (noise_vars={problem.noise_vars})"
            )
        if len(problem.noise_vars) != len(problem.sideinfo_vars):
            raise InvalidProblem(
                "noise_vars and sideinfo_vars must have the same length "
                f"({len(problem.noise_vars)} vs {len(problem.sideinfo_vars)})"
            )
        for k, w in enumerate(problem.noise_vars):
            if not w > 0:
                raise InvalidProblem(f"noise variance must be positive (noise_vars[{k}]={w})")
        for k, n in enumerate(problem.sideinfo_vars):
            if not 0 < n <= 1:
                raise InvalidProblem(
                    f"side-information MMSE must lie in (0, 1] (sideinfo_vars[{k}]={n})"
                )
        if not problem.kappa > 0:
            raise InvalidProblem(f"kappa must be positive (kappa={problem.kappa})")
        return problem
    if isinstance(problem, BinaryProblem):
        if len(problem.crossovers) < 2:
            raise InvalidProblem(
                f"need at least two receivers (crossovers={problem.crossovers})"
            )
        if len(problem.crossovers) != len(problem.sideinfo_crossovers):
            raise InvalidProblem(
                "crossovers and sideinfo_crossovers must have the same length "
                f"({len(problem.crossovers)} vs {len(problem.sideinfo_crossovers)})"
            )
        for k, p in enumerate(problem.crossovers):
            if p < 0:
                raise InvalidProblem(f"crossover must be nonnegative (crossovers[{k}]={p})")
            if p > 0.5:
                raise InvalidProblem(f"crossover exceeds 1/2 (crossovers[{k}]={p})")
        for k, b in enumerate(problem.sideinfo_crossovers):
            if b < 0:
                raise InvalidProblem(
                    f"crossover must be nonnegative (sideinfo_crossovers[{k}]={b})"
                )
            if b > 0.5:
                raise InvalidProblem(f"crossover exceeds 1/2 (sideinfo_crossovers[{k}]={b})")
        if not problem.kappa > 0:
            raise InvalidProblem(f"kappa must be positive (kappa={problem.kappa})")
        return problem
    raise InvalidProblem(f"not a problem instance: {problem!r}")


def require_two_receivers(problem: Problem) -> None:
    """Layered schemes are defined for exactly two receivers."""
    if problem.receivers != 2:
        raise UnsupportedReceiverCount(
            f"layered schemes require exactly 2 receivers, problem has {problem.receivers}"
        )


@dataclass(frozen=True)
class RoleAssignment:
    """Which receiver decodes only the common layer (c) and which also decodes
    the refinement layer (r).  Indices are 1-based."""

    common_receiver: int
    refinement_receiver: int

    def __post_init__(self):
        if self.common_receiver == self.refinement_receiver:
            raise InvalidProblem("common and refinement receivers must be distinct")
        if {self.common_receiver, self.refinement_receiver} != {1, 2}:
            raise InvalidProblem(
                "role assignment indices must be {1, 2}, got "
                f"({self.common_receiver}, {self.refinement_receiver})"
            )

    @property
    def c(self) -> int:
        """0-based index of the common-layer receiver."""
        return self.common_receiver - 1

    @property
    def r(self) -> int:
        """0-based index of the refinement receiver."""
        return self.refinement_receiver - 1


@dataclass(frozen=True)
class RateTriple:
    """(R_cc, R_cr, R_rr): common layer to receiver c, common layer to
    receiver r, refinement layer to receiver r.  Units (per source symbol or
    per channel use) are set by the producing operation."""

    R_cc: float
    R_cr: float
    R_rr: float
    clamped: bool = False

    def clamp(self, eps: float = 1e-12) -> "RateTriple":
        """Clamp negative components to 0.

        Values below -eps are materially negative and set the clamped flag;
        values in [-eps, 0) are floating-point boundary noise and are snapped
        to 0 unflagged (sweeps skip flagged points, so boundary cells such as
        the zero-rate corner must not be flagged).
        """
        vals = (self.R_cc, self.R_cr, self.R_rr)
        if min(vals) >= 0.0:
            return self
        flagged = min(vals) < -eps
        return RateTriple(*(max(0.0, v) for v in vals), clamped=flagged)

    def as_tuple(self):
        return (self.R_cc, self.R_cr, self.R_rr)


@dataclass(frozen=True)
class DistortionPoint:
    """A per-receiver distortion tuple together with the scheme and the
    parameters that generated it."""

    D: tuple
    scheme: str
    params: Mapping = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "D", tuple(float(d) for d in self.D))

    def within_bounds(self, problem: Problem, slack: float = 1e-12) -> bool:
        """D_k >= 0 and D_k <= N_k (Gaussian) or beta_k (binary), up to slack."""
        if isinstance(problem, GaussianProblem):
            upper = problem.sideinfo_vars
        else:
            upper = problem.sideinfo_crossovers
        return all(-slack <= d <= u + slack for d, u in zip(self.D, upper))


@dataclass(frozen=True)
class TradeoffCurve:
    """Ordered set of distortion points sorted by D1.  When
    ``envelope_applied`` the points are the vertices of the lower convex
    envelope and are strictly decreasing in D2."""

    points: tuple
    envelope_applied: bool = False

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))

    def d1(self):
        return [p.D[0] for p in self.points]

    def d2(self):
        return [p.D[1] for p in self.points]

    def interpolate(self, x: float) -> float:
        """Piecewise-linear value of the curve at D1 = x (x within range)."""
        xs = self.d1()
        ys = self.d2()
        if not xs[0] - 1e-12 <= x <= xs[-1] + 1e-12:
            raise ValueError(f"x={x} outside curve range [{xs[0]}, {xs[-1]}]")
        if len(xs) == 1:
            return ys[0]
        x = min(max(x, xs[0]), xs[-1])
        for i in range(len(xs) - 1):
            if x <= xs[i + 1]:
                if xs[i + 1] == xs[i]:
                    return min(ys[i], ys[i + 1])
                t = (x - xs[i]) / (xs[i + 1] - xs[i])
                return ys[i] + t * (ys[i + 1] - ys[i])
        return ys[-1]


def problem_from_dict(data: Mapping) -> Problem:
    """Build a problem from its JSON dictionary form.

    Gaussian: {"kind": "gaussian", "P": .., "W": [..], "N": [..], "kappa": "1"}
    Binary:   {"kind": "binary", "p": [..], "beta": [..], "kappa": "1/2"}
    """
    kind = data.get("kind")
    kappa = parse_kappa(data.get("kappa", 1))
    if kind == "gaussian":
        try:
            problem = GaussianProblem(
                power=data["P"], noise_vars=data["W"], sideinfo_vars=data["N"], kappa=kappa
            )
        except KeyError as exc:
            raise InvalidProblem(f"gaussian problem missing field {exc}") from exc
    elif kind == "binary":
        try:
            problem = BinaryProblem(
                crossovers=data["p"], sideinfo_crossovers=data["beta"], kappa=kappa
            )
        except KeyError as exc:
            raise InvalidProblem(f"binary problem missing field {exc}") from exc
    else:
        raise InvalidProblem(f'problem "kind" must be "gaussian" or "binary", got {kind!r}')
    return validate_problem(problem)


def load_problem(path) -> Problem:
    """Load and validate a problem from a JSON file."""
    with open(path, "r", encoding="utf-8") as fh:
        return problem_from_dict(json.load(fh))
