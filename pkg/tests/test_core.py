import json
from fractions import Fraction

import pytest

from wzbc.core import (
    BinaryProblem,
    DistortionPoint,
    GaussianProblem,
    InvalidProblem,
    RateTriple,
    RoleAssignment,
    TradeoffCurve,
    UnsupportedReceiverCount,
    load_problem,
    parse_kappa,
    problem_from_dict,
    require_two_receivers,
    validate_problem,
)


def test_valid_gaussian_problem_passes():
    p = GaussianProblem(power=1, noise_vars=[1, 0.5], sideinfo_vars=[0.8, 0.4], kappa=1)
    assert validate_problem(p) is p


def test_zero_power_rejected():
    p = GaussianProblem(power=0, noise_vars=[1, 0.5], sideinfo_vars=[0.8, 0.4])
    with pytest.raises(InvalidProblem, match="power must be positive"):
        validate_problem(p)


def test_binary_crossover_above_half_rejected():
    p = BinaryProblem(crossovers=[0.6, 0.1], sideinfo_crossovers=[0.2, 0.1])
    with pytest.raises(InvalidProblem, match="crossover exceeds 1/2"):
        validate_problem(p)


@pytest.mark.parametrize(
    "field, value",
    [
        ("noise_vars", [0.0, 0.5]),
        ("sideinfo_vars", [0.8, 0.0]),
        ("sideinfo_vars", [0.8, 1.2]),
        ("kappa", Fraction(-1, 2)),
    ],
)
def test_gaussian_invariant_violations(field, value):
    kwargs = dict(power=1, noise_vars=[1, 0.5], sideinfo_vars=[0.8, 0.4], kappa=1)
    kwargs[field] = value
    with pytest.raises(InvalidProblem):
        validate_problem(GaussianProblem(**kwargs))


def test_validation_is_idempotent():
    p = BinaryProblem(crossovers=[0.05, 0.1], sideinfo_crossovers=[0.2, 0.1], kappa="1/2")
    assert validate_problem(validate_problem(p)) is p


def test_kappa_parsing():
    assert parse_kappa("1/2") == Fraction(1, 2)
    assert parse_kappa(3) == Fraction(3)
    assert parse_kappa("2") == Fraction(2)
    assert parse_kappa(2.0) == Fraction(2)
    with pytest.raises(InvalidProblem):
        parse_kappa(0.3)  # non-integer floats are ambiguous, must be given as a string
    with pytest.raises(InvalidProblem):
        parse_kappa("abc")


def test_kappa_one_is_exact():
    p = GaussianProblem(power=1, noise_vars=[1, 0.5], sideinfo_vars=[0.8, 0.4], kappa="3/3")
    assert p.kappa == 1


def test_role_assignment_invariants():
    a = RoleAssignment(common_receiver=1, refinement_receiver=2)
    assert (a.c, a.r) == (0, 1)
    with pytest.raises(InvalidProblem):
        RoleAssignment(common_receiver=1, refinement_receiver=1)
    with pytest.raises(InvalidProblem):
        RoleAssignment(common_receiver=0, refinement_receiver=2)


def test_layered_ops_reject_more_receivers():
    p = GaussianProblem(power=1, noise_vars=[1, 0.5, 2], sideinfo_vars=[0.8, 0.4, 0.5])
    validate_problem(p)
    with pytest.raises(UnsupportedReceiverCount):
        require_two_receivers(p)


def test_rate_triple_clamp():
    t = RateTriple(0.5, -0.2, 0.1)
    c = t.clamp()
    assert c.as_tuple() == (0.5, 0.0, 0.1)
    assert c.clamped
    boundary = RateTriple(-1e-15, 0.2, 0.1).clamp()
    assert boundary.as_tuple() == (0.0, 0.2, 0.1)
    assert not boundary.clamped  # epsilon-level noise is not material clamping
    assert not RateTriple(0.1, 0.2, 0.3).clamp().clamped


def test_distortion_point_bounds():
    p = GaussianProblem(power=1, noise_vars=[1, 0.5], sideinfo_vars=[0.8, 0.4])
    assert DistortionPoint(D=(0.4, 0.3), scheme="x").within_bounds(p)
    assert not DistortionPoint(D=(0.9, 0.3), scheme="x").within_bounds(p)
    assert not DistortionPoint(D=(-0.1, 0.3), scheme="x").within_bounds(p)


def test_tradeoff_curve_interpolation():
    pts = (
        DistortionPoint(D=(0.0, 1.0), scheme="x"),
        DistortionPoint(D=(1.0, 0.0), scheme="x"),
    )
    curve = TradeoffCurve(points=pts, envelope_applied=True)
    assert curve.interpolate(0.5) == pytest.approx(0.5)
    assert curve.interpolate(0.0) == 1.0
    with pytest.raises(ValueError):
        curve.interpolate(2.0)


def test_problem_json_round_trip(tmp_path):
    for data in (
        {"kind": "gaussian", "P": 1.0, "W": [1, 0.5], "N": [0.8, 0.4], "kappa": "1"},
        {"kind": "binary", "p": [0.05, 0.1], "beta": [0.2, 0.1], "kappa": "1/2"},
    ):
        path = tmp_path / "prob.json"
        path.write_text(json.dumps(data))
        problem = load_problem(path)
        assert validate_problem(problem) is problem
    assert problem_from_dict(
        {"kind": "gaussian", "P": 1, "W": [1, 1], "N": [1, 1], "kappa": 2}
    ).kappa == 2
    with pytest.raises(InvalidProblem):
        problem_from_dict({"kind": "laplace"})
    with pytest.raises(InvalidProblem):
        problem_from_dict({"kind": "gaussian", "P": 1, "W": [1, 1]})
