import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oscket.eprb import (
    JointDistribution,
    OscillationParams,
    TickTime,
    correlation,
    joint_distribution,
    p_continuous,
    p_discrete,
    p_spin_s,
    p_standard,
    phase_averaged_probability,
)
from oscket.errors import DomainError
from oscket.spin_core import SPIN_HALF, SpinQuantumNumber

thetas = st.floats(-20.0, 20.0, allow_nan=False)
ticks = st.integers(0, 10**4)
THETA_GRID = np.linspace(0, 2 * math.pi, 720, endpoint=False)


@pytest.mark.parametrize("theta, expected", [(0, 0), (math.pi, 1), (math.pi / 2, 0.5)])
def test_p_standard(theta, expected):
    assert p_standard(theta) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("theta, n, expected", [(math.pi / 2, 0, 0.5), (math.pi / 2, 3, 0.5), (0.0, 7, 0.0)])
def test_p_discrete(theta, n, expected):
    assert p_discrete(theta, n) == pytest.approx(expected, abs=1e-15)
    assert p_discrete(theta, n) == pytest.approx(p_standard(theta), abs=1e-15)


def test_p_discrete_rejects_fractional_ticks():
    with pytest.raises(DomainError):
        p_discrete(0.1, 1.5)
    with pytest.raises(DomainError):
        p_discrete(0.1, 2.0)
    with pytest.raises(DomainError):
        p_discrete(0.1, -1)
    with pytest.raises(DomainError):
        TickTime(0.5)
    assert p_discrete(0.3, TickTime(4)) == p_discrete(0.3, 0)


def test_p_continuous_examples():
    canonical = OscillationParams()
    assert p_continuous(0.0, 0.0, canonical) == 0.0
    assert p_continuous(math.pi / 2, 5.0, canonical) == pytest.approx(0.5, abs=1e-12)
    assert p_continuous(0.0, 0.5, canonical) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(DomainError):
        p_continuous(0.0, -1.0)


@given(thetas, st.integers(0, 1000))
def test_p_continuous_matches_tick_grid(theta, n):
    assert p_continuous(theta, float(n)) == pytest.approx(p_discrete(theta, n), abs=1e-9)


def test_phi_shifts_continuous_law():
    params = OscillationParams(phi=math.pi / 2)
    assert p_continuous(0.0, 0.0, params) == pytest.approx(1.0)


def test_oscillation_params():
    p = OscillationParams(phi=-math.pi / 2)
    assert 0 <= p.phi < 2 * math.pi and p.phi == pytest.approx(1.5 * math.pi)
    assert p.is_canonical
    with pytest.raises(DomainError):
        OscillationParams(omega=0.0)
    with pytest.raises(DomainError):
        OscillationParams().seconds(3)
    assert OscillationParams(tau_seconds=1e-20).seconds(3) == pytest.approx(3e-20)


def test_p_spin_s_examples():
    assert p_spin_s(SPIN_HALF, math.pi / 2, 2) == pytest.approx(0.5, abs=1e-15)
    assert p_spin_s(SpinQuantumNumber(0), 1.234, 17) == 0.0
    assert p_spin_s(SpinQuantumNumber(2), math.pi / 4, 1) == pytest.approx(0.5, abs=1e-15)


@given(st.integers(0, 10), thetas, ticks)
def test_p_spin_s_literal_formula(ts, theta, n):
    s = SpinQuantumNumber(ts)
    literal = math.sin(2 * math.pi * s.s * n + s.s * theta) ** 2
    # literal float evaluation loses ~|arg| * 1e-16
    assert p_spin_s(s, theta, n) == pytest.approx(literal, abs=1e-15 * (2 * math.pi * s.s * n + 30) + 1e-15)


@pytest.mark.parametrize(
    "theta, n, expected",
    [(0.0, 0, (0, 0.5, 0.5, 0)), (math.pi, 0, (0.5, 0, 0, 0.5)), (math.pi / 2, 1, (0.25, 0.25, 0.25, 0.25))],
)
def test_joint_distribution(theta, n, expected):
    assert joint_distribution(theta, n).as_tuple() == pytest.approx(expected, abs=1e-15)


def test_joint_distribution_validation():
    with pytest.raises(DomainError):
        JointDistribution(0.5, 0.5, 0.0, 0.0)


@pytest.mark.parametrize(
    "theta, expected", [(0.0, -1.0), (math.pi / 2, 0.0), (math.pi / 4, -0.7071067812)]
)
def test_correlation_examples(theta, expected):
    assert correlation(theta, 0) == pytest.approx(expected, abs=1e-10)


@given(thetas, ticks)
def test_correlation_is_minus_cos(theta, n):
    assert correlation(theta, n) == pytest.approx(-math.cos(theta), abs=1e-12)
    assert joint_distribution(theta, n).correlation == pytest.approx(correlation(theta, n), abs=1e-12)


# --- invariants --------------------------------------------------------------


def test_range_on_random_inputs():
    rng = np.random.default_rng(7)
    th = rng.uniform(-50, 50, 10**4)
    n = rng.integers(0, 10**6, 10**4)
    t = rng.uniform(0, 1e3, 10**4)
    for values in (p_standard(th), p_discrete(th, n), p_continuous(th, t), p_spin_s(SpinQuantumNumber(3), th, n)):
        assert np.all((values >= 0) & (values <= 1))


def test_tick_equivalence_grid():
    n = np.arange(10**4 + 1)
    diff = np.abs(p_discrete(THETA_GRID[:, None], n[None, :]) - p_standard(THETA_GRID)[:, None])
    assert diff.max() < 1e-12


@given(thetas, ticks)
def test_period_one(theta, n):
    assert abs(p_discrete(theta, n + 1) - p_discrete(theta, n)) < 1e-12


@given(thetas, ticks)
def test_spin_half_reduction(theta, n):
    assert abs(p_spin_s(SPIN_HALF, theta, n) - p_discrete(theta, n)) < 1e-12


@given(thetas, ticks)
def test_complementarity(theta, n):
    assert abs(p_discrete(theta, n) + p_discrete(theta + math.pi, n) - 1) < 1e-12


@given(thetas, ticks)
def test_correlation_bound(theta, n):
    assert abs(correlation(theta, n)) <= 1 + 1e-12


# --- phase average -------------------------------------------------------------


def test_phase_average_closed_form_quadrature():
    # midpoint rule is exact for trigonometric polynomials of low degree
    phi = (np.arange(64) + 0.5) * 2 * math.pi / 64
    assert np.mean(np.sin(phi) ** 2) == pytest.approx(0.5, abs=1e-15)
    assert phase_averaged_probability(1).closed_form == 0.5
    assert phase_averaged_probability(1).closed_form == pytest.approx(abs(1 / math.sqrt(2)) ** 2, abs=1e-15)


def test_phase_average_monte_carlo():
    res = phase_averaged_probability(10**6, seed=42)
    assert abs(res.estimate - 0.5) <= 3 * 0.3536 / 1e3
    assert res.stderr == pytest.approx(0.3536 / 1e3, rel=0.01)


def test_phase_average_forced_phase():
    res = phase_averaged_probability(1, phases=[math.pi / 2])
    assert res.estimate == 1.0 and res.samples == 1 and res.stderr == 0.0


def test_phase_average_needs_samples():
    with pytest.raises(DomainError):
        phase_averaged_probability(0)
