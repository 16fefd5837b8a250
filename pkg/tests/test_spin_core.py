import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st

from oscket.errors import DomainError, NumericalError
import oscket.spin_core as sc
from oscket.spin_core import (
    SPIN_HALF,
    X_AXIS,
    Z_AXIS,
    Direction,
    SpinEigenvalue,
    SpinQuantumNumber,
    angle_between,
    hermitian_eigendecomposition,
    rotation_operator,
    rotation_phase,
    spin_component,
    spin_matrices,
)

TOL = 1e-10

twice_s = st.integers(0, 10)
angles = st.floats(-4 * math.pi, 4 * math.pi, allow_nan=False)


@st.composite
def directions(draw):
    polar = draw(st.floats(0, math.pi))
    azimuth = draw(st.floats(0, 2 * math.pi))
    return Direction.spherical(polar, azimuth)


def pauli_dot(a: Direction):
    return np.array([[a.z, a.x - 1j * a.y], [a.x + 1j * a.y, -a.z]])


# --- Direction / angle ---------------------------------------------------------


@pytest.mark.parametrize(
    "b, expected",
    [((1, 0, 0), 0.0), ((0, 1, 0), math.pi / 2), ((-1, 0, 0), math.pi)],
)
def test_angle_between_examples(b, expected):
    assert angle_between(X_AXIS, Direction(*b)) == pytest.approx(expected, abs=1e-15)


def test_direction_normalizes_float_noise():
    d = Direction(1 + 1e-7, 0, 0)
    assert d.x == 1.0


def test_direction_rejects_bad_norm():
    with pytest.raises(DomainError):
        Direction(2, 0, 0)
    with pytest.raises(DomainError):
        Direction(float("nan"), 0, 0)


@given(directions(), directions())
def test_angle_range(a, b):
    assert 0.0 <= angle_between(a, b) <= math.pi


# --- spin matrices ----------------------------------------------------------------


def test_spin_zero():
    for m in spin_matrices(SpinQuantumNumber(0)):
        assert m.shape == (1, 1) and m[0, 0] == 0


def test_spin_half_matches_half_pauli():
    sx, sy, sz = spin_matrices(SPIN_HALF)
    assert np.allclose(sx, [[0, 0.5], [0.5, 0]], atol=1e-15)
    assert np.allclose(sy, [[0, -0.5j], [0.5j, 0]], atol=1e-15)
    assert np.allclose(sz, np.diag([0.5, -0.5]), atol=1e-15)


def test_spin_one_hand_evaluated():
    r = 1 / math.sqrt(2)
    sx, sy, sz = spin_matrices(SpinQuantumNumber(2))
    assert np.allclose(sx, r * np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]]), atol=1e-15)
    assert np.allclose(sy, r * np.array([[0, -1j, 0], [1j, 0, -1j], [0, 1j, 0]]), atol=1e-15)
    assert np.allclose(sz, np.diag([1, 0, -1]), atol=1e-15)


def test_from_s():
    assert SpinQuantumNumber.from_s(1.5).twice_s == 3
    assert SpinQuantumNumber.from_s("1/2") == SPIN_HALF
    with pytest.raises(DomainError):
        SpinQuantumNumber.from_s(0.3)
    with pytest.raises(DomainError):
        SpinQuantumNumber(-1)


def test_spin_eigenvalue_validation():
    assert SpinEigenvalue(1, 3).m == 0.5
    with pytest.raises(DomainError):
        SpinEigenvalue(2, 1)
    with pytest.raises(DomainError):
        SpinEigenvalue(5, 3)


def test_spin_component_z_is_sz():
    assert np.allclose(spin_component(SPIN_HALF, Z_AXIS), np.diag([0.5, -0.5]))


def test_spin_component_x_spectrum():
    evals, _ = hermitian_eigendecomposition(spin_component(SPIN_HALF, X_AXIS))
    assert np.allclose(evals, [-0.5, 0.5], atol=1e-14)


@given(directions(), twice_s)
def test_spin_component_spectrum_and_trace(a, ts):
    s = SpinQuantumNumber(ts)
    op = spin_component(s, a)
    assert abs(np.trace(op)) < 1e-12
    evals, _ = hermitian_eigendecomposition(op)
    assert np.allclose(evals, np.sort(s.m_values()), atol=TOL)


# --- eigensolver -----------------------------------------------------------------


def test_eig_identity():
    evals, v = hermitian_eigendecomposition(np.eye(3))
    assert np.array_equal(evals, [1, 1, 1])
    assert np.allclose(v, np.eye(3))


def test_eig_diagonal_permutation():
    evals, v = hermitian_eigendecomposition(np.diag([3.0, 1.0, 2.0]))
    assert np.array_equal(evals, [1, 2, 3])
    assert np.array_equal(np.abs(v), [[0, 0, 1], [1, 0, 0], [0, 1, 0]])


@given(directions())
def test_eig_half_pauli(a):
    evals, _ = hermitian_eigendecomposition(pauli_dot(a) / 2)
    assert np.allclose(evals, [-0.5, 0.5], atol=1e-12)


@settings(max_examples=60)
@given(st.integers(1, 11), st.integers(0, 2**32 - 1))
def test_eig_random_against_lapack(n, seed):
    rng = np.random.default_rng(seed)
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    h = m + m.conj().T
    evals, v = hermitian_eigendecomposition(h)
    assert np.all(np.diff(evals) >= 0)
    assert np.allclose(evals, np.linalg.eigvalsh(h), atol=1e-10)
    assert np.abs(h @ v - v * evals).max() < TOL * max(1, np.abs(h).max())
    assert np.abs(v.conj().T @ v - np.eye(n)).max() < TOL


def test_eig_rejects_non_hermitian():
    with pytest.raises(DomainError):
        hermitian_eigendecomposition(np.array([[0, 1], [0, 0]]))
    with pytest.raises(DomainError):
        hermitian_eigendecomposition(np.ones((2, 3)))


def test_eig_iteration_cap(monkeypatch):
    monkeypatch.setattr(sc, "JACOBI_MAX_SWEEPS", 0)
    with pytest.raises(NumericalError):
        hermitian_eigendecomposition(np.array([[0, 1], [1, 0]]))


# --- rotations -----------------------------------------------------------------


@given(directions())
def test_rotation_zero_is_identity(a):
    assert np.allclose(rotation_operator(SPIN_HALF, a, 0.0), np.eye(2), atol=TOL)


def test_rotation_spinor_sign_flip():
    assert np.allclose(rotation_operator(SPIN_HALF, Z_AXIS, 2 * math.pi), -np.eye(2), atol=TOL)
    assert np.allclose(rotation_operator(SPIN_HALF, Z_AXIS, 4 * math.pi), np.eye(2), atol=TOL)


@given(directions(), angles)
def test_rotation_half_closed_form(a, phi):
    closed = math.cos(phi / 2) * np.eye(2) - 1j * math.sin(phi / 2) * pauli_dot(a)
    assert np.allclose(rotation_operator(SPIN_HALF, a, phi), closed, atol=TOL)


@settings(max_examples=40)
@given(twice_s, directions(), angles)
def test_rotation_against_expm(ts, a, phi):
    s = SpinQuantumNumber(ts)
    expected = scipy.linalg.expm(-1j * phi * spin_component(s, a))
    assert np.allclose(rotation_operator(s, a, phi), expected, atol=TOL)


def test_rotation_phase_examples():
    half = SpinEigenvalue(1, 1)
    assert rotation_phase(half, 0.0) == 1
    assert rotation_phase(half, 2 * math.pi) == pytest.approx(-1, abs=1e-15)
    assert rotation_phase(SpinEigenvalue(0, 0), 1.234) == 1


@given(st.integers(-10, 10), angles)
def test_rotation_phase_modulus(twice_m, phi):
    assert abs(abs(rotation_phase(SpinEigenvalue(twice_m), phi)) - 1) < 1e-12


# --- algebra invariants ----------------------------------------------------------


@pytest.mark.parametrize("ts", range(11))
def test_commutators_and_casimir(ts):
    s = SpinQuantumNumber(ts)
    sx, sy, sz = spin_matrices(s)
    comm = lambda a, b: a @ b - b @ a  # noqa: E731
    assert np.abs(comm(sx, sy) - 1j * sz).max() < TOL
    assert np.abs(comm(sy, sz) - 1j * sx).max() < TOL
    assert np.abs(comm(sz, sx) - 1j * sy).max() < TOL
    casimir = sx @ sx + sy @ sy + sz @ sz
    assert np.abs(casimir - s.s * (s.s + 1) * np.eye(s.dim)).max() < TOL


@given(twice_s, directions(), angles, angles)
def test_unitarity_and_composition(ts, a, p1, p2):
    s = SpinQuantumNumber(ts)
    d1 = rotation_operator(s, a, p1)
    assert np.abs(d1.conj().T @ d1 - np.eye(s.dim)).max() < TOL
    d12 = rotation_operator(s, a, p1 + p2)
    assert np.abs(d1 @ rotation_operator(s, a, p2) - d12).max() < TOL


@given(directions(), angles)
def test_scalar_and_matrix_forms_agree(a, phi):
    evals, vecs = hermitian_eigendecomposition(spin_component(SPIN_HALF, a))
    d = rotation_operator(SPIN_HALF, a, phi)
    for m, v in zip(evals, vecs.T):
        phase = rotation_phase(SpinEigenvalue(round(2 * m), 1), phi)
        assert np.abs(d @ v - phase * v).max() < TOL


@pytest.mark.parametrize("ts", range(11))
def test_periodicity(ts):
    s = SpinQuantumNumber(ts)
    sign = 1 if s.is_integer else -1
    d = rotation_operator(s, Direction.spherical(0.7, 1.9), 2 * math.pi)
    assert np.abs(d - sign * np.eye(s.dim)).max() < TOL
