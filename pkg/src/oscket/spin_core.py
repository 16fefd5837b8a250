"""Spin-s linear algebra.

Units: hbar = 1 throughout. Spin matrices are returned in units of hbar,
angles are radians and eigenvalues are m-values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from oscket.errors import DomainError, NumericalError

NORM_TOLERANCE = 1e-6
HERMITIAN_TOLERANCE = 1e-10
JACOBI_RELATIVE_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100


@dataclass(frozen=True)
class Direction:
    """Unit 3-vector labelling a measurement axis.

    Inputs whose norm is within 1e-6 of one are renormalized; anything else
    raises DomainError.
    """

    x: float
    y: float
    z: float

    def __post_init__(self):
        comps = (float(self.x), float(self.y), float(self.z))
        if not all(math.isfinite(c) for c in comps):
            raise DomainError(f"direction has non-finite components {comps}")
        norm = math.sqrt(sum(c * c for c in comps))
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise DomainError(f"direction norm {norm!r} is not 1 within {NORM_TOLERANCE}")
        for name, c in zip("xyz", comps):
            object.__setattr__(self, name, c / norm)

    @classmethod
    def from_vector(cls, v) -> "Direction":
        x, y, z = (float(c) for c in v)
        return cls(x, y, z)

    @classmethod
    def normalized(cls, v) -> "Direction":
        """Build from any nonzero vector by dividing by its length."""
        arr = np.asarray(v, dtype=float)
        norm = float(np.linalg.norm(arr))
        if norm == 0.0 or not math.isfinite(norm):
            raise DomainError("cannot normalize a zero or non-finite vector")
        return cls.from_vector(arr / norm)

    @classmethod
    def in_plane(cls, angle: float) -> "Direction":
        """Axis in the x-z plane at ``angle`` radians from +z towards +x."""
        return cls(math.sin(angle), 0.0, math.cos(angle))

    @classmethod
    def spherical(cls, polar: float, azimuth: float) -> "Direction":
        return cls(
            math.sin(polar) * math.cos(azimuth),
            math.sin(polar) * math.sin(azimuth),
            math.cos(polar),
        )

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])


X_AXIS = Direction(1.0, 0.0, 0.0)
Y_AXIS = Direction(0.0, 1.0, 0.0)
Z_AXIS = Direction(0.0, 0.0, 1.0)


@dataclass(frozen=True)
class SpinQuantumNumber:
    """Spin s stored as the integer 2s."""

    twice_s: int

    def __post_init__(self):
        if isinstance(self.twice_s, bool) or int(self.twice_s) != self.twice_s or self.twice_s < 0:
            raise DomainError(f"twice_s must be a nonnegative integer, got {self.twice_s!r}")
        object.__setattr__(self, "twice_s", int(self.twice_s))

    @classmethod
    def from_s(cls, s) -> "SpinQuantumNumber":
        exact = Fraction(s)
        twice = exact.limit_denominator(2) * 2
        if twice.denominator != 1 or abs(float(twice) - 2 * float(exact)) > 1e-12:
            raise DomainError(f"spin must be a multiple of 1/2, got {s!r}")
        return cls(int(twice))

    @property
    def s(self) -> float:
        return self.twice_s / 2

    @property
    def dim(self) -> int:
        return self.twice_s + 1

    @property
    def is_integer(self) -> bool:
        return self.twice_s % 2 == 0

    def m_values(self) -> np.ndarray:
        """m = s, s-1, ..., -s (the ordering of the matrix basis)."""
        return (self.twice_s - 2 * np.arange(self.dim)) / 2


SPIN_HALF = SpinQuantumNumber(1)


@dataclass(frozen=True)
class SpinEigenvalue:
    """Eigenvalue m (units of hbar) of a spin component, stored as 2m."""

    twice_m: int
    twice_s: int | None = None

    def __post_init__(self):
        if int(self.twice_m) != self.twice_m:
            raise DomainError(f"twice_m must be an integer, got {self.twice_m!r}")
        object.__setattr__(self, "twice_m", int(self.twice_m))
        if self.twice_s is not None:
            if abs(self.twice_m) > self.twice_s or (self.twice_s - self.twice_m) % 2:
                raise DomainError(f"2m={self.twice_m} is not an eigenvalue for 2s={self.twice_s}")

    @property
    def m(self) -> float:
        return self.twice_m / 2


def _unit_array(a: Direction) -> np.ndarray:
    v = a.as_array()
    if abs(float(np.dot(v, v)) - 1.0) > 1e-12:
        raise DomainError(f"{a!r} is not a unit vector")
    return v


def angle_between(a: Direction, b: Direction) -> float:
    """Angle in [0, pi] between two axes."""
    dot = float(np.dot(_unit_array(a), _unit_array(b)))
    return math.acos(min(1.0, max(-1.0, dot)))


def spin_matrices(s: SpinQuantumNumber) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Sx, Sy, Sz in the |s, m> basis ordered m = s..-s, built from ladder operators."""
    m = s.m_values()
    ss1 = s.s * (s.s + 1)
    # <m+1| S+ |m> sits one row above the diagonal because m decreases down the basis
    raising = np.diag(np.sqrt(ss1 - m[1:] * (m[1:] + 1)), k=1).astype(complex)
    lowering = raising.conj().T
    sx = (raising + lowering) / 2
    sy = (raising - lowering) / 2j
    sz = np.diag(m).astype(complex)
    return sx, sy, sz


def spin_component(s: SpinQuantumNumber, a: Direction) -> np.ndarray:
    """S_a = a . S."""
    ax, ay, az = _unit_array(a)
    sx, sy, sz = spin_matrices(s)
    return ax * sx + ay * sy + az * sz


def _check_hermitian(h: np.ndarray) -> np.ndarray:
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {h.shape}")
    if not np.all(np.isfinite(h)):
        raise DomainError("matrix has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(h)))) if h.size else 1.0
    if h.size and float(np.max(np.abs(h - h.conj().T))) > HERMITIAN_TOLERANCE * scale:
        raise DomainError("matrix is not Hermitian")
    return h


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def hermitian_eigendecomposition(h) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi diagonalization of a Hermitian matrix.

    Returns ``(eigenvalues, V)`` with eigenvalues ascending and
    ``h @ V == V @ diag(eigenvalues)``. Each rotation first strips the
    phase of the pivot a_pq, then applies the real symmetric Jacobi
    rotation. Stops when the off-diagonal Frobenius norm drops below
    1e-13 * ||h||_F; raises NumericalError after 100 sweeps.
    """
    a = _check_hermitian(h).copy()
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = float(np.linalg.norm(a))
    if n == 0 or scale == 0.0:
        return np.zeros(n), v
    target = JACOBI_RELATIVE_TOL * scale

    for _ in range(JACOBI_MAX_SWEEPS + 1):
        if _off_norm(a) < target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag < 1e-300:
                    continue
                phase = apq / mag
                theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                # hypot avoids overflowing theta**2 when the pivot is tiny
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                sn = t * c
                g = np.array([[c, sn * phase], [-sn * phase.conjugate(), c]])
                cols = [p, q]
                a[:, cols] = a[:, cols] @ g
                a[cols, :] = g.conj().T @ a[cols, :]
                a[p, q] = a[q, p] = 0.0
                v[:, cols] = v[:, cols] @ g
    else:
        raise NumericalError(f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps")

    evals = np.diag(a).real.copy()
    order = np.argsort(evals, kind="stable")
    return evals[order], v[:, order]


def rotation_operator(s: SpinQuantumNumber, a: Direction, phi: float) -> np.ndarray:
    """exp(-i S_a phi) via the eigendecomposition of S_a."""
    evals, vecs = hermitian_eigendecomposition(spin_component(s, a))
    return (vecs * np.exp(-1j * evals * phi)) @ vecs.conj().T


def rotation_phase(m, phi: float) -> complex:
    """exp(-i m phi): the rotation acting on a single eigenvalue m.

    ``m`` is a SpinEigenvalue or a plain number of hbar units.
    """
    mv = m.m if isinstance(m, SpinEigenvalue) else float(m)
    return complex(np.exp(-1j * mv * phi))
