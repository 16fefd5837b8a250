"""EPRB probability laws for the oscillating-eigenket model.

All time arguments are in units of the tick tau. The discrete laws accept
only integer ticks; the continuous law accepts any real t >= 0.

Every law is the squared sine of a phase. In the discrete laws the phase is
a whole number h of half turns plus a remainder x; sin(pi h + x) is
evaluated as (-1)**(h mod 2) * sin(x) with h reduced in integer
arithmetic, so the sign flip of the oscillating eigenvalue is applied
exactly and results are bit-identical for every tick.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from oscket.errors import DomainError
from oscket.rng import Stream, derive_seed
from oscket.spin_core import SpinQuantumNumber

TWO_PI = 2.0 * math.pi
CANONICAL_OMEGA = TWO_PI


@dataclass(frozen=True)
class OscillationParams:
    """Hidden oscillation variables.

    omega is in radians per tick, phi is reduced into [0, 2pi). tau_seconds
    is the unknown length of one tick and is only used for display.
    """

    omega: float = CANONICAL_OMEGA
    phi: float = 0.0
    tau_seconds: float | None = None

    def __post_init__(self):
        if not (math.isfinite(self.omega) and self.omega > 0):
            raise DomainError(f"omega must be positive, got {self.omega!r}")
        if not math.isfinite(self.phi):
            raise DomainError(f"phi must be finite, got {self.phi!r}")
        if self.tau_seconds is not None and not self.tau_seconds > 0:
            raise DomainError(f"tau_seconds must be positive, got {self.tau_seconds!r}")
        object.__setattr__(self, "phi", math.fmod(self.phi, TWO_PI) % TWO_PI)

    @property
    def is_canonical(self) -> bool:
        return self.omega == CANONICAL_OMEGA

    def seconds(self, ticks: float) -> float:
        if self.tau_seconds is None:
            raise DomainError("tau_seconds is unknown")
        return ticks * self.tau_seconds


@dataclass(frozen=True)
class TickTime:
    """A nonnegative whole number of ticks."""

    n: int

    def __post_init__(self):
        object.__setattr__(self, "n", int(as_ticks(self.n)))

    def __int__(self) -> int:
        return self.n


def as_ticks(n):
    """Validate tick counts: integers (or integer arrays) that are >= 0."""
    if isinstance(n, TickTime):
        return n.n
    arr = np.asarray(n)
    if arr.dtype == bool or not np.issubdtype(arr.dtype, np.integer):
        raise DomainError(f"ticks must be integers, got {n!r}")
    if np.any(arr < 0):
        raise DomainError("ticks must be nonnegative")
    return n if arr.ndim == 0 and isinstance(n, int) else arr


def _finite(x, name: str):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite")
    return arr


def _scalarize(result, *inputs):
    if all(np.ndim(x) == 0 for x in inputs):
        return float(result)
    return result


def p_standard(theta):
    """Singlet law sin^2(theta/2)."""
    th = _finite(theta, "theta")
    return _scalarize(np.sin(th / 2) ** 2, theta)


def _sin_half_turns(half_turns, x):
    """sin(pi * half_turns + x) for integer half_turns."""
    sign = 1 - 2 * (np.asarray(half_turns) % 2)
    return sign * np.sin(x)


def p_discrete(theta, n):
    """sin^2(pi n + theta/2) on the tick grid."""
    th = _finite(theta, "theta")
    ticks = np.asarray(as_ticks(n))
    return _scalarize(_sin_half_turns(ticks, th / 2) ** 2, theta, n)


def p_continuous(theta, t, params: OscillationParams | None = None):
    """sin^2(omega t / 2 + phi + theta/2) for real t >= 0."""
    params = params or OscillationParams()
    th = _finite(theta, "theta")
    tt = _finite(t, "t")
    if np.any(tt < 0):
        raise DomainError("t must be nonnegative")
    return _scalarize(np.sin(params.omega * tt / 2 + params.phi + th / 2) ** 2, theta, t)


def p_spin_s(s: SpinQuantumNumber, theta, n):
    """sin^2(2 pi s n + s theta) for spin s."""
    th = _finite(theta, "theta")
    ticks = np.asarray(as_ticks(n))
    # 2 pi s n = pi * (2s n): a whole number of half turns
    half_turns = (s.twice_s * ticks) % 2
    return _scalarize(_sin_half_turns(half_turns, s.twice_s * th / 2) ** 2, theta, n)


@dataclass(frozen=True)
class JointDistribution:
    """Joint law of the outcome pair (sigma1, sigma2)."""

    p_pp: float
    p_pm: float
    p_mp: float
    p_mm: float

    def __post_init__(self):
        probs = self.as_tuple()
        if any(not (-1e-12 <= p <= 1 + 1e-12) for p in probs):
            raise DomainError(f"probabilities out of range: {probs}")
        if abs(sum(probs) - 1.0) > 1e-12:
            raise DomainError(f"probabilities sum to {sum(probs)!r}")
        if abs(self.p_pp + self.p_pm - 0.5) > 1e-12 or abs(self.p_mp + self.p_mm - 0.5) > 1e-12:
            raise DomainError("first-particle marginal is not uniform")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.p_pp, self.p_pm, self.p_mp, self.p_mm)

    @property
    def correlation(self) -> float:
        return self.p_pp + self.p_mm - self.p_pm - self.p_mp


def joint_distribution(theta: float, n: int) -> JointDistribution:
    """Complete the conditional law with the uniform singlet marginal."""
    p = p_discrete(float(theta), n)
    return JointDistribution(p / 2, (1 - p) / 2, (1 - p) / 2, p / 2)


def correlation(theta, n):
    """E = 2 P(a+;b+) - 1, equal to -cos(theta) on the tick grid."""
    return 2 * p_discrete(theta, n) - 1


@dataclass(frozen=True)
class PhaseAverage:
    closed_form: float
    estimate: float
    stderr: float
    samples: int


PHASE_AVERAGE_CLOSED_FORM = 0.5


def phase_averaged_probability(samples: int, seed: int = 0, phases=None) -> PhaseAverage:
    """Average sin^2(phi) over a uniform phase phi in [0, 2pi).

    The closed form is 1/2, the weight |1/sqrt(2)|^2 of each eigenket in an
    equal superposition. ``phases`` overrides the sampled phases.
    """
    if phases is None:
        if int(samples) < 1:
            raise DomainError("samples must be >= 1")
        phases = TWO_PI * Stream(derive_seed(seed, 0)).random(int(samples))
    values = np.sin(np.asarray(phases, dtype=float).ravel()) ** 2
    if values.size < 1:
        raise DomainError("need at least one phase")
    est = float(values.mean())
    stderr = float(values.std(ddof=1) / math.sqrt(values.size)) if values.size > 1 else 0.0
    return PhaseAverage(PHASE_AVERAGE_CLOSED_FORM, est, stderr, int(values.size))
