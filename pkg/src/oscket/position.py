"""Bounded hidden translations on a periodic 1-D grid.

Momentum is spectral: diagonal in the discrete Fourier basis with
wavenumbers k_m = 2 pi m / (L h), m = -floor(L/2) .. ceil(L/2) - 1
(hbar = 1). Exact translation is then a phase per Fourier mode and the
first-order approximation 1 - i p delta can be compared against it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from oscket.errors import DomainError
from oscket.rng import derive_seed, uniform_at

MEASUREMENT_SAMPLES = 64


@dataclass(frozen=True)
class PositionGrid:
    L: int
    h: float = 1.0

    def __post_init__(self):
        if int(self.L) != self.L or self.L < 2:
            raise DomainError(f"L must be an integer >= 2, got {self.L!r}")
        if not (math.isfinite(self.h) and self.h > 0):
            raise DomainError(f"h must be positive, got {self.h!r}")
        object.__setattr__(self, "L", int(self.L))

    @property
    def length(self) -> float:
        return self.L * self.h

    @property
    def sites(self) -> np.ndarray:
        return self.h * np.arange(self.L)

    def wavenumbers(self) -> np.ndarray:
        """k per FFT output slot (numpy's fft ordering)."""
        return 2 * math.pi * np.fft.fftfreq(self.L, d=self.h)

    def mode_indices(self) -> np.ndarray:
        return np.arange(-(self.L // 2), -(-self.L // 2))


def wave_vector(amplitudes) -> np.ndarray:
    """Normalized complex amplitude vector."""
    v = np.asarray(amplitudes, dtype=complex).ravel()
    norm = float(np.linalg.norm(v))
    if norm == 0.0 or not math.isfinite(norm):
        raise DomainError("wave vector must have finite nonzero norm")
    return v / norm


def plane_wave(grid: PositionGrid, m: int) -> np.ndarray:
    return wave_vector(np.exp(2j * math.pi * m * np.arange(grid.L) / grid.L))


def band_limited_vector(grid: PositionGrid, max_mode: int = 4, seed: int = 0) -> np.ndarray:
    """Seeded random superposition of modes |m| <= max_mode."""
    modes = np.arange(-max_mode, max_mode + 1)
    u = uniform_at(derive_seed(seed, 0), np.arange(2 * modes.size))
    coeffs = (u[0::2] - 0.5) * np.exp(2j * math.pi * u[1::2])
    x = np.arange(grid.L)
    return wave_vector(np.exp(2j * math.pi * np.outer(x, modes) / grid.L) @ coeffs)


def momentum_operator(grid: PositionGrid) -> np.ndarray:
    """Dense L x L Hermitian matrix F^-1 diag(k) F."""
    eye = np.eye(grid.L)
    p = np.fft.ifft(grid.wavenumbers()[:, None] * np.fft.fft(eye, axis=0), axis=0)
    return (p + p.conj().T) / 2


def apply_momentum(v, grid: PositionGrid) -> np.ndarray:
    return np.fft.ifft(grid.wavenumbers() * np.fft.fft(np.asarray(v, dtype=complex)))


def translate_exact(v, delta: float, grid: PositionGrid) -> np.ndarray:
    """exp(-i p delta) v; a shift by j sites when delta = j h."""
    phases = np.exp(-1j * grid.wavenumbers() * delta)
    return np.fft.ifft(phases * np.fft.fft(np.asarray(v, dtype=complex)))


def translate_first_order(v, delta: float, grid: PositionGrid) -> np.ndarray:
    """(1 - i p delta) v. Not unitary: the norm grows at order (delta k)^2."""
    v = np.asarray(v, dtype=complex)
    return v - 1j * delta * apply_momentum(v, grid)


def first_order_error(v, delta: float, grid: PositionGrid) -> float:
    """||translate_exact - translate_first_order||, evaluated per Fourier mode.

    The mode multiplier exp(-i k delta) - 1 + i k delta is formed with expm1,
    so small-delta errors are free of cancellation and delta = 0 gives 0.
    """
    x = grid.wavenumbers() * delta
    gap = np.expm1(-1j * x) + 1j * x
    # unnormalized numpy FFT: Parseval carries a 1/sqrt(L)
    return float(np.linalg.norm(gap * np.fft.fft(np.asarray(v, dtype=complex))) / math.sqrt(grid.L))


def loglog_slope(x, y) -> float:
    """Least-squares slope of log y against log x."""
    return float(np.polyfit(np.log(np.asarray(x, float)), np.log(np.asarray(y, float)), 1)[0])


DisplacementRule = Callable[[np.ndarray, float, int], np.ndarray]


def uniform_rule(ticks: np.ndarray, delta_cap: float, seed: int) -> np.ndarray:
    """delta_n = cap * (u_n - 1/2) with u_n the n-th uniform of derive_seed(seed, 0)."""
    return delta_cap * (uniform_at(derive_seed(seed, 0), ticks) - 0.5)


def sinusoidal_rule(period: float) -> DisplacementRule:
    """Deterministic delta_n = (cap/2) sin(2 pi n / period)."""

    def rule(ticks, delta_cap, seed):
        return (delta_cap / 2) * np.sin(2 * math.pi * np.asarray(ticks, float) / period)

    return rule


@dataclass(frozen=True)
class HiddenPositionState:
    """Center x', aperture Delta and the rule generating delta_n."""

    x_center: float
    delta_cap: float
    rule: DisplacementRule = field(default=uniform_rule, compare=False)

    def __post_init__(self):
        if not math.isfinite(self.x_center):
            raise DomainError("x_center must be finite")
        if not (math.isfinite(self.delta_cap) and self.delta_cap > 0):
            raise DomainError(f"delta_cap must be positive, got {self.delta_cap!r}")

    @property
    def interval(self) -> tuple[float, float]:
        return self.x_center - self.delta_cap / 2, self.x_center + self.delta_cap / 2


def _ticks(n) -> np.ndarray:
    arr = np.asarray(n)
    if not np.issubdtype(arr.dtype, np.integer) or np.any(arr < 0):
        raise DomainError("ticks must be nonnegative integers")
    return arr.astype(np.uint64)


def hidden_displacements(state: HiddenPositionState, ticks, seed: int = 0) -> np.ndarray:
    t = _ticks(ticks)
    delta = np.asarray(state.rule(t, state.delta_cap, seed), dtype=float)
    # rules that leave [-cap/2, cap/2] violate the aperture bound
    if np.any(np.abs(delta) > state.delta_cap / 2):
        raise DomainError("displacement rule produced a value outside the aperture")
    return delta


def sample_hidden_positions(state: HiddenPositionState, ticks, seed: int = 0) -> np.ndarray:
    return state.x_center + hidden_displacements(state, ticks, seed)


def step_hidden_position(state: HiddenPositionState, n: int, seed: int = 0) -> float:
    """x' + delta_n at tick n."""
    return float(sample_hidden_positions(state, np.array([n]), seed)[0])


def measure_position(
    state: HiddenPositionState,
    new_delta_cap: float,
    seed: int = 0,
    samples: int = MEASUREMENT_SAMPLES,
    start_tick: int = 0,
) -> HiddenPositionState:
    """Change the aperture to ``new_delta_cap``.

    The new center is the mean of ``samples`` positions drawn under the old
    state at ticks start_tick .. start_tick + samples - 1. Returns a new
    state; ``state`` is untouched.
    """
    if not (math.isfinite(new_delta_cap) and new_delta_cap > 0):
        raise DomainError(f"new aperture must be positive, got {new_delta_cap!r}")
    ticks = np.arange(start_tick, start_tick + int(samples))
    center = float(np.mean(sample_hidden_positions(state, ticks, seed)))
    return replace(state, x_center=center, delta_cap=float(new_delta_cap))
