"""The discretely shooting gun as an absorbing discrete-time process.

At tick n >= 1 the gun fires with probability sin^2(omega n / 2 + phi).
Death is absorbing. omega and phi are fixed configuration values, never
sampled, so the phi = 0, omega = 2 pi case (the gun never fires) stays
reproducible.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from oscket.errors import DomainError
from oscket.rng import Stream, derive_seed

# runs of one batch share a stream and consume ``ticks`` uniforms each, in order
RUNS_PER_BATCH = 4096
_CHUNK_UNIFORMS = 1 << 22


@dataclass(frozen=True)
class CatConfig:
    omega: float = 2 * math.pi
    phi: float = 0.0
    ticks: int = 0

    def __post_init__(self):
        if not (math.isfinite(self.omega) and self.omega > 0):
            raise DomainError(f"omega must be positive, got {self.omega!r}")
        if not math.isfinite(self.phi):
            raise DomainError(f"phi must be finite, got {self.phi!r}")
        if isinstance(self.ticks, bool) or int(self.ticks) != self.ticks or self.ticks < 0:
            raise DomainError(f"ticks must be a nonnegative integer, got {self.ticks!r}")
        object.__setattr__(self, "ticks", int(self.ticks))


@dataclass(frozen=True)
class CatRunResult:
    alive: bool
    death_tick: int | None = None

    def __post_init__(self):
        if self.alive != (self.death_tick is None):
            raise DomainError("death_tick must be set exactly when the cat is dead")

    @property
    def outcome(self) -> str:
        return "alive" if self.alive else "dead"


def fire_probability(n, omega: float, phi: float):
    """sin^2(omega n / 2 + phi) for ticks n >= 1.

    The phase is carried in half turns and reduced mod 1 before the sine,
    so phases that are whole multiples of pi give exactly 0.
    """
    ticks = np.asarray(n)
    if not np.issubdtype(ticks.dtype, np.integer) or np.any(ticks < 1):
        raise DomainError("fire_probability needs integer ticks n >= 1")
    half_turns = np.mod(omega / math.pi * ticks / 2 + phi / math.pi, 1.0)
    p = np.sin(math.pi * half_turns) ** 2
    return float(p) if ticks.ndim == 0 else p


def fire_probabilities(config: CatConfig) -> np.ndarray:
    if config.ticks == 0:
        return np.zeros(0)
    return fire_probability(np.arange(1, config.ticks + 1), config.omega, config.phi)


def survival_curve(config: CatConfig) -> np.ndarray:
    """Survival probability after ticks 0..N (length N + 1)."""
    return np.concatenate(([1.0], np.cumprod(1.0 - fire_probabilities(config))))


def survival_probability(config: CatConfig) -> float:
    """prod_{n=1..N} (1 - fire_probability(n))."""
    return float(survival_curve(config)[-1])


@dataclass(frozen=True)
class DeathTickSummary:
    """Partial mean sum_n n P(death at n) over ticks 1..N, plus survivor mass.

    ``divergent`` is set when no death is possible within the horizon; the
    mean is then None.
    """

    mean: float | None
    survivor_mass: float
    divergent: bool


def expected_death_tick(config: CatConfig) -> DeathTickSummary:
    survival = survival_curve(config)
    death_mass = survival[:-1] * fire_probabilities(config)
    if not np.any(death_mass > 0):
        return DeathTickSummary(None, float(survival[-1]), True)
    mean = float(np.sum(np.arange(1, config.ticks + 1) * death_mass))
    return DeathTickSummary(mean, float(survival[-1]), False)


def _first_death(u: np.ndarray, p: np.ndarray) -> np.ndarray:
    """First tick (1-based) where u < p in each row, 0 if none."""
    hits = u < p
    first = np.argmax(hits, axis=1) + 1
    return np.where(hits.any(axis=1), first, 0)


def simulate_cat(config: CatConfig, seed: int) -> CatRunResult:
    """One run: Bernoulli draws at ticks 1..N from stream derive_seed(seed, 0).

    This is run 0 of ``simulate_cats(config, runs, seed)``.
    """
    stream = Stream(derive_seed(seed, 0))
    p = fire_probabilities(config)
    for start in range(0, config.ticks, _CHUNK_UNIFORMS):
        chunk = p[start : start + _CHUNK_UNIFORMS]
        hit = _first_death(stream.random(chunk.size)[None, :], chunk[None, :])[0]
        if hit:
            return CatRunResult(False, start + int(hit))
    return CatRunResult(True)


def _simulate_batch(p: np.ndarray, runs: int, key: int) -> np.ndarray:
    stream = Stream(key)
    ticks = p.size
    out = np.zeros(runs, dtype=np.int64)
    if ticks == 0:
        return out
    rows = max(1, _CHUNK_UNIFORMS // ticks)
    for start in range(0, runs, rows):
        count = min(rows, runs - start)
        u = stream.random(count * ticks).reshape(count, ticks)
        out[start : start + count] = _first_death(u, p[None, :])
    return out


def simulate_death_ticks(config: CatConfig, runs: int, seed: int, workers: int = 1) -> np.ndarray:
    """Death tick per run (0 for survivors) over ``runs`` independent runs.

    Batch ``b`` of RUNS_PER_BATCH runs reads stream derive_seed(seed, b);
    the result does not depend on ``workers``.
    """
    if int(runs) < 1:
        raise DomainError("runs must be >= 1")
    runs = int(runs)
    p = fire_probabilities(config)
    sizes = [min(RUNS_PER_BATCH, runs - start) for start in range(0, runs, RUNS_PER_BATCH)]
    jobs = [(p, size, derive_seed(seed, b)) for b, size in enumerate(sizes)]
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda job: _simulate_batch(*job), jobs))
    else:
        parts = [_simulate_batch(*job) for job in jobs]
    return np.concatenate(parts)


def simulate_cats(config: CatConfig, runs: int, seed: int, workers: int = 1) -> list[CatRunResult]:
    return [CatRunResult(True) if d == 0 else CatRunResult(False, int(d)) for d in simulate_death_ticks(config, runs, seed, workers)]


def empirical_survival_curve(death_ticks: np.ndarray, ticks: int) -> np.ndarray:
    """Fraction of runs still alive after ticks 0..N."""
    death_ticks = np.asarray(death_ticks)
    dead_by = np.zeros(ticks + 1, dtype=np.int64)
    died = death_ticks[death_ticks > 0]
    np.add.at(dead_by, died, 1)
    return 1.0 - np.cumsum(dead_by) / death_ticks.size
