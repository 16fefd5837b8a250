"""Bell-type inequalities evaluated on the model's correlation law."""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from oscket.eprb import as_ticks, correlation, p_spin_s
from oscket.errors import DomainError
from oscket.spin_core import SPIN_HALF, Direction, SpinQuantumNumber, angle_between

VIOLATION_TOLERANCE = 1e-12
SCAN_TIE_TOLERANCE = 1e-12
CLASSICAL_CHSH_BOUND = 2.0


@dataclass(frozen=True)
class ChshConfig:
    a: Direction
    a_prime: Direction
    b: Direction
    b_prime: Direction

    def __post_init__(self):
        for name in ("a", "a_prime", "b", "b_prime"):
            if not isinstance(getattr(self, name), Direction):
                raise DomainError(f"{name} must be a Direction")

    @classmethod
    def coplanar(cls, a: float, a_prime: float, b: float, b_prime: float) -> "ChshConfig":
        """Axes in the x-z plane at the given angles (radians)."""
        return cls(*(Direction.in_plane(x) for x in (a, a_prime, b, b_prime)))

    @classmethod
    def optimal(cls) -> "ChshConfig":
        return cls.coplanar(0.0, math.pi / 2, math.pi / 4, 3 * math.pi / 4)

    def pairs(self) -> tuple[tuple[Direction, Direction], ...]:
        """(a,b), (a,b'), (a',b), (a',b') in the order the statistic uses them."""
        return (
            (self.a, self.b),
            (self.a, self.b_prime),
            (self.a_prime, self.b),
            (self.a_prime, self.b_prime),
        )


@dataclass(frozen=True)
class BellReport:
    lhs: float
    rhs_or_bound: float
    violated: bool
    margin: float
    interpretation_dependent: bool = False


def _report(lhs: float, rhs: float, flagged: bool = False) -> BellReport:
    return BellReport(
        lhs=lhs,
        rhs_or_bound=rhs,
        violated=lhs > rhs + VIOLATION_TOLERANCE,
        margin=lhs - rhs,
        interpretation_dependent=flagged,
    )


def bell_original_check(theta: float, n: int = 0, s: SpinQuantumNumber = SPIN_HALF) -> BellReport:
    """Three-axis inequality P(a+;b+) <= P(a+;c+) + P(c+;b+).

    ``c`` is the coplanar bisector of ``a`` and ``b``, so both terms on the
    right use theta/2. For integer spin the law is not the singlet one and
    the report is flagged as interpretation dependent.
    """
    if not (0.0 <= theta <= math.pi):
        raise DomainError(f"theta must lie in [0, pi], got {theta!r}")
    n = as_ticks(n)
    lhs = p_spin_s(s, theta, n)
    rhs = 2 * p_spin_s(s, theta / 2, n)
    return _report(lhs, rhs, flagged=s.is_integer)


def chsh_from_correlations(e_ab: float, e_abp: float, e_apb: float, e_apbp: float) -> float:
    return abs(e_ab - e_abp) + abs(e_apb + e_apbp)


def chsh_value(config: ChshConfig, n: int = 0) -> float:
    """S = |E(a,b) - E(a,b')| + |E(a',b) + E(a',b')|."""
    n = as_ticks(n)
    es = [correlation(angle_between(x, y), n) for x, y in config.pairs()]
    return chsh_from_correlations(*es)


def _grid_angles(step: float) -> np.ndarray:
    count = int(math.floor(math.pi / step + 1e-9))
    angles = step * np.arange(count + 1)
    return angles[angles < math.pi - 1e-12]


def _slab_values(angles: np.ndarray, i: int, n) -> np.ndarray:
    """S over all (a', b, b') for a = angles[i]."""
    a = angles[i]
    ap = angles[:, None, None]
    b = angles[None, :, None]
    bp = angles[None, None, :]
    e = lambda x, y: correlation(np.abs(x - y), n)  # noqa: E731
    return np.abs(e(a, b) - e(a, bp)) + np.abs(e(ap, b) + e(ap, bp))


def chsh_scan(step: float, n: int = 0, workers: int = 1) -> tuple[ChshConfig, float]:
    """Exhaustive coplanar grid search for the largest S.

    Angles run over [0, pi) at ``step``. Slabs of fixed ``a`` may be
    evaluated in parallel; the maximum is reduced first, then the
    lexicographically smallest (a, a', b, b') index within 1e-12 of it wins,
    so the result does not depend on ``workers``.
    """
    if not (0.0 < step <= math.pi / 8 + 1e-15):
        raise DomainError(f"step must lie in (0, pi/8], got {step!r}")
    n = as_ticks(n)
    angles = _grid_angles(step)
    idx = range(len(angles))

    def slab(i):
        return _slab_values(angles, i, n)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            slabs = list(pool.map(slab, idx))
    else:
        slabs = [slab(i) for i in idx]

    best = max(float(s.max()) for s in slabs)
    for i, s in enumerate(slabs):
        hits = np.argwhere(s >= best - SCAN_TIE_TOLERANCE)
        if len(hits):
            j, k, m = (int(x) for x in hits[0])
            break
    config = ChshConfig.coplanar(angles[i], angles[j], angles[k], angles[m])
    return config, float(slabs[i][j, k, m])


def local_deterministic_strategies():
    """All 16 assignments (A, A', B, B') in {+1, -1}^4."""
    return list(itertools.product((1, -1), repeat=4))


def local_deterministic_bound() -> float:
    """Largest S over every local deterministic strategy (exactly 2)."""
    return float(
        max(chsh_from_correlations(a * b, a * bp, ap * b, ap * bp) for a, ap, b, bp in local_deterministic_strategies())
    )
