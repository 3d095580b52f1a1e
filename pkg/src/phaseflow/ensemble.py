"""Classical ensemble with the same initial phase-space density as the
quantum packet, moved by free (momentum-conserving) motion.

Sample ``i`` always comes from counter ``i`` of the seeded stream, so the
sample is fixed by ``(seed, n)`` no matter how it is split across workers.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigurationError
from .flow import probability_beyond
from .numerics import RngState, standard_normal_pairs
from .wigner import DimensionlessPacket, PhasePoint

CHUNK = 1 << 18
_INV_SQRT2 = 1.0 / math.sqrt(2.0)


def worker_count() -> int:
    """Threads to use: ``WB_THREADS`` if set, else the CPU count."""
    env = os.environ.get("WB_THREADS")
    if env:
        try:
            value = int(env)
        except ValueError:
            raise ConfigurationError(f"WB_THREADS must be a positive integer, got {env!r}") from None
        if value < 1:
            raise ConfigurationError(f"WB_THREADS must be a positive integer, got {env!r}")
        return value
    return os.cpu_count() or 1


@dataclass(frozen=True)
class EnsembleRun:
    sample_count: int
    seed: int
    tau: float
    pi_estimate: float
    standard_error: float


def _sample_block(packet: DimensionlessPacket, seed: int, start: int, count: int) -> PhasePoint:
    z1, z2, _ = standard_normal_pairs(RngState(seed, start), count)
    u = z1 * _INV_SQRT2
    v = z2 * _INV_SQRT2
    return PhasePoint(packet.xi0 + u + packet.eps0 * v, packet.eta0 + v)


def _blocks(n: int, chunk: int = CHUNK):
    return [(start, min(chunk, n - start)) for start in range(0, n, chunk)]


def sample_initial(packet: DimensionlessPacket, n: int, seed: int) -> PhasePoint:
    """Draw ``n`` points from the initial Wigner density.

    eta~ = v and xi~ = u + eps0 v with u, v independent N(0, 1/2), which is
    exactly the density exp(-(xi~ - eps0 eta~)^2 - eta~^2) / pi.
    """
    if int(n) != n or n < 1:
        raise ConfigurationError(f"sample size must be a positive integer, got {n}")
    parts = [_sample_block(packet, seed, start, count) for start, count in _blocks(int(n))]
    return PhasePoint(np.concatenate([p.xi for p in parts]), np.concatenate([p.eta for p in parts]))


def evolve_free(points: PhasePoint, tau) -> PhasePoint:
    return PhasePoint(points.xi + points.eta * tau, points.eta)


def binomial_stderr(p: float, n: int) -> float:
    return math.sqrt(p * (1.0 - p) / n)


def estimate_pi_cl(points: PhasePoint, delta: float) -> tuple[float, float]:
    """Fraction of points with xi > delta and its binomial standard error."""
    xi = np.asarray(points.xi)
    n = xi.size
    if n == 0:
        raise ConfigurationError("cannot estimate a probability from an empty sample")
    p = np.count_nonzero(xi > delta) / n
    return p, binomial_stderr(p, n)


def count_beyond(packet: DimensionlessPacket, delta: float, tau_grid, n: int, seed: int,
                 workers: int | None = None) -> np.ndarray:
    """Exact integer counts of sample points beyond ``delta`` at each tau.

    Blocks are generated and counted independently, then summed in block
    order; the result does not depend on ``workers``.
    """
    if int(n) != n or n < 1:
        raise ConfigurationError(f"sample size must be a positive integer, got {n}")
    taus = np.asarray(tau_grid, dtype=float)

    def work(block):
        pts = _sample_block(packet, seed, *block)
        return np.array([np.count_nonzero(pts.xi + pts.eta * t > delta) for t in taus], dtype=np.int64)

    blocks = _blocks(int(n))
    workers = min(workers or worker_count(), len(blocks))
    if workers == 1:
        partial = [work(b) for b in blocks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partial = list(pool.map(work, blocks))
    return np.sum(partial, axis=0, dtype=np.int64)


@dataclass(frozen=True)
class ComparisonRow:
    run: EnsembleRun
    pi_quantum: float
    zscore: float


@dataclass(frozen=True)
class ComparisonReport:
    rows: list[ComparisonRow]

    @property
    def max_zscore(self) -> float:
        return max(r.zscore for r in self.rows)


def zscore(estimate: float, expected: float, stderr: float, n: int) -> float:
    """|estimate - expected| / stderr.

    When the empirical error vanishes (all or no points beyond the detector)
    the error expected under ``expected`` is used instead.
    """
    scale = stderr if stderr > 0 else binomial_stderr(expected, n)
    diff = abs(estimate - expected)
    if scale == 0:
        return 0.0 if diff == 0 else math.inf
    return diff / scale


def quantum_classical_compare(packet: DimensionlessPacket, delta: float, tau_grid, n: int, seed: int,
                              workers: int | None = None) -> ComparisonReport:
    """Monte Carlo Pi_cl against the closed-form quantum Pi on a tau grid."""
    taus = [float(t) for t in tau_grid]
    if not taus:
        raise ConfigurationError("time grid is empty")
    counts = count_beyond(packet, delta, taus, n, seed, workers)
    quantum = replace(packet, delta=delta)
    rows = []
    for tau, count in zip(taus, counts):
        p = int(count) / n
        se = binomial_stderr(p, n)
        pq = float(probability_beyond(quantum, tau))
        rows.append(ComparisonRow(EnsembleRun(n, seed, tau, p, se), pq, zscore(p, pq, se, n)))
    return ComparisonReport(rows)
