"""Dirichlet posterior of party shares and Monte Carlo share draws.

The pooled sample is treated as multinomial counts ``share * n_eff``. Under a
Dirichlet prior the posterior is again Dirichlet with parameters
``counts + alpha``. Before each draw the reported shares are jittered by
uniform noise of half-width ``gamma`` to account for rounding in the
published figures, so every simulation uses its own posterior.

Randomness is organised in counter-based substreams: simulation ``i`` with
seed ``s`` always uses the Philox stream keyed by ``(s, i)``. Results are
therefore independent of chunking, thread count and ``n_sim`` (a longer run
extends a shorter one).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .polls import PooledSample

JEFFREYS = 0.5

# counter offsets separating independent uses of one simulation's key
STREAM_SHARES = 0
STREAM_SEATS = 1


def substream(seed: int, index: int, purpose: int = STREAM_SHARES) -> np.random.Generator:
    """Generator for simulation ``index``; ``purpose`` selects a disjoint block."""
    key = np.array([seed, index], dtype=np.uint64)
    counter = np.array([0, 0, 0, purpose], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key, counter=counter))


@dataclass(frozen=True)
class PriorSpec:
    alpha: Mapping[str, float]

    def __post_init__(self):
        bad = [p for p, a in self.alpha.items() if not a > 0]
        if bad:
            raise ValueError(f"prior parameters must be positive: {bad}")

    @classmethod
    def jeffreys(cls, party_ids: Sequence[str]) -> PriorSpec:
        return cls({p: JEFFREYS for p in party_ids})

    def vector(self, party_ids: Sequence[str]) -> np.ndarray:
        return np.array([self.alpha[p] for p in party_ids], dtype=float)


@dataclass(frozen=True)
class PosteriorSpec:
    params: Mapping[str, float]

    def __post_init__(self):
        if not all(v > 0 for v in self.params.values()):
            raise ValueError("Dirichlet parameters must be positive")

    def vector(self) -> np.ndarray:
        return np.fromiter(self.params.values(), dtype=float, count=len(self.params))

    def mean(self) -> dict[str, float]:
        total = math.fsum(self.params.values())
        return {p: a / total for p, a in self.params.items()}

    def variance(self) -> dict[str, float]:
        a0 = math.fsum(self.params.values())
        return {p: a * (a0 - a) / (a0 * a0 * (a0 + 1)) for p, a in self.params.items()}


@dataclass(frozen=True)
class NoiseSpec:
    gamma: float = 0.005

    def __post_init__(self):
        if not 0.0 <= self.gamma <= 0.01:
            raise ValueError(f"gamma must lie in [0, 0.01], got {self.gamma}")

    @classmethod
    def for_precision(cls, rounding_precision: float) -> NoiseSpec:
        return cls(rounding_precision / 2.0)


@dataclass(frozen=True)
class SimulationConfig:
    n_sim: int = 10_000
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.n_sim < 1:
            raise ValueError("n_sim must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")


@dataclass(frozen=True)
class ShareDraw:
    shares: Mapping[str, float] = field(default_factory=dict)

    def vector(self, party_ids: Sequence[str]) -> np.ndarray:
        return np.array([self.shares[p] for p in party_ids], dtype=float)


def _adjust(shares: np.ndarray, gamma: float, rng: np.random.Generator) -> np.ndarray:
    if gamma == 0.0:
        return shares
    adjusted = shares + rng.uniform(-gamma, gamma, size=shares.shape)
    np.maximum(adjusted, 0.0, out=adjusted)
    return adjusted / adjusted.sum()


def adjust_rounding(shares: Mapping[str, float], noise: NoiseSpec,
                    rng: np.random.Generator) -> dict[str, float]:
    """Jitter each share by U[-gamma, gamma], clamp at zero and rescale to one."""
    ids = list(shares)
    vec = np.array([shares[p] for p in ids], dtype=float)
    return dict(zip(ids, _adjust(vec, noise.gamma, rng).tolist()))


def build_posterior(pooled: PooledSample, adjusted_shares: Mapping[str, float],
                    prior: PriorSpec | None = None) -> PosteriorSpec:
    ids = list(adjusted_shares)
    if prior is None:
        prior = PriorSpec.jeffreys(ids)
    return PosteriorSpec({p: adjusted_shares[p] * pooled.n_eff + prior.alpha[p] for p in ids})


def _dirichlet(params: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    x = rng.standard_gamma(params)
    return x / x.sum()


def draw_shares(spec: PosteriorSpec, rng: np.random.Generator) -> ShareDraw:
    ids = list(spec.params)
    return ShareDraw(dict(zip(ids, _dirichlet(spec.vector(), rng).tolist())))


def _simulate_block(out, start, stop, base, n_eff, alpha, gamma, seed):
    for i in range(start, stop):
        rng = substream(seed, i)
        adjusted = _adjust(base, gamma, rng)
        out[i] = _dirichlet(adjusted * n_eff + alpha, rng)


def simulate_array(pooled: PooledSample, prior: PriorSpec | None = None,
                   noise: NoiseSpec | None = None,
                   sim: SimulationConfig = SimulationConfig()) -> np.ndarray:
    """Simulated share vectors as an ``(n_sim, n_parties)`` array.

    Columns follow ``pooled.party_ids``. Each row is computed from its own
    substream, so splitting the work over ``sim.workers`` threads does not
    change the result.
    """
    ids = pooled.party_ids
    if prior is None:
        prior = PriorSpec.jeffreys(ids)
    if noise is None:
        noise = NoiseSpec.for_precision(pooled.rounding_precision)
    base = pooled.share_vector(ids)
    alpha = prior.vector(ids)
    out = np.empty((sim.n_sim, len(ids)))
    args = (base, pooled.n_eff, alpha, noise.gamma, sim.seed)
    if sim.workers == 1:
        _simulate_block(out, 0, sim.n_sim, *args)
    else:
        bounds = np.linspace(0, sim.n_sim, sim.workers + 1).astype(int)
        with ThreadPoolExecutor(sim.workers) as pool:
            jobs = [pool.submit(_simulate_block, out, a, b, *args)
                    for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
            for job in jobs:
                job.result()
    return out


def simulate(pooled: PooledSample, prior: PriorSpec | None = None,
             noise: NoiseSpec | None = None,
             sim: SimulationConfig = SimulationConfig()) -> list[ShareDraw]:
    ids = pooled.party_ids
    return [ShareDraw(dict(zip(ids, row))) for row in simulate_array(pooled, prior, noise, sim).tolist()]
