"""Events over simulated elections and their Monte Carlo probabilities.

Three kinds of event are supported, written as short expressions:

``threshold:<party>``
    the party's vote share (before redistribution) reaches the threshold
``rank:<party>:<k>``
    the party is in parliament and exactly ``k - 1`` parties hold more seats
``majority:<party>+<party>...``
    the coalition holds strictly more than half of all seats
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .apportionment import AllocationBatch, ElectionRules, SeatResult, allocate_batch
from .errors import EstimationError, EventParseError
from .polls import PooledSample
from .posterior import (
    STREAM_SEATS,
    NoiseSpec,
    PriorSpec,
    ShareDraw,
    SimulationConfig,
    simulate_array,
    substream,
)

SKEW_SCALE = 0.15
KDE_POINTS = 512


@dataclass(frozen=True)
class ThresholdPass:
    party: str

    def __str__(self):
        return f"threshold:{self.party}"


@dataclass(frozen=True)
class Rank:
    party: str
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("rank must be at least 1")

    def __str__(self):
        return f"rank:{self.party}:{self.k}"


@dataclass(frozen=True)
class Majority:
    coalition: tuple

    def __post_init__(self):
        if not self.coalition:
            raise ValueError("coalition must not be empty")
        if len(set(self.coalition)) != len(self.coalition):
            raise ValueError("coalition parties must be distinct")

    def __str__(self):
        return "majority:" + "+".join(self.coalition)


EventQuery = Union[ThresholdPass, Rank, Majority]


def parse_event(expr: str, party_ids: Sequence[str] | None = None) -> EventQuery:
    """Parse an event expression, resolving party names case-insensitively.

    ``party_ids`` is the list of known parties; pass an
    :class:`~pollcast.config.ElectionConfig` party list to reject unknown
    names. Without it names are taken verbatim.
    """
    text = expr.strip()
    kind, sep, rest = text.partition(":")
    if not sep or not rest:
        raise EventParseError(f"malformed event {expr!r}", token=text)

    def resolve(name: str) -> str:
        if not name or name != name.strip() or " " in name:
            raise EventParseError(f"malformed party token {name!r} in {expr!r}", token=name)
        if party_ids is None:
            return name
        for pid in party_ids:
            if pid.casefold() == name.casefold():
                return pid
        raise EventParseError(f"unknown party {name!r} in {expr!r}", token=name)

    kind = kind.lower()
    if kind == "threshold":
        return ThresholdPass(resolve(rest))
    if kind == "rank":
        party, sep, k = rest.rpartition(":")
        if not sep:
            raise EventParseError(f"rank event needs a position in {expr!r}", token=rest)
        if not k.isdigit() or int(k) < 1:
            raise EventParseError(f"bad rank position {k!r} in {expr!r}", token=k)
        return Rank(resolve(party), int(k))
    if kind == "majority":
        members = []
        for name in rest.split("+"):
            pid = resolve(name)
            if pid in members:
                raise EventParseError(f"duplicate coalition member {name!r} in {expr!r}", token=name)
            members.append(pid)
        return Majority(tuple(members))
    raise EventParseError(f"unknown event kind {kind!r} in {expr!r}", token=kind)


def evaluate_event(event: EventQuery, draw: ShareDraw, seats: SeatResult,
                   rules: ElectionRules) -> bool:
    """Whether ``event`` holds in one simulated election."""
    if isinstance(event, ThresholdPass):
        return draw.shares[event.party] >= rules.threshold
    if isinstance(event, Rank):
        if event.party not in seats.surviving:
            return False
        own = seats.seats[event.party]
        ahead = sum(1 for p in seats.surviving if seats.seats[p] > own)
        return ahead == event.k - 1
    if isinstance(event, Majority):
        return 2 * sum(seats.seats.get(p, 0) for p in event.coalition) > rules.total_seats
    raise TypeError(f"not an event: {event!r}")


# --------------------------------------------------------------------------
# Monte Carlo estimation
# --------------------------------------------------------------------------

@dataclass
class SimulationRun:
    """Simulated vote shares and the seat allocations derived from them."""

    party_ids: list
    rules: ElectionRules
    shares: np.ndarray
    allocation: AllocationBatch

    @classmethod
    def from_shares(cls, shares: np.ndarray, party_ids: Sequence[str], rules: ElectionRules,
                    seed: int = 0) -> SimulationRun:
        alloc = allocate_batch(shares, party_ids, rules,
                               tie_rng=lambda i: substream(seed, i, STREAM_SEATS))
        return cls(list(party_ids), rules, shares, alloc)

    @property
    def n_sim(self) -> int:
        return self.shares.shape[0]

    @property
    def degenerate(self) -> np.ndarray:
        return self.allocation.degenerate

    def column(self, party: str) -> int:
        try:
            return self.party_ids.index(party)
        except ValueError:
            raise EventParseError(f"unknown party {party!r}", token=party) from None

    def indicators(self, event: EventQuery) -> np.ndarray:
        """Per-draw event indicator; degenerate draws are always False."""
        seats = self.allocation.seats
        valid = ~self.degenerate
        if isinstance(event, ThresholdPass):
            hit = self.shares[:, self.column(event.party)] >= self.rules.threshold
        elif isinstance(event, Rank):
            j = self.column(event.party)
            ahead = (seats > seats[:, j:j + 1]).sum(axis=1)
            hit = self.allocation.surviving[:, j] & (ahead == event.k - 1)
        elif isinstance(event, Majority):
            cols = [self.column(p) for p in event.coalition]
            hit = 2 * seats[:, cols].sum(axis=1) > self.rules.total_seats
        else:
            raise TypeError(f"not an event: {event!r}")
        return hit & valid

    def statistic(self, event: EventQuery) -> np.ndarray:
        """Quantity whose density illustrates ``event`` (valid draws only)."""
        valid = ~self.degenerate
        if isinstance(event, Majority):
            cols = [self.column(p) for p in event.coalition]
            return self.allocation.seats[valid][:, cols].sum(axis=1) / self.rules.total_seats
        if isinstance(event, ThresholdPass):
            return self.shares[valid, self.column(event.party)]
        raise ValueError(f"no density statistic defined for {event}")


def run_simulation(pooled: PooledSample, rules: ElectionRules, prior: PriorSpec | None = None,
                   noise: NoiseSpec | None = None,
                   sim: SimulationConfig = SimulationConfig()) -> SimulationRun:
    shares = simulate_array(pooled, prior, noise, sim)
    return SimulationRun.from_shares(shares, pooled.party_ids, rules, sim.seed)


@dataclass(frozen=True)
class PoeResult:
    event: EventQuery
    n_sim_total: int
    n_degenerate: int
    n_event: int
    indicators: np.ndarray | None = field(default=None, compare=False, repr=False)

    @property
    def n_valid(self) -> int:
        return self.n_sim_total - self.n_degenerate

    @property
    def poe(self) -> float:
        return self.n_event / self.n_valid

    @property
    def mc_stderr(self) -> float:
        p = self.poe
        return math.sqrt(p * (1.0 - p) / self.n_valid)


def poe_from_run(event: EventQuery, run: SimulationRun, keep_indicators: bool = False) -> PoeResult:
    n_degenerate = int(run.degenerate.sum())
    if n_degenerate == run.n_sim:
        raise EstimationError(f"all {run.n_sim} simulated elections are degenerate")
    hits = run.indicators(event)
    return PoeResult(event, run.n_sim, n_degenerate, int(hits.sum()),
                     hits if keep_indicators else None)


def estimate_poe(event: EventQuery, pooled: PooledSample, rules: ElectionRules,
                 prior: PriorSpec | None = None, noise: NoiseSpec | None = None,
                 sim: SimulationConfig = SimulationConfig(),
                 keep_indicators: bool = False) -> PoeResult:
    run = run_simulation(pooled, rules, prior, noise, sim)
    return poe_from_run(event, run, keep_indicators)


# --------------------------------------------------------------------------
# densities and axis transform
# --------------------------------------------------------------------------

def silverman_bandwidth(x: np.ndarray) -> float:
    """0.9 * min(sd, IQR/1.34) * m**(-1/5); falls back to sd when the IQR is 0."""
    x = np.asarray(x, dtype=float)
    sd = x.std(ddof=1)
    q75, q25 = np.percentile(x, [75, 25])
    spread = min(sd, (q75 - q25) / 1.34)
    if spread <= 0:
        spread = sd
    return 0.9 * spread * x.size ** -0.2


def gaussian_kde_grid(x: np.ndarray, bandwidth: float | None = None,
                      n_points: int = KDE_POINTS) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=float)
    h = silverman_bandwidth(x) if bandwidth is None else bandwidth
    grid = np.linspace(x.min() - 3 * h, x.max() + 3 * h, n_points)
    # bin onto unique values first; seat shares take few distinct values
    values, counts = np.unique(x, return_counts=True)
    dens = np.zeros_like(grid)
    for start in range(0, values.size, 2048):
        v = values[start:start + 2048]
        c = counts[start:start + 2048]
        z = (grid[:, None] - v[None, :]) / h
        dens += (np.exp(-0.5 * z * z) * c).sum(axis=1)
    dens /= x.size * h * math.sqrt(2 * math.pi)
    return grid, dens


@dataclass(frozen=True)
class DensitySummary:
    event: EventQuery
    statistic: np.ndarray = field(repr=False)
    grid: np.ndarray = field(repr=False)
    density: np.ndarray = field(repr=False)
    in_event: np.ndarray = field(repr=False)
    bandwidth: float
    highlighted_mass: float

    @property
    def kde_grid(self) -> list[tuple[float, float]]:
        return list(zip(self.grid.tolist(), self.density.tolist()))

    def local_maxima(self, min_relative_height: float = 0.01) -> int:
        """Number of peaks of the density on the grid.

        Peaks lower than ``min_relative_height`` times the tallest one are
        ignored; with a Silverman bandwidth, single outlying draws in the
        tails otherwise show up as bumps of their own.
        """
        d = self.density
        step = np.diff(d)
        rising = np.r_[True, step > 0]
        falling = np.r_[step < 0, True]
        peaks = rising & falling
        return int(np.sum(peaks & (d >= min_relative_height * d.max())))


def density_summary(event: EventQuery, run: SimulationRun, bandwidth: float | None = None,
                    n_points: int = KDE_POINTS) -> DensitySummary:
    """Kernel density of the statistic behind ``event`` plus the event's mass.

    ``highlighted_mass`` is the fraction of valid draws in which the event
    holds, i.e. the same number as :func:`poe_from_run` returns.
    """
    stat = run.statistic(event)
    if stat.size < 2:
        raise EstimationError("density needs at least two non-degenerate draws")
    if not np.ptp(stat) > 0:
        raise EstimationError("all simulated values are identical")
    grid, dens = gaussian_kde_grid(stat, bandwidth, n_points)
    h = silverman_bandwidth(stat) if bandwidth is None else bandwidth
    if isinstance(event, Majority):
        in_event = 2 * grid > 1.0
    else:
        in_event = grid >= run.rules.threshold
    mass = poe_from_run(event, run).poe
    return DensitySummary(event, stat, grid, dens, in_event, h, mass)


def skew_axis(p, scale: float = SKEW_SCALE):
    """Map probabilities onto an axis that is stretched around 0.5.

    A rescaled logistic: strictly increasing, fixes 0, 0.5 and 1, and has
    its steepest slope at 0.5.
    """
    arr = np.asarray(p, dtype=float)
    if np.any(~((arr >= 0) & (arr <= 1))):
        raise ValueError("probabilities must lie in [0, 1]")

    def logistic(v):
        return 1.0 / (1.0 + np.exp(-(v - 0.5) / scale))

    lo, hi = logistic(0.0), logistic(1.0)
    out = (logistic(arr) - lo) / (hi - lo)
    return float(out) if np.ndim(p) == 0 else out
