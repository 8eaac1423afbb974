"""End-to-end now-cast: polls -> pooled sample -> simulations -> POEs."""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass
from typing import Iterator, Sequence

from .apportionment import apply_threshold
from .config import ElectionConfig
from .errors import DegenerateDrawError, NoPollsError
from .events import (
    EventQuery,
    Majority,
    PoeResult,
    SimulationRun,
    poe_from_run,
    run_simulation,
    skew_axis,
)
from .polls import Poll, PooledSample, pool, publication_dates, select_window
from .posterior import NoiseSpec, PriorSpec, SimulationConfig


def pooled_share(event: EventQuery, pooled: PooledSample, config: ElectionConfig):
    """Headline share shown next to a POE.

    For coalitions this is the joint share after redistribution of the
    pooled shares, otherwise the party's pooled share. ``None`` when no
    party passes the threshold in the pooled shares themselves.
    """
    if isinstance(event, Majority):
        try:
            _, redistributed = apply_threshold(pooled.pooled_shares, config.rules())
        except DegenerateDrawError:
            return None
        return sum(redistributed.get(p, 0.0) for p in event.coalition)
    return pooled.pooled_shares[event.party]


@dataclass
class Nowcast:
    pooled: PooledSample
    run: SimulationRun
    results: list

    def series_rows(self, config: ElectionConfig) -> list[dict]:
        return [
            {
                "as_of": self.pooled.as_of.isoformat(),
                "event": str(r.event),
                "poe": r.poe,
                "mc_stderr": r.mc_stderr,
                "pooled_share": pooled_share(r.event, self.pooled, config),
                "n_eff": self.pooled.n_eff,
                "skewed_poe": skew_axis(r.poe),
            }
            for r in self.results
        ]


def nowcast(polls: Sequence[Poll], config: ElectionConfig, events: Sequence[EventQuery],
            as_of: dt.date | None = None, sim: SimulationConfig = SimulationConfig(),
            prior: PriorSpec | None = None, noise: NoiseSpec | None = None) -> Nowcast:
    """Pool the polls for ``as_of`` and estimate every event on one draw set."""
    if not polls:
        raise NoPollsError("no polls available")
    if as_of is None:
        as_of = max(p.published for p in polls)
    pooled = pool(select_window(polls, as_of, config.pooling), config.pooling, as_of)
    run = run_simulation(pooled, config.rules(), prior, noise, sim)
    results: list[PoeResult] = [poe_from_run(e, run) for e in events]
    return Nowcast(pooled, run, results)


def nowcast_series(polls: Sequence[Poll], config: ElectionConfig,
                   events: Sequence[EventQuery], sim: SimulationConfig = SimulationConfig(),
                   dates: Sequence[dt.date] | None = None) -> Iterator[Nowcast]:
    """Now-cast at every publication date (or the given ``dates``), oldest first."""
    for day in (publication_dates(polls) if dates is None else dates):
        yield nowcast(polls, config, events, day, sim)
