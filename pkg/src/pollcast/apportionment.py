"""Seat allocation: threshold filtering, redistribution and Sainte-Laguë.

Two code paths share the same semantics. :func:`sainte_lague` awards seats
one at a time and settles exact ties by lot, as the statutory procedure
does. :func:`sainte_lague_batch` allocates many share vectors at once by
rounding and correcting, and hands rows with a tie at the boundary back to
the scalar routine.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import DegenerateDrawError
from .posterior import ShareDraw


@dataclass(frozen=True)
class ElectionRules:
    threshold: float = 0.05
    total_seats: int = 598
    eligible: frozenset = frozenset()
    tie_break: str = "lot"

    def __post_init__(self):
        if not 0.0 <= self.threshold < 1.0:
            raise ValueError(f"threshold must lie in [0, 1), got {self.threshold}")
        if self.total_seats < 1:
            raise ValueError("total_seats must be positive")
        if self.tie_break not in ("lot", "lexicographic"):
            raise ValueError(f"unknown tie_break {self.tie_break!r}")


@dataclass(frozen=True)
class SeatResult:
    surviving: frozenset
    redistributed_shares: Mapping[str, float]
    seats: Mapping[str, int]


# quotients this close count as tied: renormalizing shares in floating
# point can split ties that are exact in rational terms
TIE_RTOL = 1e-12


def apply_threshold(shares: ShareDraw | Mapping[str, float], rules: ElectionRules):
    """Return ``(surviving, redistributed)`` for one share vector.

    A party survives if it is eligible and its share is at least the
    threshold. Survivor shares are renormalized to sum to one.
    """
    values = shares.shares if isinstance(shares, ShareDraw) else shares
    surviving = [p for p, s in values.items() if p in rules.eligible and s >= rules.threshold]
    total = sum(values[p] for p in surviving)
    if not surviving or total <= 0:
        raise DegenerateDrawError("no party passes the threshold")
    return frozenset(surviving), {p: values[p] / total for p in surviving}


def sainte_lague(shares: Mapping[str, float], total_seats: int,
                 rng: np.random.Generator | None = None) -> dict[str, int]:
    """Highest averages with divisors 1, 3, 5, ...

    Each seat goes to the party with the largest ``share / (2 * seats + 1)``.
    Ties (quotients equal up to ``TIE_RTOL``) are drawn by lot from ``rng``;
    without ``rng`` the party whose id sorts first wins.
    """
    parties = list(shares)
    if not parties:
        raise ValueError("need at least one party")
    votes = [float(shares[p]) for p in parties]
    seats = [0] * len(parties)
    for _ in range(total_seats):
        quotients = [v / (2 * s + 1) for v, s in zip(votes, seats)]
        best = max(quotients)
        tied = [i for i, q in enumerate(quotients) if q >= best * (1 - TIE_RTOL)]
        if len(tied) == 1:
            winner = tied[0]
        elif rng is None:
            winner = min(tied, key=lambda i: parties[i])
        else:
            winner = tied[int(rng.integers(len(tied)))]
        seats[winner] += 1
    return dict(zip(parties, seats))


def allocate(shares: ShareDraw | Mapping[str, float], rules: ElectionRules,
             rng: np.random.Generator | None = None) -> SeatResult:
    surviving, redistributed = apply_threshold(shares, rules)
    order = sorted(redistributed) if rules.tie_break == "lexicographic" else list(redistributed)
    if rules.tie_break == "lexicographic":
        rng = None
    seats = sainte_lague({p: redistributed[p] for p in order}, rules.total_seats, rng)
    values = shares.shares if isinstance(shares, ShareDraw) else shares
    all_seats = {p: seats.get(p, 0) for p in values}
    return SeatResult(surviving, redistributed, all_seats)


# --------------------------------------------------------------------------
# vectorized path
# --------------------------------------------------------------------------

def surviving_mask(shares: np.ndarray, eligible: np.ndarray, threshold: float) -> np.ndarray:
    """Boolean ``(m, P)`` mask of parties entering parliament."""
    return (shares >= threshold) & eligible[None, :]


def sainte_lague_batch(votes: np.ndarray, total_seats: int):
    """Allocate ``total_seats`` for every row of ``votes`` (nonnegative weights).

    Returns ``(seats, tied)`` where ``tied`` flags rows whose last awarded
    and first unawarded quotients coincide; those rows are not reliable
    and must be redone with :func:`sainte_lague`. Rows summing to zero are
    flagged as tied too.
    """
    votes = np.asarray(votes, dtype=float)
    m, _ = votes.shape
    sums = votes.sum(axis=1, keepdims=True)
    with np.errstate(invalid="ignore", divide="ignore"):
        v = votes / sums
    v = np.nan_to_num(v)
    # Webster rounding at divisor 1/S; corrected below
    seats = np.floor(v * total_seats + 0.5).astype(np.int64)
    seats[v == 0] = 0
    rows = np.arange(m)
    for _ in range(votes.shape[1] + 2):
        diff = seats.sum(axis=1) - total_seats
        if not diff.any():
            break
        under = diff < 0
        if under.any():
            q = v[under] / (2 * seats[under] + 1)
            seats[rows[under], q.argmax(axis=1)] += 1
        over = diff > 0
        if over.any():
            s = seats[over]
            with np.errstate(divide="ignore"):
                q = np.where(s > 0, v[over] / (2 * s - 1), np.inf)
            seats[rows[over], q.argmin(axis=1)] -= 1

    with np.errstate(divide="ignore"):
        last_in = np.where(seats > 0, v / (2 * seats - 1), np.inf).min(axis=1)
    first_out = (v / (2 * seats + 1)).max(axis=1)
    bad = ((seats.sum(axis=1) != total_seats) | ~(last_in > first_out * (1 + TIE_RTOL))
           | (sums[:, 0] <= 0))
    return seats, bad


@dataclass
class AllocationBatch:
    """Seats for a block of simulated elections (columns = party ids)."""

    party_ids: list
    surviving: np.ndarray
    seats: np.ndarray
    degenerate: np.ndarray


def allocate_batch(shares: np.ndarray, party_ids: Sequence[str], rules: ElectionRules,
                   tie_rng: Callable[[int], np.random.Generator] | None = None) -> AllocationBatch:
    """Vectorized :func:`allocate` over the rows of ``shares``.

    ``tie_rng(i)`` supplies the lot-drawing generator for row ``i``; it is
    only called for the rare rows with an exact tie.
    """
    eligible = np.array([p in rules.eligible for p in party_ids])
    surv = surviving_mask(shares, eligible, rules.threshold)
    votes = np.where(surv, shares, 0.0)
    degenerate = ~(votes.sum(axis=1) > 0)
    seats, bad = sainte_lague_batch(votes, rules.total_seats)
    seats[degenerate] = 0
    for i in np.flatnonzero(bad & ~degenerate):
        rng = tie_rng(int(i)) if (tie_rng is not None and rules.tie_break == "lot") else None
        idx = np.flatnonzero(surv[i])
        total = shares[i, idx].sum()
        red = {party_ids[j]: shares[i, j] / total for j in idx}
        if rules.tie_break == "lexicographic":
            red = dict(sorted(red.items()))
        result = sainte_lague(red, rules.total_seats, rng)
        seats[i] = [result.get(p, 0) for p in party_ids]
    return AllocationBatch(list(party_ids), surv & ~degenerate[:, None], seats, degenerate)
