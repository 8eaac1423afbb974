"""Poll records, file ingestion and pooling of correlated polls.

Polls from several agencies are combined into a single pseudo-sample. Only the
latest poll of each agency inside the pooling window is used, and the summed
sample size is discounted for the correlation between agencies through an
effective sample size.
"""

from __future__ import annotations

import csv
import datetime as dt
import io
import json
import math
import re
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    ConfigurationError,
    NoPollsError,
    PollParseError,
    PollValidationError,
)

if TYPE_CHECKING:
    from .config import ElectionConfig

_RESERVED = re.compile(r"[\s+:]")

# bounds on the raw row total (fractions) before renormalization
ROW_SUM_MIN = 0.95
ROW_SUM_MAX = 1.05


@dataclass(frozen=True)
class Party:
    id: str
    display_name: str = ""

    def __post_init__(self):
        if not self.id or _RESERVED.search(self.id):
            raise ConfigurationError(
                f"invalid party id {self.id!r}: must be non-empty and "
                "contain no whitespace, '+' or ':'"
            )
        if not self.display_name:
            object.__setattr__(self, "display_name", self.id)


@dataclass(frozen=True)
class Poll:
    agency: str
    published: dt.date
    sample_size: float
    shares: Mapping[str, float]
    rounding_precision: float = 0.01

    def __post_init__(self):
        if not self.sample_size > 0:
            raise PollValidationError(f"sample size must be positive, got {self.sample_size}")
        if not self.rounding_precision > 0:
            raise PollValidationError("rounding precision must be positive")
        total = math.fsum(self.shares.values())
        if abs(total - 1.0) > 1e-9:
            raise PollValidationError(f"shares sum to {total!r}, expected 1")

    def share_vector(self, party_ids: Sequence[str]) -> np.ndarray:
        return np.array([self.shares[p] for p in party_ids], dtype=float)


@dataclass(frozen=True)
class PoolingConfig:
    window_days: int = 14
    half_weight_window_days: int | None = None
    rho: float = 0.5

    def __post_init__(self):
        if self.window_days < 1:
            raise ConfigurationError("window_days must be a positive integer")
        if self.half_weight_window_days is not None and (
            self.half_weight_window_days <= self.window_days
        ):
            raise ConfigurationError("half_weight_window_days must exceed window_days")
        if not 0.0 <= self.rho < 1.0:
            raise ConfigurationError(f"rho must lie in [0, 1), got {self.rho}")


@dataclass(frozen=True)
class MemberPoll:
    agency: str
    published: dt.date
    weight: float
    sample_size: float


@dataclass(frozen=True)
class PooledSample:
    as_of: dt.date
    member_polls: tuple[MemberPoll, ...]
    pooled_shares: Mapping[str, float]
    n_eff: float
    rounding_precision: float

    @property
    def party_ids(self) -> list[str]:
        return list(self.pooled_shares)

    def share_vector(self, party_ids: Sequence[str] | None = None) -> np.ndarray:
        ids = self.party_ids if party_ids is None else party_ids
        return np.array([self.pooled_shares[p] for p in ids], dtype=float)


# --------------------------------------------------------------------------
# ingestion
# --------------------------------------------------------------------------

_FIXED = ("date", "agency", "n")


def _resolve_columns(names: Iterable[str], config: ElectionConfig) -> dict[str, str]:
    mapping = {}
    for name in names:
        if name.strip().lower() in _FIXED:
            continue
        mapping[name] = config.resolve_party(name.strip())
    missing = set(config.party_ids) - set(mapping.values())
    if missing:
        raise ConfigurationError(f"poll data lacks columns for parties: {sorted(missing)}")
    return mapping


def _to_float(value, what: str, line: int) -> float:
    if value is None or (isinstance(value, str) and not value.strip()):
        return 0.0
    try:
        return float(value)
    except (TypeError, ValueError):
        raise PollParseError(f"{what}: cannot read {value!r} as a number", line) from None


def _build_poll(record: Mapping, columns: Mapping[str, str], config: ElectionConfig,
                line: int) -> Poll:
    lowered = {k.strip().lower(): v for k, v in record.items() if k is not None}
    for key in _FIXED:
        if key not in lowered:
            raise PollParseError(f"missing field {key!r}", line)
    try:
        published = dt.date.fromisoformat(str(lowered["date"]).strip())
    except ValueError:
        raise PollParseError(f"bad date {lowered['date']!r}", line) from None
    agency = str(lowered["agency"]).strip()
    if not agency:
        raise PollParseError("empty agency", line)
    n = _to_float(lowered["n"], "n", line)
    if not n > 0:
        raise PollValidationError(f"sample size must be positive, got {n}", line)

    raw = {}
    for col, pid in columns.items():
        pct = _to_float(record[col], col, line)
        share = pct / 100.0
        if not 0.0 <= share <= 1.0:
            raise PollValidationError(f"share for {col} outside [0, 100]: {pct}", line)
        raw[pid] = raw.get(pid, 0.0) + share
    total = math.fsum(raw.values())
    if not ROW_SUM_MIN <= total <= ROW_SUM_MAX:
        raise PollValidationError(f"row sums to {100 * total:.2f}%", line)
    shares = normalize_shares(raw, config.others_id)
    return Poll(agency, published, n, shares, config.rounding_precision)


def normalize_shares(raw: Mapping[str, float], others_id: str) -> dict[str, float]:
    """Make a share map sum to one.

    A shortfall (typical for rows rounded down) is booked to ``others_id``;
    an excess is removed by proportional rescaling.
    """
    shares = dict(raw)
    total = math.fsum(shares.values())
    if total < 1.0:
        shares[others_id] = shares.get(others_id, 0.0) + (1.0 - total)
    elif total > 1.0:
        shares = {k: v / total for k, v in shares.items()}
    return shares


def parse_polls(source, config: ElectionConfig, fmt: str | None = None) -> list[Poll]:
    """Read polls from a CSV or JSON byte/text stream.

    Party columns hold percentages. ``fmt`` is ``"csv"`` or ``"json"``; when
    omitted it is sniffed from the first non-blank character. The result is
    sorted by publication date, newest first; rows sharing a date keep file
    order.
    """
    data = source.read() if hasattr(source, "read") else source
    if isinstance(data, bytes):
        data = data.decode("utf-8-sig")
    if fmt is None:
        fmt = "json" if data.lstrip()[:1] in ("[", "{") else "csv"

    polls = []
    if fmt == "json":
        try:
            records = json.loads(data)
        except json.JSONDecodeError as exc:
            raise PollParseError(f"invalid JSON: {exc.msg}", exc.lineno) from None
        if not isinstance(records, list):
            raise PollParseError("JSON poll data must be an array of objects")
        if records:
            columns = _resolve_columns(records[0].keys(), config)
        for i, rec in enumerate(records, start=1):
            if not isinstance(rec, dict):
                raise PollParseError("entry is not an object", i)
            if set(rec) != set(records[0]):
                raise PollParseError("entry fields differ from the first entry", i)
            polls.append(_build_poll(rec, columns, config, i))
    elif fmt == "csv":
        reader = csv.DictReader(io.StringIO(data))
        if reader.fieldnames is None:
            return []
        columns = _resolve_columns(reader.fieldnames, config)
        for rec in reader:
            line = reader.line_num
            if None in rec or any(v is None for v in rec.values()):
                raise PollParseError("wrong number of fields", line)
            polls.append(_build_poll(rec, columns, config, line))
    else:
        raise ValueError(f"unknown poll format {fmt!r}")

    # stable sort keeps file order among equal dates
    polls.sort(key=lambda p: p.published, reverse=True)
    return polls


def read_polls(path, config: ElectionConfig) -> list[Poll]:
    fmt = "json" if str(path).lower().endswith(".json") else None
    with open(path, "rb") as fh:
        return parse_polls(fh, config, fmt)


# --------------------------------------------------------------------------
# window selection and pooling
# --------------------------------------------------------------------------

def select_window(polls: Sequence[Poll], as_of: dt.date,
                  config: PoolingConfig = PoolingConfig()) -> list[tuple[Poll, float]]:
    """Latest poll per agency published on or before ``as_of``, with its weight.

    Polls at most ``window_days`` old get weight 1, polls inside the optional
    half-weight window get 0.5, anything older is dropped. When an agency
    has several polls on its latest date the one appearing last in ``polls``
    wins.
    """
    latest: dict[str, Poll] = {}
    for poll in polls:
        if poll.published > as_of:
            continue
        key = poll.agency.casefold()
        current = latest.get(key)
        if current is None or poll.published >= current.published:
            latest[key] = poll

    limit = config.half_weight_window_days or config.window_days
    selected = []
    for poll in latest.values():
        age = (as_of - poll.published).days
        if age <= config.window_days:
            selected.append((poll, 1.0))
        elif age <= limit:
            selected.append((poll, 0.5))
    selected.sort(key=lambda pw: (pw[0].published, pw[0].agency.casefold()), reverse=True)
    return selected


def effective_sample_size(sizes: Sequence[float], rho: float) -> float:
    """Sample size of a simple random sample as informative as the pooled polls.

    With pairwise correlation ``rho`` between the polls' counts the pooled
    proportion has variance theta(1-theta) * S / N**2, where N is the total
    sample size and S the sum over all i, j of rho_ij * sqrt(n_i n_j). The
    effective size is therefore N**2 / S.
    """
    n = np.asarray(sizes, dtype=float)
    if n.ndim != 1 or n.size == 0:
        raise PollValidationError("sizes must be a non-empty sequence")
    if np.any(~(n > 0)):
        raise PollValidationError("sample sizes must be positive")
    if not 0.0 <= rho < 1.0:
        raise PollValidationError(f"rho must lie in [0, 1), got {rho}")
    total = n.sum()
    root = np.sqrt(n)
    # sum_ij rho_ij sqrt(n_i n_j) with rho_ii = 1
    cross = (1.0 - rho) * total + rho * root.sum() ** 2
    return float(total * total / cross)


def pool(selected: Sequence[tuple[Poll, float]], config: PoolingConfig = PoolingConfig(),
         as_of: dt.date | None = None) -> PooledSample:
    if not selected:
        raise NoPollsError("no polls in window")
    party_ids = list(selected[0][0].shares)
    sizes = np.array([w * p.sample_size for p, w in selected])
    shares = np.array([p.share_vector(party_ids) for p, _ in selected])
    if np.all(shares == shares[0]):
        pooled = shares[0]
    else:
        pooled = sizes @ shares / sizes.sum()
    if as_of is None:
        as_of = max(p.published for p, _ in selected)
    members = tuple(MemberPoll(p.agency, p.published, w, p.sample_size) for p, w in selected)
    return PooledSample(
        as_of=as_of,
        member_polls=members,
        pooled_shares=dict(zip(party_ids, pooled.tolist())),
        n_eff=effective_sample_size(sizes, config.rho),
        rounding_precision=max(p.rounding_precision for p, _ in selected),
    )


def pool_polls(polls: Sequence[Poll], as_of: dt.date | None = None,
               config: PoolingConfig = PoolingConfig()) -> PooledSample:
    """Select the window for ``as_of`` and pool it in one step."""
    if not polls:
        raise NoPollsError("no polls available")
    if as_of is None:
        as_of = max(p.published for p in polls)
    return pool(select_window(polls, as_of, config), config, as_of)


def publication_dates(polls: Iterable[Poll]) -> list[dt.date]:
    return sorted({p.published for p in polls})
