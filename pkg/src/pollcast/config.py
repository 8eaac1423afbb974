"""Election configuration: party list, electoral rules and pooling settings."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigurationError
from .polls import Party, PoolingConfig

TIE_BREAKS = ("lot", "lexicographic")


@dataclass(frozen=True)
class ElectionConfig:
    """Everything that describes one election independent of the polls.

    ``others_id`` names the pseudo-party collecting all minor parties; it is
    part of every share vector but never eligible for seats.
    """

    parties: tuple[Party, ...]
    others_id: str = "others"
    threshold: float = 0.05
    total_seats: int = 598
    pooling: PoolingConfig = field(default_factory=PoolingConfig)
    rounding_precision: float = 0.01
    tie_break: str = "lot"

    def __post_init__(self):
        ids = [p.id for p in self.parties]
        folded = [i.casefold() for i in ids]
        if len(set(folded)) != len(folded):
            raise ConfigurationError(f"duplicate party ids in {ids}")
        if self.others_id not in ids:
            raise ConfigurationError(f"'others' party {self.others_id!r} missing from party list")
        if len(ids) < 2:
            raise ConfigurationError("need at least one eligible party besides 'others'")
        if not 0.0 <= self.threshold < 1.0:
            raise ConfigurationError(f"threshold must lie in [0, 1), got {self.threshold}")
        if int(self.total_seats) != self.total_seats or self.total_seats < 1:
            raise ConfigurationError("total_seats must be a positive integer")
        if not 0.0 < self.rounding_precision <= 0.02:
            raise ConfigurationError("rounding_precision must lie in (0, 0.02]")
        if self.tie_break not in TIE_BREAKS:
            raise ConfigurationError(f"tie_break must be one of {TIE_BREAKS}")

    @property
    def party_ids(self) -> list[str]:
        return [p.id for p in self.parties]

    @property
    def eligible_ids(self) -> list[str]:
        return [p.id for p in self.parties if p.id != self.others_id]

    def resolve_party(self, name: str) -> str:
        """Map a party id or display name (case-insensitive) to its id."""
        key = name.casefold()
        for p in self.parties:
            if p.id.casefold() == key:
                return p.id
        for p in self.parties:
            if p.display_name.casefold() == key:
                return p.id
        raise ConfigurationError(f"unknown party {name!r}")

    def display_name(self, party_id: str) -> str:
        return next(p.display_name for p in self.parties if p.id == party_id)

    def rules(self):
        from .apportionment import ElectionRules

        return ElectionRules(
            threshold=self.threshold,
            total_seats=int(self.total_seats),
            eligible=frozenset(self.eligible_ids),
            tie_break=self.tie_break,
        )

    def with_pooling(self, **changes) -> ElectionConfig:
        from dataclasses import replace

        return replace(self, pooling=replace(self.pooling, **changes))

    @classmethod
    def from_dict(cls, data: dict) -> ElectionConfig:
        try:
            parties = tuple(
                Party(p["id"], p.get("display_name", "")) if isinstance(p, dict) else Party(p)
                for p in data["parties"]
            )
        except (KeyError, TypeError) as exc:
            raise ConfigurationError(f"bad party list: {exc}") from None
        pooling = data.get("pooling", {})
        known = {"parties", "others", "threshold", "total_seats", "pooling",
                 "rounding_precision", "tie_break"}
        unknown = set(data) - known
        if unknown:
            raise ConfigurationError(f"unknown configuration keys: {sorted(unknown)}")
        try:
            pooling_cfg = PoolingConfig(**pooling)
        except TypeError as exc:
            raise ConfigurationError(f"bad pooling section: {exc}") from None
        return cls(
            parties=parties,
            others_id=data.get("others", "others"),
            threshold=float(data.get("threshold", 0.05)),
            total_seats=data.get("total_seats", 598),
            pooling=pooling_cfg,
            rounding_precision=float(data.get("rounding_precision", 0.01)),
            tie_break=data.get("tie_break", "lot"),
        )

    @classmethod
    def load(cls, path) -> ElectionConfig:
        text = Path(path).read_text(encoding="utf-8")
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"{path}: invalid JSON ({exc.msg})") from None
        return cls.from_dict(data)
