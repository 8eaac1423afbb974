"""Serialization of pooled samples, POE reports, densities and draws."""

from __future__ import annotations

import csv
import io
import json
from typing import Iterable, Sequence

import numpy as np

from .events import DensitySummary, PoeResult
from .polls import PooledSample

SERIES_COLUMNS = ("as_of", "event", "poe", "mc_stderr", "pooled_share", "n_eff", "skewed_poe")


def pooled_to_dict(pooled: PooledSample) -> dict:
    return {
        "as_of": pooled.as_of.isoformat(),
        "shares": dict(pooled.pooled_shares),
        "n_eff": pooled.n_eff,
        "rounding_precision": pooled.rounding_precision,
        "member_polls": [
            {
                "agency": m.agency,
                "published": m.published.isoformat(),
                "weight": m.weight,
                "n": m.sample_size,
            }
            for m in pooled.member_polls
        ],
    }


def poe_report(result: PoeResult, pooled: PooledSample) -> dict:
    pooled_part = pooled_to_dict(pooled)
    return {
        "as_of": pooled.as_of.isoformat(),
        "event": str(result.event),
        "n_sim": result.n_sim_total,
        "n_degenerate": result.n_degenerate,
        "poe": result.poe,
        "mc_stderr": result.mc_stderr,
        "pooled": {k: pooled_part[k] for k in ("shares", "n_eff", "member_polls")},
    }


def dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def density_csv(summary: DensitySummary) -> str:
    rows = (
        (f"{x:.6f}", f"{d:.6f}", int(flag))
        for x, d, flag in zip(summary.grid, summary.density, summary.in_event)
    )
    return _csv_text(("x", "density", "in_event"), rows)


def draws_csv(shares: np.ndarray, party_ids: Sequence[str]) -> str:
    rows = ((i, *(f"{v:.6f}" for v in row)) for i, row in enumerate(shares))
    return _csv_text(("sim_index", *party_ids), rows)


def series_csv(rows: Iterable[dict]) -> str:
    def fmt(row):
        out = []
        for col in SERIES_COLUMNS:
            v = row[col]
            if v is None:
                out.append("")
            elif isinstance(v, float):
                out.append(f"{v:.6f}")
            else:
                out.append(str(v))
        return out

    return _csv_text(SERIES_COLUMNS, (fmt(r) for r in rows))
