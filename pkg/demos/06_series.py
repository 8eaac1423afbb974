"""A POE time series over a campaign."""
# %%
import time
from pathlib import Path

import pollcast as pc

DATA = Path(pc.__file__).parent / "data"
config = pc.ElectionConfig.load(DATA / "btw2017_config.json")
polls = pc.read_polls(DATA / "polls_2017.csv", config)
events = [pc.Majority(("union", "fdp")), pc.ThresholdPass("fdp")]

# %%
# Evaluate weekly-ish: every tenth publication date plus the last one.
dates = pc.publication_dates(polls)
dates = dates[::10] + ([dates[-1]] if (len(dates) - 1) % 10 else [])
start = time.perf_counter()
rows = []
for cast in pc.nowcast_series(polls, config, events, sim=pc.SimulationConfig(2_000, 1),
                              dates=dates):
    rows.extend(cast.series_rows(config))
print(f"{len(dates)} dates in {time.perf_counter() - start:.1f}s")

# %%
for r in rows:
    if r["event"] == "majority:union+fdp":
        print(f"  {r['as_of']}  share {100 * r['pooled_share']:5.1f}%  poe {r['poe']:.3f}")

# %%
print(pc.series_csv(rows)[:300])
