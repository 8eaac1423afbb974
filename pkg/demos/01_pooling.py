"""Pooling polls into one effective sample."""
# %%
from pathlib import Path

import pollcast as pc

DATA = Path(pc.__file__).parent / "data"
config = pc.ElectionConfig.load(DATA / "btw2017_config.json")
polls = pc.read_polls(DATA / "polls_2017.csv", config)
print(len(polls), "polls from", polls[-1].published, "to", polls[0].published)

# %%
# Two polls of 1500 and 2000 respondents, correlated at rho = 0.5, carry
# less information than 3500 independent interviews.
print("n_eff:", round(pc.effective_sample_size([1500, 2000], 0.5)))

# %%
# Latest poll per agency within a 14-day window.
pooled = pc.pool_polls(polls, config=config.pooling)
for m in pooled.member_polls:
    print(f"  {m.agency:<12} {m.published}  n={m.sample_size:.0f}")
print("pooled n_eff:", round(pooled.n_eff))
for p, s in pooled.pooled_shares.items():
    print(f"  {config.display_name(p):<8} {100 * s:5.1f}%")

# %%
# A shorter window keeps fewer agencies.
short = pc.pool_polls(polls, config=config.with_pooling(window_days=3).pooling)
print("3-day window:", [m.agency for m in short.member_polls], round(short.n_eff))
