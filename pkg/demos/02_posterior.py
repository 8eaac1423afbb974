"""Posterior draws of vote shares."""
# %%
import io

import numpy as np

import pollcast as pc

config = pc.ElectionConfig.load(pc.__path__[0] + "/data/btw2013_config.json")
csv = ("date,agency,n,union,spd,greens,fdp,left,pirates,afd,others\n"
       "2013-09-20,Forsa,1995,40,26,10,5,9,2,4,4\n")
pooled = pc.pool_polls(pc.parse_polls(io.StringIO(csv), config), config=config.pooling)

# %%
# Dirichlet parameters: pooled share times n_eff plus a Jeffreys prior of 1/2.
spec = pc.build_posterior(pooled, pooled.pooled_shares)
print({p: round(a, 1) for p, a in spec.params.items()})

# %%
# Each draw first spreads the published shares over their rounding interval
# (+-0.5 points), then samples from the Dirichlet.
draws = pc.simulate_array(pooled, sim=pc.SimulationConfig(n_sim=10_000, seed=1))
fdp = draws[:, pooled.party_ids.index("fdp")]
print(f"FDP mean {fdp.mean():.4f}, sd {fdp.std():.4f}, P(>= 5%) {np.mean(fdp >= 0.05):.3f}")

# %%
# Draw i depends only on (seed, i): longer runs extend shorter ones and
# thread count does not matter.
short = pc.simulate_array(pooled, sim=pc.SimulationConfig(100, seed=1))
threaded = pc.simulate_array(pooled, sim=pc.SimulationConfig(10_000, seed=1, workers=4))
print("prefix:", np.array_equal(short, draws[:100]), " threads:", np.array_equal(threaded, draws))
