"""Probabilities of events."""
# %%
import io

import pollcast as pc

config = pc.ElectionConfig.load(pc.__path__[0] + "/data/btw2013_config.json")
csv = ("date,agency,n,union,spd,greens,fdp,left,pirates,afd,others\n"
       "2013-09-20,Forsa,1995,40,26,10,5,9,2,4,4\n")
pooled = pc.pool_polls(pc.parse_polls(io.StringIO(csv), config), config=config.pooling)
rules = config.rules()

# %%
# One simulation run answers many questions.
run = pc.run_simulation(pooled, rules, sim=pc.SimulationConfig(10_000, seed=42))
for expr in ["majority:union+fdp", "majority:union", "majority:spd+greens+left",
             "threshold:fdp", "threshold:afd", "rank:left:3", "rank:greens:3"]:
    res = pc.poe_from_run(pc.parse_event(expr, config.party_ids), run)
    print(f"  {expr:<26} {res.poe:6.3f} +- {res.mc_stderr:.3f}")

# %%
# The Union-FDP majority hinges on the FDP clearing the threshold.
both = pc.poe_from_run(pc.Majority(("union", "fdp")), run, keep_indicators=True)
fdp_in = pc.poe_from_run(pc.ThresholdPass("fdp"), run, keep_indicators=True)
print("P(majority | FDP in) =", round(both.indicators[fdp_in.indicators].mean(), 3))
print("P(majority | FDP out) =", round(both.indicators[~fdp_in.indicators].mean(), 3))
