"""Seat-share densities: bimodal near the threshold, unimodal away from it."""
# %%
import io

import pollcast as pc

config = pc.ElectionConfig.load(pc.__path__[0] + "/data/btw2013_config.json")
rules = config.rules()
header = "date,agency,n,union,spd,greens,fdp,left,pirates,afd,others\n"
event = pc.Majority(("union", "fdp"))


def summary(row):
    polls = pc.parse_polls(io.StringIO(header + row), config)
    pooled = pc.pool_polls(polls, config=config.pooling)
    run = pc.run_simulation(pooled, rules, sim=pc.SimulationConfig(10_000, seed=0))
    return pc.density_summary(event, run)


def sketch(s, width=60, rows=12):
    """Crude text ridgeline: one row per bin of the grid."""
    step = len(s.grid) // rows
    top = s.density.max()
    for i in range(0, len(s.grid), step):
        bar = "#" * int(width * s.density[i] / top)
        print(f"  {s.grid[i]:.3f} {'*' if s.in_event[i] else ' '} {bar}")


# %%
fdp5 = summary("2013-09-20,Forsa,1995,40,26,10,5,9,2,4,4\n")
print("FDP 5%: maxima", fdp5.local_maxima(), " mass above 50%:", fdp5.highlighted_mass)
sketch(fdp5)

# %%
fdp8 = summary("2013-09-20,Forsa,1995,40,26,10,8,9,2,2,3\n")
print("FDP 8%: maxima", fdp8.local_maxima(), " mass above 50%:", fdp8.highlighted_mass)
sketch(fdp8)

# %%
# A stretched probability axis separates values near 50%.
for p in (0.01, 0.1, 0.26, 0.5, 0.9):
    print(f"  {p:4.2f} -> {pc.skew_axis(p):.3f}")
