"""Threshold, redistribution and Sainte-Lague seats."""
# %%
import pollcast as pc

config = pc.ElectionConfig.load(pc.__path__[0] + "/data/btw2013_config.json")
rules = config.rules()
table1 = {"union": .40, "spd": .26, "greens": .10, "fdp": .05, "left": .09,
          "pirates": .02, "afd": .04, "others": .04}

# %%
# Parties under 5% drop out; the rest are rescaled to 100%.
surviving, shares = pc.apply_threshold(table1, rules)
for p in sorted(shares, key=shares.get, reverse=True):
    print(f"  {p:<7} {100 * shares[p]:6.2f}%")

# %%
result = pc.allocate(table1, rules)
seats = {p: s for p, s in result.seats.items() if s}
print(seats, "total", sum(seats.values()))
print("Union + FDP:", seats["union"] + seats["fdp"], "of", rules.total_seats)

# %%
# Without the FDP the Union alone is short of a majority; with FDP at 4.9%
# the seat picture changes completely.
near = dict(table1, fdp=.049, others=.041)
print({p: s for p, s in pc.allocate(near, rules).seats.items() if s})

# %%
print(pc.sainte_lague({"a": .5, "b": .3, "c": .2}, 10))
