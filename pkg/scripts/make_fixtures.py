"""Regenerate the synthetic poll series shipped in ``src/pollcast/data``.

The series are not the published polls. They interpolate a handful of
hand-set anchor points that follow the broad trends of the German federal
election campaigns of 2013 and 2017, add per-agency house effects and a
little integer jitter, and round to whole percent like the agencies do.

    python scripts/make_fixtures.py
"""

import csv
import datetime as dt
from pathlib import Path

import numpy as np

DATA = Path(__file__).resolve().parents[1] / "src" / "pollcast" / "data"

PARTIES_2013 = ["union", "spd", "greens", "fdp", "left", "pirates", "afd"]
ANCHORS_2013 = [
    ("2012-09-28", [36, 28, 13, 4, 8, 6, 0]),
    ("2013-01-15", [40, 25, 14, 4, 8, 3, 0]),
    ("2013-03-15", [41, 24, 14, 4, 8, 3, 0]),
    ("2013-04-20", [41, 23, 14, 5, 8, 3, 2]),
    ("2013-06-10", [41, 23, 13, 6, 8, 2, 2]),
    ("2013-07-10", [41, 22, 13, 5, 9, 2, 2]),
    ("2013-08-20", [40, 23, 11, 5, 9, 2, 3]),
    ("2013-09-20", [40, 26, 10, 5, 9, 2, 4]),
]

PARTIES_2017 = ["union", "spd", "greens", "fdp", "left", "afd"]
ANCHORS_2017 = [
    ("2016-10-01", [33, 22, 11, 6, 9, 14]),
    ("2017-01-15", [36, 21, 9, 6, 9, 13]),
    ("2017-02-20", [33, 31, 8, 6, 8, 10]),
    ("2017-04-10", [33, 31, 8, 6, 9, 9]),
    ("2017-06-15", [39, 24, 7, 8, 9, 7]),
    ("2017-08-20", [39, 23, 8, 9, 9, 8]),
    ("2017-09-22", [35, 22, 8, 9, 9, 12]),
]

# agency: (weekday of publication, every k weeks, typical n, house effects)
AGENCIES_2017 = {
    "Emnid": (6, 1, 1900, {}),
    "Forsa": (2, 1, 2500, {"union": 1, "afd": -1}),
    "INSA": (1, 1, 2000, {"union": -1, "afd": 1}),
    "Infratest dimap": (3, 2, 1500, {}),
    "Forschungsgruppe Wahlen": (4, 2, 1300, {"spd": 1, "afd": -1}),
    "Allensbach": (1, 4, 1400, {"fdp": 1, "afd": -1}),
    "GMS": (3, 4, 1000, {}),
}


def interpolate(anchors, day):
    days = [dt.date.fromisoformat(d).toordinal() for d, _ in anchors]
    values = np.array([v for _, v in anchors], dtype=float)
    return np.array([np.interp(day.toordinal(), days, values[:, j]) for j in range(values.shape[1])])


def finish_row(shares, rng, jitter=True):
    row = np.rint(shares + (rng.integers(-1, 2, size=shares.size) * (rng.random(shares.size) < 0.3)
                            if jitter else 0)).astype(int)
    row = np.maximum(row, 0)
    return row, 100 - row.sum()


def write(path, parties, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["date", "agency", "n", *parties, "others"])
        w.writerows(rows)


def forsa_2013():
    rng = np.random.default_rng(2013)
    last = dt.date(2013, 9, 20)
    rows = []
    for k in range(51, -1, -1):
        day = last - dt.timedelta(weeks=k)
        if k == 0:
            row, others = np.array(ANCHORS_2013[-1][1]), 4
        else:
            row, others = finish_row(interpolate(ANCHORS_2013, day), rng)
            if day < dt.date(2013, 4, 1):
                others += row[-1]
                row[-1] = 0
        if not 2 <= others <= 8:
            row[0] += others - 4
            others = 4
        size = 1995 if k == 0 else int(rng.integers(1900, 2600))
        rows.append([day.isoformat(), "Forsa", size, *row.tolist(), others])
    # AfD not reported separately before April 2013: leave the cell empty
    for r in rows:
        if r[0] < "2013-04-01":
            r[-2] = ""
    write(DATA / "forsa_2013.csv", PARTIES_2013, rows)


def pooled_2017():
    rng = np.random.default_rng(2017)
    start, stop = dt.date(2016, 10, 1), dt.date(2017, 9, 22)
    rows = []
    for agency, (weekday, every, n, house) in AGENCIES_2017.items():
        first = start + dt.timedelta(days=(weekday - start.weekday()) % 7)
        offset = int(rng.integers(0, every))
        day = first + dt.timedelta(weeks=offset)
        while day <= stop:
            shares = interpolate(ANCHORS_2017, day)
            for party, delta in house.items():
                shares[PARTIES_2017.index(party)] += delta
            row, others = finish_row(shares, rng)
            if not 3 <= others <= 7:
                row[0] += others - 5
                others = 5
            size = int(round(n * rng.uniform(0.85, 1.15)))
            rows.append([day.isoformat(), agency, size, *row.tolist(), others])
            day += dt.timedelta(weeks=every)
    rows.sort(key=lambda r: (r[0], r[1]))
    write(DATA / "polls_2017.csv", PARTIES_2017, rows)


if __name__ == "__main__":
    forsa_2013()
    pooled_2017()
