#!/usr/bin/env python3
"""Regenerates the bundled reference fixtures under data/.

apple_quarterly_income.csv holds Apple's reported quarterly net income
(USD million) dated at calendar quarter ends, 2009-03-31 .. 2023-12-31.

aapl_daily_close.csv is a synthetic stand-in for the split-adjusted AAPL
daily close. It lives on the NYSE trading calendar for 2009-01-02 ..
2023-12-29 (3774 sessions). Prices follow a log-linear path through
approximate quarter-end closes with a seeded Brownian-bridge perturbation,
so the fixture is reproducible but is NOT the actual market record.

Usage: python3 tools/make_fixtures.py [outdir]
"""
import datetime as dt
import math
import random
import sys
from pathlib import Path

INCOME = [
    1620, 1230, 2530, 3380,
    3074, 3253, 4308, 6004,
    5987, 7308, 6623, 13064,
    11622, 8824, 8223, 13078,
    9547, 6900, 7512, 13072,
    10223, 7748, 8467, 18024,
    13569, 10677, 11124, 18361,
    10516, 7796, 9014, 17891,
    11029, 8717, 10714, 20065,
    13822, 11519, 14125, 19965,
    11561, 10044, 13686, 22236,
    11249, 11253, 12673, 28755,
    23630, 21744, 20551, 34630,
    25010, 19442, 20721, 29998,
    24160, 19881, 22956, 33916,
]

# Approximate split-adjusted closes at each calendar quarter end.
QUARTER_CLOSE = [
    3.75, 5.09, 6.62, 7.53,
    8.39, 8.98, 10.13, 11.52,
    12.45, 11.99, 13.62, 14.46,
    21.41, 20.86, 23.82, 19.01,
    15.81, 14.16, 17.03, 20.04,
    19.17, 23.23, 25.19, 27.59,
    31.11, 31.36, 27.58, 26.32,
    27.25, 23.90, 28.26, 28.95,
    35.92, 36.00, 38.53, 42.31,
    41.95, 46.28, 56.44, 39.44,
    47.49, 49.48, 55.99, 73.41,
    63.57, 91.20, 115.81, 132.69,
    122.15, 136.96, 141.50, 177.57,
    174.61, 136.72, 138.20, 129.93,
    164.90, 193.97, 171.21, 192.53,
]
FIRST_CLOSE = 3.24
DAILY_VOL = 0.016
SEED = 20090102


def easter(year):
    a = year % 19
    b, c = divmod(year, 100)
    d, e = divmod(b, 4)
    f = (b + 8) // 25
    g = (b - f + 1) // 3
    h = (19 * a + b - d - g + 15) % 30
    i, k = divmod(c, 4)
    l = (32 + 2 * e + 2 * i - h - k) % 7
    m = (a + 11 * h + 22 * l) // 451
    month, day = divmod(h + l - 7 * m + 114, 31)
    return dt.date(year, month, day + 1)


def nth_weekday(year, month, weekday, n):
    d = dt.date(year, month, 1)
    d += dt.timedelta((weekday - d.weekday()) % 7)
    return d + dt.timedelta(7 * (n - 1))


def last_weekday(year, month, weekday):
    nxt = dt.date(year + (month == 12), month % 12 + 1, 1)
    d = nxt - dt.timedelta(1)
    return d - dt.timedelta((d.weekday() - weekday) % 7)


def observed(d):
    if d.weekday() == 5:
        return d - dt.timedelta(1)
    if d.weekday() == 6:
        return d + dt.timedelta(1)
    return d


def nyse_holidays(year):
    h = set()
    new_year = dt.date(year, 1, 1)
    if new_year.weekday() == 6:
        h.add(new_year + dt.timedelta(1))
    elif new_year.weekday() < 5:
        h.add(new_year)
    h.add(nth_weekday(year, 1, 0, 3))
    h.add(nth_weekday(year, 2, 0, 3))
    h.add(easter(year) - dt.timedelta(2))
    h.add(last_weekday(year, 5, 0))
    if year >= 2022:
        h.add(observed(dt.date(year, 6, 19)))
    h.add(observed(dt.date(year, 7, 4)))
    h.add(nth_weekday(year, 9, 0, 1))
    h.add(nth_weekday(year, 11, 3, 4))
    h.add(observed(dt.date(year, 12, 25)))
    return h


SPECIAL_CLOSURES = {dt.date(2012, 10, 29), dt.date(2012, 10, 30), dt.date(2018, 12, 5)}


def trading_days(start, end):
    closed = set(SPECIAL_CLOSURES)
    for y in range(start.year, end.year + 1):
        closed |= nyse_holidays(y)
    d, out = start, []
    while d <= end:
        if d.weekday() < 5 and d not in closed:
            out.append(d)
        d += dt.timedelta(1)
    return out


def quarter_ends():
    return [dt.date(y, m, d) for y in range(2009, 2024)
            for m, d in ((3, 31), (6, 30), (9, 30), (12, 31))]


def synth_prices(days):
    anchors = [(days[0], FIRST_CLOSE)]
    for q, close in zip(quarter_ends(), QUARTER_CLOSE):
        last = max(d for d in days if d <= q)
        anchors.append((last, close))
    rng = random.Random(SEED)
    index = {d: i for i, d in enumerate(days)}
    out = [0.0] * len(days)
    for (d0, p0), (d1, p1) in zip(anchors, anchors[1:]):
        i0, i1 = index[d0], index[d1]
        steps = i1 - i0
        walk = [0.0]
        for _ in range(steps):
            walk.append(walk[-1] + rng.gauss(0.0, DAILY_VOL))
        for k in range(steps + 1):
            t = k / steps
            bridge = walk[k] - t * walk[-1]
            out[i0 + k] = math.exp((1 - t) * math.log(p0) + t * math.log(p1) + bridge)
    return out


def main():
    outdir = Path(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "data")
    outdir.mkdir(parents=True, exist_ok=True)
    with open(outdir / "apple_quarterly_income.csv", "w", newline="\n") as f:
        f.write("date,value\n")
        for d, v in zip(quarter_ends(), INCOME):
            f.write(f"{d.isoformat()},{v}\n")
    days = trading_days(dt.date(2009, 1, 2), dt.date(2023, 12, 29))
    prices = synth_prices(days)
    with open(outdir / "aapl_daily_close.csv", "w", newline="\n") as f:
        f.write("date,close\n")
        for d, p in zip(days, prices):
            f.write(f"{d.isoformat()},{p:.4f}\n")
    print(f"{len(INCOME)} income rows, {len(days)} price rows -> {outdir}")


if __name__ == "__main__":
    main()
