#!/usr/bin/env python3
"""Regenerates data/synthetic/*.csv. Output is deterministic."""

import math
import random
import sys
from pathlib import Path

YEARS = list(range(2000, 2024))
SOURCES = ["coal", "oil", "gas", "nuclear", "hydro", "solar", "wind", "bioenergy"]


def lerp(a, b, t):
    return a + (b - a) * t


def emissions(rng):
    n = len(YEARS)
    out = {}

    # Steady compound growth with small noise, pinned endpoints.
    g = (128.7 / 68.4) ** (1 / 23)
    out["NGA"] = [68.4 * g**i * (1 + rng.gauss(0, 0.015)) for i in range(n)]
    out["NGA"][0], out["NGA"][-1] = 68.4, 128.7

    # Rise to a 2007 peak, then decline.
    usa = []
    for i, y in enumerate(YEARS):
        if y <= 2007:
            v = lerp(5743, 6134, i / 7)
        else:
            v = lerp(6134, 4766, (y - 2007) / 16)
        usa.append(v + (rng.gauss(0, 60) if y not in (2000, 2007, 2023) else 0))
    usa[YEARS.index(2009)] -= 250  # recession dip
    usa[YEARS.index(2020)] -= 300
    out["USA"] = usa

    # Fast growth that slows after 2013.
    chn = []
    for i, y in enumerate(YEARS):
        t = i / 23
        v = 3391 + (11397 - 3391) * (1 - math.exp(-2.2 * t)) / (1 - math.exp(-2.2))
        chn.append(v * (1 + (rng.gauss(0, 0.01) if 0 < i < n - 1 else 0)))
    out["CHN"] = chn

    # Moderate growth with a mid-2010s bump.
    bra = []
    for i, y in enumerate(YEARS):
        v = lerp(319, 478, i / 23) + 35 * math.exp(-((y - 2014) ** 2) / 6)
        bra.append(v + (rng.gauss(0, 6) if 0 < i < n - 1 else 0))
    out["BRA"] = bra

    # Flat and noisy inside 1500-1800.
    rus = [1592]
    for y in YEARS[1:-1]:
        rus.append(min(1790, max(1510, 1660 + rng.gauss(0, 45))))
    rus.append(1732)
    out["RUS"] = rus
    return out


# (start shares, end shares) over SOURCES.
MIX = {
    "NGA": ([0.0, 0.62, 0.232, 0.0, 0.143, 0.0, 0.0, 0.005],
            [0.0, 0.50, 0.295, 0.0, 0.163, 0.012, 0.0, 0.030]),
    "USA": ([0.22, 0.33, 0.18, 0.19, 0.04, 0.0, 0.0, 0.04],
            [0.08, 0.30, 0.30, 0.09, 0.04, 0.07, 0.10, 0.02]),
    "CHN": ([0.70, 0.18, 0.044, 0.008, 0.06, 0.0, 0.001, 0.007],
            [0.50, 0.10, 0.047, 0.046, 0.081, 0.094, 0.132, 0.0]),
    "BRA": ([0.05, 0.35, 0.083, 0.02, 0.421, 0.0, 0.0, 0.076],
            [0.01, 0.06, 0.023, 0.02, 0.50, 0.005, 0.103, 0.279]),
    "RUS": ([0.18, 0.22, 0.496, 0.04, 0.064, 0.0, 0.0, 0.0],
            [0.12, 0.18, 0.34, 0.185, 0.138, 0.019, 0.019, 0.0]),
}

POPULATION = {
    "NGA": (124.4e6, 218.1e6),
    "USA": (282.2e6, 336.8e6),
    "CHN": (1262.6e6, 1410.7e6),
    "BRA": (175.3e6, 216.4e6),
    "RUS": (146.6e6, 144.2e6),
}


def main(out_dir):
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = random.Random(20240601)
    em = emissions(rng)

    with open(out_dir / "emissions.csv", "w", newline="\n") as f:
        f.write("country,year,emissions_mt\n")
        for c in sorted(em):
            for y, v in zip(YEARS, em[c]):
                f.write(f"{c},{y},{v:.1f}\n")

    with open(out_dir / "energy.csv", "w", newline="\n") as f:
        f.write("country,year,source,value\n")
        for c in sorted(MIX):
            a, b = MIX[c]
            for i, y in enumerate(YEARS):
                t = i / 23
                raw = [max(0.0, lerp(x, z, t) * (1 + rng.gauss(0, 0.02))) for x, z in zip(a, b)]
                total = sum(raw)
                shares = [round(r / total, 4) for r in raw]
                for s, v in zip(SOURCES, shares):
                    f.write(f"{c},{y},{s},{v:.4f}\n")

    with open(out_dir / "population.csv", "w", newline="\n") as f:
        f.write("country,year,population\n")
        for c in sorted(POPULATION):
            p0, p1 = POPULATION[c]
            for i, y in enumerate(YEARS):
                f.write(f"{c},{y},{round(p0 * (p1 / p0) ** (i / 23))}\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "data" / "synthetic")
