#!/usr/bin/env python3
"""Generate the synthetic honey mineral fixture used by the test suite.

Same schema as the public dataset (sample type, botanical origin, region,
adulteration level, 12 element columns, "ND" for not detected). Values are
drawn from class-dependent log-normal profiles; they are not real
measurements.
"""
import csv
import sys

import numpy as np

ELEMENTS = ["Al", "B", "Ba", "Ca", "Fe", "K", "Mg", "Mn", "Na", "P", "Sr", "Zn"]
BOTANICAL_PURE = {"Acacia": 40, "Chaste": 33, "Jujube": 31, "Linden": 37, "Rape": 26, "TC": 34}
BOTANICAL_ADULT = {"Acacia": 35, "Chaste": 29, "Jujube": 28, "Linden": 33, "Rape": 24, "TC": 31}
REGIONS = {"Jiangxi": 51, "Commodity": 38, "Jilin": 21, "Liaoning": 21, "Hebei": 15, "Shaanxi": 8,
           "Henan": 8, "Shanxi": 8, "Shandong": 7, "Heilongjiang": 7, "Hubei": 7, "Inner Mongolia": 7,
           "America": 3}
SYRUPS = 48
# typical honey concentrations (mg/kg), used as the log-scale centre
BASE = np.log([2.0, 4.0, 0.1, 60.0, 3.0, 600.0, 25.0, 1.0, 20.0, 50.0, 0.3, 1.5])
DETECTION = np.array([0.3, 0.5, 0.02, 5.0, 0.4, 20.0, 2.0, 0.05, 2.0, 5.0, 0.03, 0.1])


def main(path):
    rng = np.random.default_rng(20240517)
    botanical_shift = {b: rng.normal(0.0, 0.9, len(ELEMENTS)) for b in BOTANICAL_PURE}
    # one interaction term per class keeps the classes from being linearly separable
    botanical_pair = {b: rng.choice(len(ELEMENTS), 2, replace=False) for b in BOTANICAL_PURE}
    region_shift = {r: rng.normal(0.0, 0.7, len(ELEMENTS)) for r in REGIONS}
    syrup_profile = np.log([0.5, 0.3, 0.01, 10.0, 0.8, 15.0, 2.0, 0.05, 30.0, 3.0, 0.02, 0.3])

    def honey(b, r):
        z = BASE + botanical_shift[b] + rng.normal(0.0, 0.22, len(ELEMENTS))
        if r is not None:
            z = z + region_shift[r]
        i, j = botanical_pair[b]
        wobble = rng.normal(0.0, 0.6)
        z[i] += wobble
        z[j] -= wobble
        return np.exp(z)

    def cells(values):
        out = []
        for v, limit in zip(values, DETECTION):
            out.append("ND" if v < limit else f"{v:.3f}")
        return out

    rows = []
    regions = [r for r, n in REGIONS.items() for _ in range(n)]
    botanicals = [b for b, n in BOTANICAL_PURE.items() for _ in range(n)]
    rng.shuffle(regions)
    for b, r in zip(botanicals, regions):
        rows.append(["Pure honey", b, r, ""] + cells(honey(b, r)))
    levels = [10, 20, 30, 40, 50]
    for b, n in BOTANICAL_ADULT.items():
        for k in range(n):
            level = levels[k % len(levels)]
            mix = (1 - level / 100) * honey(b, None) + (level / 100) * np.exp(
                syrup_profile + rng.normal(0.0, 0.3, len(ELEMENTS)))
            rows.append(["Adulterated honey", b, "", f"{level}%"] + cells(mix))
    for _ in range(SYRUPS):
        rows.append(["Syrup", "", "", ""] + cells(np.exp(syrup_profile + rng.normal(0.0, 0.35, len(ELEMENTS)))))
    order = rng.permutation(len(rows))
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["Sample type", "Botanical origin", "Region", "Level"] + ELEMENTS)
        for i in order:
            w.writerow(rows[i])


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/fixtures/synthetic_honey.csv")
