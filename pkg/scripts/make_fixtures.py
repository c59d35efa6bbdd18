#!/usr/bin/env python3
"""Regenerate the committed dataset fixtures in data/.

The four tabular files are generated stand-ins, not the original survey
datasets: each mimics the column layout, per-feature scales, and class
structure of its namesake (iris, wine, penguins, auto-mpg) so the experiment
pipeline sees realistic heterogeneous features without any network fetch.
Swap in the real CSVs (see README) for fidelity runs; the loaders accept
them unchanged.

Deterministic: fixed seeds through the package's portable generator.
"""

from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from stress_gauge.rng import Xoshiro256StarStar  # noqa: E402

DATA_DIR = Path(__file__).resolve().parents[1] / "data"


def clustered(rng, spec, n_per, decimals):
    """Rows drawn cluster by cluster: spec maps label -> (means, stds)."""
    rows = []
    for label, (means, stds) in spec.items():
        for _ in range(n_per):
            vals = [m + s * rng.normals(1)[0] for m, s in zip(means, stds)]
            rows.append([f"{v:.{decimals}f}" for v in vals] + [label])
    return rows


def write_csv(name, header, rows):
    DATA_DIR.mkdir(exist_ok=True)
    path = DATA_DIR / name
    lines = [",".join(header)] + [",".join(r) for r in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {path} ({len(rows)} rows)")


def iris_sample():
    rng = Xoshiro256StarStar(101)
    spec = {
        "setosa": ((5.01, 3.43, 1.46, 0.25), (0.35, 0.38, 0.17, 0.11)),
        "versicolor": ((5.94, 2.77, 4.26, 1.33), (0.52, 0.31, 0.47, 0.20)),
        "virginica": ((6.59, 2.97, 5.55, 2.03), (0.64, 0.32, 0.55, 0.27)),
    }
    header = ["sepal_length", "sepal_width", "petal_length", "petal_width", "species"]
    write_csv("iris_sample.csv", header, clustered(rng, spec, 20, 1))


def wine_sample():
    rng = Xoshiro256StarStar(202)
    # 13 features at the namesake's wildly different scales (alcohol ~13, proline ~750)
    spec = {
        "1": (
            (13.7, 2.0, 2.46, 17.0, 106.0, 2.84, 2.98, 0.29, 1.90, 5.5, 1.06, 3.16, 1115.0),
            (0.46, 0.69, 0.23, 2.5, 10.5, 0.34, 0.40, 0.07, 0.41, 1.2, 0.12, 0.36, 221.0),
        ),
        "2": (
            (12.3, 1.93, 2.24, 20.2, 94.5, 2.26, 2.08, 0.36, 1.63, 3.1, 1.06, 2.79, 520.0),
            (0.54, 1.02, 0.32, 3.3, 16.7, 0.55, 0.71, 0.12, 0.60, 0.9, 0.20, 0.50, 157.0),
        ),
        "3": (
            (13.2, 3.33, 2.44, 21.4, 99.3, 1.68, 0.78, 0.45, 1.15, 7.4, 0.68, 1.68, 630.0),
            (0.53, 1.09, 0.18, 2.3, 10.9, 0.36, 0.29, 0.12, 0.41, 2.3, 0.11, 0.27, 115.0),
        ),
    }
    header = [
        "alcohol", "malic_acid", "ash", "alcalinity", "magnesium", "phenols",
        "flavanoids", "nonflavanoids", "proanthocyanins", "color_intensity",
        "hue", "od_ratio", "proline", "class",
    ]
    write_csv("wine_sample.csv", header, clustered(rng, spec, 20, 2))


def penguins_sample():
    rng = Xoshiro256StarStar(303)
    spec = {
        "adelie": ((38.8, 18.3, 190.0, 3701.0), (2.7, 1.2, 6.5, 459.0)),
        "chinstrap": ((48.8, 18.4, 195.8, 3733.0), (3.3, 1.1, 7.1, 384.0)),
        "gentoo": ((47.5, 15.0, 217.2, 5076.0), (3.1, 1.0, 6.5, 504.0)),
    }
    header = ["bill_length_mm", "bill_depth_mm", "flipper_length_mm", "body_mass_g", "species"]
    write_csv("penguins_sample.csv", header, clustered(rng, spec, 20, 1))


def auto_mpg_sample():
    rng = Xoshiro256StarStar(404)
    # a size continuum instead of clusters: big engines are heavy and slow to accelerate
    rows = []
    for _ in range(60):
        size = rng.random()
        disp = 95.0 + 270.0 * size + rng.normals(1)[0] * 18.0
        hp = 55.0 + 130.0 * size + rng.normals(1)[0] * 9.0
        weight = 1900.0 + 1900.0 * size + rng.normals(1)[0] * 160.0
        accel = 20.5 - 7.5 * size + rng.normals(1)[0] * 1.4
        year = 70.0 + 12.0 * rng.random()
        rows.append([f"{disp:.1f}", f"{hp:.1f}", f"{weight:.1f}", f"{accel:.2f}", f"{year:.0f}"])
    header = ["displacement", "horsepower", "weight", "acceleration", "model_year"]
    write_csv("auto_mpg_sample.csv", header, rows)


if __name__ == "__main__":
    iris_sample()
    wine_sample()
    penguins_sample()
    auto_mpg_sample()
