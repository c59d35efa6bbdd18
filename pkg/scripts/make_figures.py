#!/usr/bin/env python3
"""Produce the illustrative SVGs: stress-scale curves and Shepard diagrams.

Embeds the s-curve fixture with SMACOF and the random baseline, then writes
the normalized-stress and raw-stress scale curves (minimum marked) and one
Shepard diagram per embedding under results/figures/.
"""

from __future__ import annotations

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

import stress_gauge as sg  # noqa: E402
from stress_gauge.svg_plots import plot_shepard, plot_stress_scale_curve  # noqa: E402

OUT = ROOT / "results" / "figures"


def main() -> int:
    OUT.mkdir(parents=True, exist_ok=True)
    data = sg.generate_synthetic("s_curve", 200, seed=11)
    x = sg.DataMatrix(sg.normalize_columns(data.values, "minmax"))
    d_high = sg.pairwise_distances(x)

    embeddings = {
        "mds": sg.smacof_mds(d_high, sg.EmbedderConfig(seed=1)),
        "random": sg.random_embedding(x.n_rows, sg.EmbedderConfig(seed=2)),
    }
    for name, emb in embeddings.items():
        d_low = sg.pairwise_distances(emb)
        alpha = sg.optimal_scale(d_high, d_low).alpha_star
        sns = sg.scale_normalized_stress(d_high, d_low)
        for metric in (sg.MetricKind.NORMALIZED_STRESS, sg.MetricKind.RAW_STRESS):
            samples = sg.stress_scale_curve(d_high, d_low, metric)
            minimum = sns if metric is sg.MetricKind.NORMALIZED_STRESS else sg.raw_stress(
                d_high.d, alpha * d_low.d
            )
            path = OUT / f"curve_{metric.value}_{name}.svg"
            plot_stress_scale_curve(samples, annotations=(alpha, minimum), path=path)
            print("wrote", path)
        pairs = sg.shepard_pairs(d_high, d_low)
        fit = sg.isotonic_fit(sg.sort_for_isotonic(pairs))
        path = OUT / f"shepard_{name}.svg"
        plot_shepard(pairs, fit, path=path)
        print("wrote", path)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
