#!/usr/bin/env python3
"""Run the desk-scale ordering experiment on the packaged roster.

Embeds the six roster datasets 10 times with MDS, t-SNE, and the random
baseline, scores all five metrics at scales 1 and 10, and writes the tally
tables, agreement matrix, and full report under results/experiment_a/.
"""

from __future__ import annotations

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from stress_gauge.cli import main  # noqa: E402

if __name__ == "__main__":
    out = ROOT / "results" / "experiment_a"
    argv = [
        "experiment-a",
        "--datasets",
        str(ROOT / "data"),
        "s_curve",
        "swiss_roll",
        "--runs", "10",
        "--scales", "1,10",
        "--seed", "0",
        "--jobs", "1",
        "--out", str(out),
    ] + sys.argv[1:]
    raise SystemExit(main(argv))
