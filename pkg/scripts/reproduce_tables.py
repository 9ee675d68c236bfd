#!/usr/bin/env python3
"""Run the score-table reproduction benchmarks on user-supplied datasets.

Point the environment variables at dataset roots prepared in the layout
described in the README (manifest.json + stimuli/ + fixations/):

    WECSF_SID4VAM    full SID4VAM (230 images)
    WECSF_TORONTO    TORONTO (120 images)
    WECSF_MIT1003    MIT1003 (the first 100 manifest entries are scored)

Each available dataset gets a benchmark run with the recorded parameter
preset; results land under benchmarks/<name>/.
"""

from __future__ import annotations

import os
import sys
from pathlib import Path

from wecsf.cli import main

ROOT = Path(__file__).resolve().parents[1]
PRESET = ROOT / "configs" / "table_reproduction.toml"

DATASETS = {
    "sid4vam": "WECSF_SID4VAM",
    "toronto": "WECSF_TORONTO",
    "mit1003": "WECSF_MIT1003",
}


def run() -> int:
    worst = 0
    ran_any = False
    for name, env in DATASETS.items():
        root = os.environ.get(env)
        if not root:
            print(f"skipping {name}: {env} not set")
            continue
        ran_any = True
        outdir = ROOT / "benchmarks" / name
        print(f"== {name}: {root} -> {outdir}")
        code = main(
            [
                "benchmark",
                "--dataset",
                root,
                "-o",
                str(outdir),
                "--config",
                str(PRESET),
                "--seed",
                "0",
            ]
        )
        worst = max(worst, code)
    if not ran_any:
        print("nothing to do; set at least one dataset environment variable")
    return worst


if __name__ == "__main__":
    sys.exit(run())
