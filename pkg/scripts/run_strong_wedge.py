#!/usr/bin/env python3
"""Strongly separable wedge benchmark: OVA bandit learner vs the Banditron
eta grid, 20 seeds, T = 100000.

Writes traces/, aggregate.csv, and summary.json under --out (default
runs/strong-wedge), then renders a curve figure if the plotting package
is installed.
"""

import argparse
import shutil
import subprocess
import sys

from banditsep.harness import BANDITRON_ETA_GRID, ExperimentConfig, run_experiment


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="runs/strong-wedge")
    ap.add_argument("--T", type=int, default=100_000)
    ap.add_argument("--seeds", type=int, default=20)
    args = ap.parse_args()

    learners = ["ova"] + [f"banditron(eta={eta})" for eta in BANDITRON_ETA_GRID]
    config = ExperimentConfig(
        dataset={"generator": "wedge", "params": {"kind": "strong"}},
        learners=tuple(learners),
        T=args.T,
        seeds=tuple(range(args.seeds)),
        out_dir=args.out,
    )
    manifest = run_experiment(config)
    print(f"aggregate: {manifest['aggregate']}")
    print(f"summary:   {manifest['summary']}")

    if shutil.which("plot"):
        png = f"{args.out}/curves.png"
        subprocess.run(
            ["plot", "curves", "--in", manifest["aggregate"], "--out", png],
            check=True,
        )
    else:
        print("plot CLI not installed; skipping figure", file=sys.stderr)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
