#!/usr/bin/env python3
"""Map random 2x2 channel realizations to their equilibrium regions.

Draws unit-mean exponential power gains, classifies each realization by its
gain ratios g11/g12 and g21/g22, and writes a plot-ready scatter file: one
row per realization with both ratios and the region label set. The four
regions tile the positive quadrant with boundaries 1 + SNR*g and
1/(1 + SNR*g); their overlap (H1+H4) is where two pure equilibria and the
mixed point coexist, and it widens with SNR.

Usage:
    python3 scripts/region_scatter.py [--trials 10000] [--snr-db 10] [--seed 0] [--out out/regions]
"""

from __future__ import annotations

import argparse
from collections import Counter
from pathlib import Path

from csgame import classify_region_2x2, emit_plot_data, generate_game, trial_rng


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--trials", type=int, default=10_000)
    parser.add_argument("--snr-db", type=float, default=10.0)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", type=Path, default=Path("out/regions"))
    return parser


def main() -> None:
    args = build_parser().parse_args()
    records = []
    histogram: Counter[str] = Counter()
    for trial in range(args.trials):
        rng = trial_rng(args.seed, trial)
        game = generate_game(rng, players=2, channels=2, snr_db=args.snr_db)
        labels = sorted(classify_region_2x2(game))
        histogram["+".join(labels)] += 1
        records.append({
            "trial": trial,
            "game": {"gains": game.gains.tolist()},
            "regions": labels,
        })

    print(f"{args.trials} realizations at SNR {args.snr_db:g} dB (seed {args.seed})")
    for key in sorted(histogram):
        share = histogram[key] / args.trials
        print(f"  {key:8s} {histogram[key]:6d}  ({share:.1%})")

    path = emit_plot_data(records, "regions", args.out / "regions.csv")
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
