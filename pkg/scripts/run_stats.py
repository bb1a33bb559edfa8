"""Negative-multiplicity rates by ladder length for the clique and point-cloud models."""

import argparse
import json
from pathlib import Path

from cladder.cli import StatsConfig, negative_rates, run_stats


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=500, help="samples per ladder length")
    ap.add_argument("--n", type=int, nargs="+", default=[4, 8, 12])
    ap.add_argument("--seed", type=int, default=12)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", type=Path, default=None, help="write the rates as JSON")
    args = ap.parse_args()
    rates = {}
    for model in ("clique", "pointcloud"):
        cfg = StatsConfig(model=model, lengths=tuple(args.n), trials=args.trials, seed=args.seed)
        rows = run_stats(cfg, args.workers)
        rates[model] = negative_rates(rows)
        print(f"{model:>10}  samples {len(rows):>5}  " +
              "  ".join(f"n={n}: {r:.4f}" for n, r in rates[model].items()))
    if args.out:
        args.out.write_text(json.dumps(rates, indent=1) + "\n")


if __name__ == "__main__":
    main()
