"""Min / max end-to-end delay vs offered load for all three schedulers.

Sweeps the per-connection packet interval (smaller = heavier load) on 50-node
geometric topologies and prints seed-averaged delays in slots. Full outputs
(summary, aggregate, plot data) go to --out.

    python scripts/load_sweep.py --seeds 0-19 --intervals 3,5,8,12
"""

import argparse
import os

from localvoting.cli import ExperimentConfig, run_experiment
from localvoting.metrics import aggregate, read_summary


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", default="0-9")
    ap.add_argument("--intervals", default="3,5,8,12")
    ap.add_argument("--connections", type=int, default=10)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", default="results/load_sweep")
    args = ap.parse_args()

    lo, _, hi = args.seeds.partition("-")
    seeds = tuple(range(int(lo), int(hi or lo) + 1))
    cfg = ExperimentConfig(
        interval=tuple(int(x) for x in args.intervals.split(",")),
        connections=(args.connections,),
        seeds=seeds,
        jobs=args.jobs,
        out=args.out,
        logs=False,
    ).validate()
    status = run_experiment(cfg)
    agg = aggregate(read_summary(os.path.join(cfg.out, "summary.csv")))

    print(f"{'scheduler':>13} {'interval':>8} {'min_delay':>10} {'max_delay':>10} {'fairness':>8}")
    for r in sorted(agg, key=lambda r: (r["interval"], r["scheduler"])):
        print(f"{r['scheduler']:>13} {r['interval']:>8} {r['min_delay_mean']:>10.1f} "
              f"{r['max_delay_mean']:>10.1f} {r['fairness_mean']:>8.3f}")
    if status:
        print("warning: some runs hit the frame cap")


if __name__ == "__main__":
    main()
