"""Empirical profit CDFs over random user draws."""
import argparse
import csv

import numpy as np

from dronesnc.experiments import DEFAULT_METHODS, run_monte_carlo
from dronesnc.scenario import get_preset


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--preset", default="paper-default")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default="profit_cdf.csv")
    a = p.parse_args()
    rep = run_monte_carlo(get_preset(a.preset), a.trials, DEFAULT_METHODS, seed=a.seed, workers=a.workers)
    with open(a.out, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["method", "profit", "cdf"])
        for m in DEFAULT_METHODS:
            xs, ys = rep.cdf(m)
            w.writerows((m, x, y) for x, y in zip(xs, ys))
    base = rep.mean("no-uil")
    for m in DEFAULT_METHODS:
        print(f"{m:10s} mean {rep.mean(m):.3f}  vs no-uil {100 * (rep.mean(m) / base - 1):+.2f}%  "
              f"median solve {np.median(rep.solve_times(m)):.3f} s")


if __name__ == "__main__":
    main()
