"""Mean profit as the number of users in the world grows."""
import argparse
import csv

from dronesnc.experiments import run_density_sweep
from dronesnc.scenario import get_preset

METHODS = ("no-uil", "usnc", "semi-jsnc")


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--preset", default="paper-default")
    p.add_argument("--min-users", type=int, default=10)
    p.add_argument("--max-users", type=int, default=27)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default="density_sweep.csv")
    a = p.parse_args()
    reps = run_density_sweep(get_preset(a.preset), range(a.min_users, a.max_users + 1), a.trials, METHODS,
                             seed=a.seed, workers=a.workers)
    with open(a.out, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["user_count", "density"] + list(METHODS))
        for r in reps:
            w.writerow([r.user_count, r.density] + [r.mean(m) for m in METHODS])
            print(r.user_count, " ".join(f"{r.mean(m):.3f}" for m in METHODS))


if __name__ == "__main__":
    main()
