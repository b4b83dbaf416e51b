"""Regional incentive curves: gain versus tau, tau* versus band width, large-world limit."""
import argparse
import json

import numpy as np

from dronesnc import regional


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--R", type=float, default=200.0)
    p.add_argument("--W", type=float, default=2000.0)
    p.add_argument("--out", default="regional.json")
    a = p.parse_args()
    taus = np.linspace(0.01, 1.0, 100)
    curves = {}
    for d in (100.0, 400.0, 800.0, a.W - a.R):
        m = regional.RegionalModel(a.R, a.W, d)
        opt = regional.optimal_regional_incentive(m)
        curves[str(d)] = {"gain_percent": regional.uil_gain_percent(m, taus).tolist(),
                          "tau_star": opt.tau_star, "peak_gain": opt.gain_percent}
        print(f"d_u {d:7.1f}: tau* {opt.tau_star:.4f}  peak gain {opt.gain_percent:.2f}%")
    sweep = regional.tau_star_sweep(a.R, a.W, np.linspace(20, a.W - a.R, 50))
    limit = {}
    for R in (50.0, 100.0, 200.0, 500.0, 1000.0):
        inf = regional.tau_infinity(R)
        limit[str(R)] = inf.tau
        print(f"R {R:6.0f}: tau_inf {inf.tau:.4f}")
    with open(a.out, "w") as f:
        json.dump({"R": a.R, "W": a.W, "tau": taus.tolist(), "curves": curves,
                   "tau_star_vs_d_u": sweep, "tau_infinity": limit}, f, indent=2)


if __name__ == "__main__":
    main()
