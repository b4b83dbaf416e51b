"""Two-group toy comparison of the placement methods."""
import argparse
import json
from dataclasses import asdict

from dronesnc.experiments import ToyLayout, run_toy_scenario


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--angle", type=float, default=60.0, help="group bearing from the anchor, degrees")
    p.add_argument("--gamma-star", type=float, default=200.0)
    p.add_argument("--out", default="toy.json")
    a = p.parse_args()
    layout = ToyLayout(angle_deg=a.angle, gamma_star=a.gamma_star)
    res = run_toy_scenario(layout)
    res["layout"] = asdict(layout)
    for m, v in res["methods"].items():
        print(f"{m:10s} profit {v['profit']:.3f}  center ({v['center'][0]:.1f}, {v['center'][1]:.1f})")
    print(f"gain {res['gain_percent']:.1f}%  semi gap {res['semi_gap_percent']:.2f}%")
    with open(a.out, "w") as f:
        json.dump(res, f, indent=2, default=float)


if __name__ == "__main__":
    main()
