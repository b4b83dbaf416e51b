"""Command line entry point (``dronesnc``)."""

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import channel, regional
from .experiments import (CSV_COLUMNS, DEFAULT_METHODS, density_series, run_density_sweep,
                          run_monte_carlo, run_toy_scenario, solve_method, score_solution)
from .pwl import fit_pwl1d
from .scenario import PRESETS, Scenario, ScenarioError, get_preset

log = logging.getLogger("dronesnc")


def _scenario(args) -> Scenario:
    if args.scenario:
        sc = Scenario.load(args.scenario)
    else:
        sc = get_preset(args.preset)
    if args.seed is not None:
        sc = sc.with_(seed=args.seed, explicit_users=None) if sc.explicit_users is None else sc.with_(seed=args.seed)
    if getattr(args, "users", None) is not None:
        sc = sc.with_(user_count=args.users, explicit_users=None)
    return sc


def _csv(rows, columns) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def _emit(args, name, payload, rows=None, columns=None):
    if args.format == "csv":
        if rows is None:
            raise SystemExit(f"{args.command}: csv output not available")
        text = _csv(rows, columns)
    else:
        text = json.dumps(payload, indent=2, default=_json_default) + "\n"
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        path = out / f"{name}.{args.format}"
        path.write_text(text)
        log.info("wrote %s", path)
    else:
        sys.stdout.write(text)


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    return str(o)


# --- commands ---------------------------------------------------------------


def cmd_solve(args):
    sc = _scenario(args)
    method = {"place": "usnc", "jsnc": "jsnc", "semi-jsnc": "semi-jsnc"}[args.command]
    users = sc.users()
    sol = solve_method(method, users, sc)
    payload = sol.to_dict()
    payload["exact_profit"] = score_solution(sol, users, sc)
    payload["scenario_hash"] = sc.digest()
    offers = {o.user_id: o for o in sol.offers}
    rows = [{"user_id": u.id, "x": u.x, "y": u.y, "covered": int(f), "offered": int(w),
             "tau": offers[u.id].tau if u.id in offers else "",
             "d": offers[u.id].d if u.id in offers else "",
             "accept_prob": offers[u.id].accept_prob if u.id in offers else ""}
            for u, f, w in zip(users, sol.flags.u, sol.flags.w)]
    _emit(args, args.command, payload, rows,
          ("user_id", "x", "y", "covered", "offered", "tau", "d", "accept_prob"))


def cmd_toy(args):
    res = run_toy_scenario()
    rows = [{"method": m, "profit": v["profit"], "x": v["center"][0], "y": v["center"][1],
             "altitude": v["altitude"], "radius": v["radius"]} for m, v in res["methods"].items()]
    _emit(args, "toy", res, rows, ("method", "profit", "x", "y", "altitude", "radius"))


def cmd_montecarlo(args):
    sc = _scenario(args)
    methods = tuple(args.methods.split(",")) if args.methods else DEFAULT_METHODS
    rep = run_monte_carlo(sc, args.trials, methods, seed=args.seed, workers=args.workers)
    for m, s in rep.summary().items():
        log.info("%-10s mean %.4f  failures %d", m, s["mean"], s["failures"])
    _emit(args, "montecarlo", rep.to_dict(), rep.csv_rows(), CSV_COLUMNS)
    if any(t.errors for t in rep.trials):
        return 1
    return 0


def cmd_density(args):
    sc = _scenario(args)
    lo, hi = (int(v) for v in args.counts.split("-"))
    methods = tuple(args.methods.split(",")) if args.methods else ("no-uil", "usnc", "semi-jsnc")
    reps = run_density_sweep(sc, range(lo, hi + 1), args.trials, methods, seed=args.seed, workers=args.workers)
    payload = {"scenario_hash": sc.digest(), "series": {m: density_series(reps, m) for m in methods},
               "reports": [r.to_dict() for r in reps]}
    rows = [{"user_count": r.user_count, "density": r.density, "method": m, "mean_profit": r.mean(m)}
            for r in reps for m in methods]
    _emit(args, "density_sweep", payload, rows, ("user_count", "density", "method", "mean_profit"))
    return 1 if any(t.errors for r in reps for t in r.trials) else 0


def cmd_regional(args):
    model = regional.RegionalModel(args.R, args.W, args.d_u if args.d_u is not None else args.W - args.R)
    taus = np.linspace(regional.TAU_FLOOR, 1.0, args.points)
    prof = regional.regional_profit(model, taus)
    gain = regional.uil_gain_percent(model, taus)
    opt = regional.optimal_regional_incentive(model)
    sweep = regional.tau_star_sweep(args.R, args.W, np.linspace(0, args.W - args.R, args.points // 10 + 1)[1:])
    inf = regional.tau_infinity(args.R)
    payload = {"model": {"R": model.R, "W": model.W, "d_u": model.d_u},
               "optimum": vars(opt), "tau_infinity": vars(inf),
               "curve": {"tau": taus, "profit": prof, "gain_percent": gain},
               "d_u_sweep": sweep}
    rows = [{"tau": t, "profit": p, "gain_percent": g} for t, p, g in zip(taus, prof, gain)]
    _emit(args, "regional", payload, rows, ("tau", "profit", "gain_percent"))


def cmd_alpha(args):
    sc = _scenario(args)
    envs = [args.environment] if args.environment else list(channel.ENVIRONMENTS)
    rows = []
    for name in envs:
        env = channel.get_environment(name)
        r = channel.find_alpha_star(env, sc.channel_config)
        rows.append({"environment": name, "alpha_star": r.alpha_star, "gamma_star": r.gamma_star,
                     "elevation_deg": float(np.degrees(np.arctan(r.alpha_star))), "residual": r.residual})
    _emit(args, "alpha_star", {"gamma": sc.gamma, "fc": sc.fc, "results": rows}, rows,
          ("environment", "alpha_star", "gamma_star", "elevation_deg", "residual"))


def cmd_fit(args):
    sc = _scenario(args)
    fits = [fit_pwl1d(n, sc.d_u, fit=sc.fit) for n in range(2, args.max_n + 1)]
    rows = [{"n_breakpoints": len(f.breakpoints), "rmse": f.rmse,
             "breakpoints": " ".join(f"{b:.3f}" for b in f.breakpoints),
             "node_values": " ".join(f"{v:.5f}" for v in f.node_values)} for f in fits]
    _emit(args, "fit_pwl", {"fits": [f.to_dict() for f in fits]}, rows,
          ("n_breakpoints", "rmse", "breakpoints", "node_values"))


# --- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", help="scenario JSON file")
    common.add_argument("--preset", default="paper-default", choices=sorted(PRESETS))
    common.add_argument("--seed", type=int)
    common.add_argument("--out", help="output directory (default: stdout)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="dronesnc", description="Drone base station placement with user incentives.")
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_ in (("place", "uncoordinated placement plus incentives"),
                        ("jsnc", "joint placement and incentives"),
                        ("semi-jsnc", "semi-joint placement and incentives")):
        s = sub.add_parser(name, parents=[common], help=help_)
        s.add_argument("--users", type=int, help="override the random user count")
        s.set_defaults(func=cmd_solve)
    sub.add_parser("toy", parents=[common], help="two-group toy comparison").set_defaults(func=cmd_toy)

    s = sub.add_parser("montecarlo", parents=[common], help="profit distribution over random draws")
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--users", type=int)
    s.add_argument("--methods", help="comma separated, default " + ",".join(DEFAULT_METHODS))
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_montecarlo)

    s = sub.add_parser("density-sweep", parents=[common], help="mean profit versus user density")
    s.add_argument("--trials", type=int, default=10, help="trials per user count")
    s.add_argument("--counts", default="10-27")
    s.add_argument("--methods")
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_density)

    s = sub.add_parser("regional", parents=[common], help="regional incentive curves")
    s.add_argument("--R", type=float, default=200.0)
    s.add_argument("--W", type=float, default=2000.0)
    s.add_argument("--d-u", dest="d_u", type=float)
    s.add_argument("--points", type=int, default=1000)
    s.set_defaults(func=cmd_regional)

    s = sub.add_parser("alpha-star", parents=[common], help="optimal elevation ratio and radius")
    s.add_argument("--environment", choices=sorted(channel.ENVIRONMENTS))
    s.set_defaults(func=cmd_alpha)

    s = sub.add_parser("fit-pwl", parents=[common], help="univariate PWL fits of the best profit")
    s.add_argument("--max-n", type=int, default=5)
    s.set_defaults(func=cmd_fit)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        rc = args.func(args)
    except (ScenarioError, ValueError, FileNotFoundError, RuntimeError) as exc:
        print(f"dronesnc {args.command}: {exc}", file=sys.stderr)
        return 2
    return int(rc or 0)


if __name__ == "__main__":
    sys.exit(main())
