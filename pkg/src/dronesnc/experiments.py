"""Experiment runners: toy comparison, Monte Carlo profit CDFs, density sweep.

Every method in a trial is scored by ``exact_profit`` with the scenario's fit:
the drone's center and serving radius are taken from the solution, then each
band user receives the closed-form optimal offer. Surrogate objectives are
never compared across methods.
"""

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .jsnc import exact_profit, solve_exact, solve_jsnc, solve_semi_jsnc
from .model import users_from_xy
from .scenario import GENERATOR, Scenario, trial_seeds
from .usnc import no_uil_baseline, usnc

log = logging.getLogger(__name__)

DEFAULT_METHODS = ("no-uil", "usnc", "jsnc", "semi-jsnc")
ALL_METHODS = DEFAULT_METHODS + ("exact-oracle",)

# CSV columns emitted by ``ExperimentReport.csv_rows``; keep stable
CSV_COLUMNS = ("trial", "seed_spawn_key", "user_count", "density", "method", "profit",
               "covered", "solve_time", "error")


def solve_method(method, users, scenario: Scenario):
    sc = scenario
    env, cfg = sc.environment, sc.channel_config
    if method == "usnc":
        return usnc(users, sc.bounds, sc.gamma_star, sc.alpha_star, sc.d_u, sc.fit, env, cfg)
    if method == "no-uil":
        return no_uil_baseline(users, sc.bounds, sc.gamma_star, sc.alpha_star, env, cfg)
    if method == "jsnc":
        return solve_jsnc(users, sc.bounds, sc.gamma_star, sc.d_u, sc.grid, sc.alpha_star, sc.fit)
    if method == "semi-jsnc":
        return solve_semi_jsnc(users, sc.bounds, sc.gamma_star, sc.d_u, sc.fit1d, sc.alpha_star, sc.fit)
    if method == "exact-oracle":
        return solve_exact(users, sc.bounds, sc.gamma_star, sc.d_u, sc.alpha_star, sc.fit)
    raise ValueError(f"unknown method {method!r}")


def score_solution(sol, users, scenario: Scenario) -> float:
    """Exact profit of a solution; the no-UIL baseline makes no offers."""
    if sol.method == "no-uil":
        return float(sol.covered_count)
    val, _, _ = exact_profit(sol.placement.center, users, sol.placement.radius, scenario.d_u, scenario.fit)
    return val


# --- toy --------------------------------------------------------------------


@dataclass(frozen=True)
class ToyLayout:
    anchor_gap: float = 400.0
    offset: float = 25.0
    angle_deg: float = 60.0     # satellites at +/- this angle from the outward axis
    gamma_star: float = 200.0   # coverage radius stated for the toy example
    d_u: float = 200.0

    def points(self):
        h = self.anchor_gap / 2
        a = math.radians(self.angle_deg)
        dx, dy = self.offset * math.cos(a), self.offset * math.sin(a)
        return [(-h, 0.0), (h, 0.0),
                (-h - dx, dy), (-h - dx, -dy),
                (h + dx, dy), (h + dx, -dy)]


def run_toy_scenario(layout: ToyLayout = ToyLayout(), base: Scenario | None = None) -> dict:
    """Two 3-user groups 400 m apart; compare USNC, JSNC and semi-JSNC."""
    from .scenario import paper_default

    base = base or paper_default()
    sc = base.with_(gamma_star_override=layout.gamma_star, d_u=layout.d_u, explicit_users=None, name="toy")
    users = users_from_xy(np.array(layout.points()))
    out = {"layout": asdict(layout), "users": [list(p) for p in layout.points()], "methods": {}}
    for m in ("usnc", "jsnc", "semi-jsnc"):
        sol = solve_method(m, users, sc)
        out["methods"][m] = {
            "profit": score_solution(sol, users, sc),
            "covered": [u.id for u, f in zip(users, sol.flags.u) if f],
            "center": list(sol.placement.center),
            "altitude": sol.placement.h_d,
            "radius": sol.placement.radius,
            "solve_time": sol.stats.get("wall_time"),
        }
    p = {m: v["profit"] for m, v in out["methods"].items()}
    out["gain_percent"] = 100.0 * (p["jsnc"] - p["usnc"]) / p["usnc"]
    out["semi_gap_percent"] = 100.0 * (p["jsnc"] - p["semi-jsnc"]) / p["jsnc"]
    return out


# --- Monte Carlo ---------------------------------------------------------------


@dataclass
class TrialRecord:
    trial: int
    spawn_key: tuple
    user_count: int
    profits: dict = field(default_factory=dict)
    covered: dict = field(default_factory=dict)
    times: dict = field(default_factory=dict)
    stats: dict = field(default_factory=dict)
    errors: dict = field(default_factory=dict)


@dataclass
class ExperimentReport:
    scenario_hash: str
    generator: str
    master_seed: int
    methods: tuple
    user_count: int
    density: float
    trials: list = field(default_factory=list)

    def profits(self, method) -> np.ndarray:
        return np.array([t.profits[method] for t in self.trials if method in t.profits])

    def mean(self, method) -> float:
        p = self.profits(method)
        return float(p.mean()) if len(p) else float("nan")

    def cdf(self, method):
        """Empirical CDF as ``(sorted values, cumulative fractions)``."""
        p = np.sort(self.profits(method))
        return p, np.arange(1, len(p) + 1) / max(len(p), 1)

    def solve_times(self, method) -> np.ndarray:
        return np.array([t.times[method] for t in self.trials if method in t.times])

    def summary(self) -> dict:
        return {m: {"mean": self.mean(m), "median_time": float(np.median(self.solve_times(m)))
                    if len(self.solve_times(m)) else None,
                    "failures": sum(1 for t in self.trials if m in t.errors)} for m in self.methods}

    def to_dict(self) -> dict:
        return {
            "scenario_hash": self.scenario_hash,
            "generator": self.generator,
            "master_seed": self.master_seed,
            "methods": list(self.methods),
            "user_count": self.user_count,
            "density": self.density,
            "summary": self.summary(),
            "cdf": {m: [list(map(float, a)) for a in self.cdf(m)] for m in self.methods},
            "trials": [asdict(t) for t in self.trials],
        }

    def csv_rows(self):
        for t in self.trials:
            for m in self.methods:
                yield {
                    "trial": t.trial,
                    "seed_spawn_key": "-".join(map(str, t.spawn_key)),
                    "user_count": t.user_count,
                    "density": self.density,
                    "method": m,
                    "profit": t.profits.get(m, ""),
                    "covered": t.covered.get(m, ""),
                    "solve_time": t.times.get(m, ""),
                    "error": t.errors.get(m, ""),
                }


def _run_trial(args):
    idx, seed_seq, scenario, count, methods = args
    from .scenario import generate_users

    users = generate_users(scenario.world, count, seed_seq)
    rec = TrialRecord(idx, tuple(int(k) for k in seed_seq.spawn_key), count)
    for m in methods:
        try:
            t0 = time.perf_counter()
            sol = solve_method(m, users, scenario)
            rec.times[m] = time.perf_counter() - t0
            rec.profits[m] = score_solution(sol, users, scenario)
            rec.covered[m] = sol.covered_count
            rec.stats[m] = {k: v for k, v in sol.stats.items() if k != "wall_time"}
        except Exception as exc:  # recorded, the sweep goes on
            log.warning("trial %d method %s failed: %s", idx, m, exc)
            rec.errors[m] = f"{type(exc).__name__}: {exc}"
    return rec


def run_monte_carlo(scenario: Scenario, trials: int, methods=DEFAULT_METHODS, seed: int | None = None,
                    user_count: int | None = None, workers: int = 1) -> ExperimentReport:
    """Fresh user draw per trial from ``seed``'s substreams; every method solved and exact-scored."""
    if trials < 1:
        raise ValueError("need at least one trial")
    for m in methods:
        if m not in ALL_METHODS:
            raise ValueError(f"unknown method {m!r}")
    seed = scenario.seed if seed is None else seed
    count = scenario.user_count if user_count is None else user_count
    # derive cached quantities once so worker processes inherit them
    _ = scenario.alpha_result, scenario.grid, scenario.fit1d
    jobs = [(i, s, scenario, count, tuple(methods)) for i, s in enumerate(trial_seeds(seed, trials))]
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            recs = list(ex.map(_run_trial, jobs))
    else:
        recs = [_run_trial(j) for j in jobs]
    recs.sort(key=lambda r: r.trial)
    return ExperimentReport(scenario.digest(), GENERATOR, seed, tuple(methods), count,
                            scenario.density(count), recs)


def run_density_sweep(scenario: Scenario, user_counts, trials_per_count: int = 10,
                      methods=("no-uil", "usnc", "semi-jsnc"), seed: int | None = None,
                      workers: int = 1) -> list:
    """One report per user count; each count gets its own master seed offset."""
    seed = scenario.seed if seed is None else seed
    out = []
    for i, n in enumerate(user_counts):
        out.append(run_monte_carlo(scenario, trials_per_count, methods, seed=seed + 1000 * i + int(n),
                                   user_count=int(n), workers=workers))
    return out


def density_series(reports, method) -> list:
    return [(r.density, r.mean(method)) for r in reports]


__all__ = [
    "ALL_METHODS", "CSV_COLUMNS", "DEFAULT_METHODS", "ExperimentReport", "ToyLayout", "TrialRecord",
    "density_series", "run_density_sweep", "run_monte_carlo", "run_toy_scenario", "score_solution",
    "solve_method",
]
