"""Scenario files, presets and random user generation.

Scenario JSON (``schema_version`` 1)::

    {
      "schema_version": 1,
      "environment": "dense-urban" | {"a": .., "b": .., "eta_los": .., "eta_nlos": ..},
      "gamma": 90.0, "fc": 2.5e9,
      "bounds": [x_l, x_u, y_l, y_u, h_l, h_u],      # h_u may be null (unbounded)
      "d_u": 200.0,
      "world": {"shape": "disk", "W": 700.0} | {"shape": "rectangle", "box": [x_l, x_u, y_l, y_u]},
      "users": {"count": 15, "seed": 0} | {"explicit": [[x, y], ...]},
      "fit": {"k1": -0.01166, "k2": 0.005676},
      "pwl": {"tau_vertices": [...], "d_vertices": [...], "n_breakpoints": 3},
      "gamma_star": 209.0 | null                       # tabulated override of the derived radius
    }
"""

import hashlib
import json
import math
from dataclasses import dataclass, replace
from functools import cached_property

import numpy as np

from . import channel
from .model import Bounds, users_from_xy
from .pwl import PAPER_D_VERTICES, PAPER_TAU_VERTICES, build_grid, fit_pwl1d
from .uil import PersuasionFit

SCHEMA_VERSION = 1
# bump when the sampling procedure changes; recorded in every report
GENERATOR = "numpy-PCG64-seedsequence/1"


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class World:
    shape: str = "disk"
    W: float = 700.0
    box: tuple = (-700.0, 700.0, -700.0, 700.0)

    def __post_init__(self):
        if self.shape not in ("disk", "rectangle"):
            raise ScenarioError(f"unknown world shape {self.shape!r}")
        if self.shape == "disk" and not self.W > 0:
            raise ScenarioError("disk world needs W > 0")
        if self.shape == "rectangle" and (self.box[0] >= self.box[1] or self.box[2] >= self.box[3]):
            raise ScenarioError("rectangle world is empty")

    @property
    def area(self) -> float:
        if self.shape == "disk":
            return math.pi * self.W**2
        return (self.box[1] - self.box[0]) * (self.box[3] - self.box[2])

    def contains(self, x, y, tol=1e-9) -> bool:
        if self.shape == "disk":
            return x * x + y * y <= self.W**2 * (1 + tol) + tol
        return self.box[0] - tol <= x <= self.box[1] + tol and self.box[2] - tol <= y <= self.box[3] + tol

    def to_dict(self):
        if self.shape == "disk":
            return {"shape": "disk", "W": self.W}
        return {"shape": "rectangle", "box": list(self.box)}


@dataclass(frozen=True)
class PwlConfig:
    tau_vertices: tuple = PAPER_TAU_VERTICES
    d_vertices: tuple = PAPER_D_VERTICES
    n_breakpoints: int = 3


@dataclass(frozen=True)
class Scenario:
    environment: channel.Environment = channel.ENVIRONMENTS["dense-urban"]
    gamma: float = 90.0
    fc: float = 2.5e9
    bounds: Bounds = Bounds.square(700.0)
    d_u: float = 200.0
    world: World = World()
    user_count: int = 15
    seed: int = 0
    explicit_users: tuple | None = None
    fit: PersuasionFit = PersuasionFit()
    pwl: PwlConfig = PwlConfig()
    gamma_star_override: float | None = None
    name: str = "custom"

    def __post_init__(self):
        if self.d_u < 0:
            raise ScenarioError("d_u must be nonnegative")
        if self.user_count < 0:
            raise ScenarioError("user count must be nonnegative")
        if self.gamma_star_override is not None and not self.gamma_star_override > 0:
            raise ScenarioError("gamma_star must be positive")
        if self.explicit_users is not None:
            for x, y in self.explicit_users:
                if not self.world.contains(x, y):
                    raise ScenarioError(f"user ({x}, {y}) lies outside the world")

    @property
    def channel_config(self) -> channel.ChannelConfig:
        return channel.ChannelConfig(fc=self.fc, gamma=self.gamma)

    @cached_property
    def alpha_result(self) -> channel.AlphaStarResult:
        return channel.find_alpha_star(self.environment, self.channel_config)

    @property
    def alpha_star(self) -> float:
        return self.alpha_result.alpha_star

    @property
    def gamma_star(self) -> float:
        if self.gamma_star_override is not None:
            return self.gamma_star_override
        return self.alpha_result.gamma_star

    @cached_property
    def grid(self):
        return build_grid(self.pwl.tau_vertices, self.pwl.d_vertices, self.fit)

    @cached_property
    def fit1d(self):
        return fit_pwl1d(self.pwl.n_breakpoints, self.d_u, fit=self.fit)

    def users(self, seed: int | None = None, count: int | None = None):
        if self.explicit_users is not None and seed is None and count is None:
            return users_from_xy(np.array(self.explicit_users, dtype=float).reshape(-1, 2))
        return generate_users(self.world, self.user_count if count is None else count,
                              self.seed if seed is None else seed)

    def density(self, count: int | None = None) -> float:
        return (self.user_count if count is None else count) / self.world.area

    def with_(self, **kw) -> "Scenario":
        return replace(self, **kw)

    # serialization

    def to_dict(self) -> dict:
        env = self.environment
        if env.name in channel.ENVIRONMENTS and channel.ENVIRONMENTS[env.name] == env:
            env_out = env.name
        else:
            env_out = {"a": env.a, "b": env.b, "eta_los": env.eta_los, "eta_nlos": env.eta_nlos}
        b = self.bounds
        users = ({"explicit": [list(p) for p in self.explicit_users]} if self.explicit_users is not None
                 else {"count": self.user_count, "seed": self.seed})
        return {
            "schema_version": SCHEMA_VERSION,
            "name": self.name,
            "environment": env_out,
            "gamma": self.gamma,
            "fc": self.fc,
            "bounds": [b.x_l, b.x_u, b.y_l, b.y_u, b.h_l, None if math.isinf(b.h_u) else b.h_u],
            "d_u": self.d_u,
            "world": self.world.to_dict(),
            "users": users,
            "fit": {"k1": self.fit.k1, "k2": self.fit.k2},
            "pwl": {"tau_vertices": list(self.pwl.tau_vertices), "d_vertices": list(self.pwl.d_vertices),
                    "n_breakpoints": self.pwl.n_breakpoints},
            "gamma_star": self.gamma_star_override,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    def digest(self) -> str:
        """Stable hash of the canonical JSON form."""
        return hashlib.sha256(json.dumps(self.to_dict(), sort_keys=True).encode()).hexdigest()[:16]

    @classmethod
    def from_dict(cls, d: dict) -> "Scenario":
        try:
            return _scenario_from_dict(d)
        except ScenarioError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise ScenarioError(f"invalid scenario: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "Scenario":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"scenario is not valid JSON: {exc}") from exc
        return cls.from_dict(d)

    @classmethod
    def load(cls, path) -> "Scenario":
        with open(path) as fh:
            return cls.from_json(fh.read())


def _scenario_from_dict(d):
    if not isinstance(d, dict):
        raise ScenarioError("scenario must be a JSON object")
    version = d.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ScenarioError(f"unsupported schema_version {version!r}")
    base = Scenario()
    kw = {"name": d.get("name", "custom")}

    env = d.get("environment", "dense-urban")
    if isinstance(env, str):
        try:
            kw["environment"] = channel.get_environment(env)
        except KeyError as exc:
            raise ScenarioError(str(exc)) from exc
    else:
        kw["environment"] = channel.Environment(float(env["a"]), float(env["b"]), float(env["eta_los"]),
                                                float(env["eta_nlos"]), env.get("name", "custom"))
    for key in ("gamma", "fc", "d_u"):
        if key in d:
            kw[key] = float(d[key])
    if "bounds" in d:
        b = list(d["bounds"])
        if len(b) == 4:
            b += [0.0, None]
        if len(b) != 6:
            raise ScenarioError("bounds needs 4 or 6 numbers")
        kw["bounds"] = Bounds(*map(float, b[:5]), math.inf if b[5] is None else float(b[5]))
    if "world" in d:
        w = d["world"]
        if w.get("shape", "disk") == "disk":
            kw["world"] = World("disk", float(w["W"]))
        else:
            kw["world"] = World("rectangle", box=tuple(float(v) for v in w["box"]))
    users = d.get("users", {})
    if "explicit" in users:
        pts = tuple((float(x), float(y)) for x, y in users["explicit"])
        kw["explicit_users"] = pts
        kw["user_count"] = len(pts)
    else:
        kw["user_count"] = int(users.get("count", base.user_count))
        kw["seed"] = int(users.get("seed", base.seed))
    if "fit" in d:
        kw["fit"] = PersuasionFit(float(d["fit"]["k1"]), float(d["fit"]["k2"]))
    if "pwl" in d:
        p = d["pwl"]
        kw["pwl"] = PwlConfig(tuple(map(float, p.get("tau_vertices", PAPER_TAU_VERTICES))),
                              tuple(map(float, p.get("d_vertices", PAPER_D_VERTICES))),
                              int(p.get("n_breakpoints", 3)))
    if d.get("gamma_star") is not None:
        kw["gamma_star_override"] = float(d["gamma_star"])
    return Scenario(**kw)


def paper_default() -> Scenario:
    """Tabulated simulation setup: dense urban, 90 dB, 2.5 GHz, 15 users in a 700 m disk."""
    return Scenario(gamma_star_override=209.0, name="paper-default")


def derived_default() -> Scenario:
    """As ``paper_default`` but with the coverage radius derived from the channel model."""
    return replace(paper_default(), gamma_star_override=None, name="derived-default")


PRESETS = {"paper-default": paper_default, "derived-default": derived_default}


def get_preset(name: str) -> Scenario:
    try:
        return PRESETS[name]()
    except KeyError:
        raise ScenarioError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None


def trial_seeds(master_seed: int, trials: int):
    """Independent child seed sequences, one per trial."""
    return np.random.SeedSequence(master_seed).spawn(trials)


def _rng(seed):
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.PCG64(seed))
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed))))


def generate_users(world: World, count: int, seed):
    """``count`` users uniform i.i.d. over ``world``; deterministic in ``seed``."""
    if count < 0:
        raise ValueError("count must be nonnegative")
    if count == 0:
        return []
    rng = _rng(seed)
    if world.shape == "disk":
        r = world.W * np.sqrt(rng.random(count))
        th = rng.uniform(0.0, 2.0 * math.pi, count)
        xy = np.column_stack([r * np.cos(th), r * np.sin(th)])
    else:
        x_l, x_u, y_l, y_u = world.box
        xy = np.column_stack([rng.uniform(x_l, x_u, count), rng.uniform(y_l, y_u, count)])
    return users_from_xy(xy)


__all__ = [
    "GENERATOR", "PRESETS", "PwlConfig", "SCHEMA_VERSION", "Scenario", "ScenarioError", "World",
    "derived_default", "generate_users", "get_preset", "paper_default", "trial_seeds",
]
