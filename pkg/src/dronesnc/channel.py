"""Air-to-ground propagation: LOS probability, mean path loss and the
altitude/radius trade-off of a drone base station.

Elevation angles enter the LOS S-curve in degrees. ``Gamma(alpha)`` is the
largest ground radius a drone can serve when its altitude is ``alpha`` times
that radius; its peak ``Gamma*`` at ``alpha*`` fixes the coverage disk used by
every placement method.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from ._numerics import golden_section_max

SPEED_OF_LIGHT = 299_792_458.0

ALPHA_MIN = 0.01
ALPHA_MAX = 100.0


class ChannelDomainError(ValueError):
    """Raised when the elevation angle is undefined (drone on top of the user)."""


class AlphaStarNotFound(RuntimeError):
    pass


@dataclass(frozen=True)
class Environment:
    a: float
    b: float
    eta_los: float
    eta_nlos: float
    name: str = "custom"

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise ValueError(f"S-curve parameters must be positive, got a={self.a}, b={self.b}")
        if not (self.eta_nlos >= self.eta_los >= 0):
            raise ValueError("need eta_nlos >= eta_los >= 0")

    @property
    def z1(self) -> float:
        return self.eta_los - self.eta_nlos

    def z2(self, fc: float, c: float = SPEED_OF_LIGHT) -> float:
        return 20.0 * math.log10(4.0 * math.pi * fc / c) + self.eta_nlos


ENVIRONMENTS = {
    "suburban": Environment(4.88, 0.43, 0.1, 21.0, "suburban"),
    "urban": Environment(9.61, 0.16, 1.0, 20.0, "urban"),
    "dense-urban": Environment(12.08, 0.11, 1.6, 23.0, "dense-urban"),
}


def get_environment(name: str) -> Environment:
    try:
        return ENVIRONMENTS[name]
    except KeyError:
        raise KeyError(f"unknown environment {name!r}; choose from {sorted(ENVIRONMENTS)}") from None


@dataclass(frozen=True)
class ChannelConfig:
    fc: float
    gamma: float
    c: float = SPEED_OF_LIGHT

    def __post_init__(self):
        if self.fc <= 0:
            raise ValueError("carrier frequency must be positive")

    def z2(self, env: Environment) -> float:
        return env.z2(self.fc, self.c)


@dataclass(frozen=True)
class AlphaStarResult:
    alpha_star: float
    gamma_star: float
    iterations: int
    residual: float


def _check_geometry(h, r):
    h = np.asarray(h, dtype=float)
    r = np.asarray(r, dtype=float)
    if np.any(h < 0) or np.any(r < 0):
        raise ValueError("altitude and ground distance must be non-negative")
    if np.any((h == 0) & (r == 0)):
        raise ChannelDomainError("elevation angle undefined at h = r = 0")
    return h, r


def _los_from_angle(theta_deg, env):
    return 1.0 / (1.0 + env.a * np.exp(-env.b * (theta_deg - env.a)))


def los_probability(h, r, env: Environment):
    """Probability of a line-of-sight link at altitude ``h`` and ground distance ``r`` (m)."""
    h, r = _check_geometry(h, r)
    theta = np.degrees(np.arctan2(h, r))
    p = _los_from_angle(theta, env)
    return float(p) if p.ndim == 0 else p


def path_loss(h, r, env: Environment, cfg: ChannelConfig):
    """Mean air-to-ground path loss in dB."""
    h, r = _check_geometry(h, r)
    dist = np.hypot(h, r)
    theta = np.degrees(np.arctan2(h, r))
    pl = 20.0 * np.log10(dist) + env.z1 * _los_from_angle(theta, env) + cfg.z2(env)
    return float(pl) if pl.ndim == 0 else pl


def los_probability_ratio(alpha, env: Environment):
    """LOS probability expressed through the altitude/radius ratio."""
    alpha = np.asarray(alpha, dtype=float)
    p = _los_from_angle(np.degrees(np.arctan(alpha)), env)
    return float(p) if p.ndim == 0 else p


def gamma_of_alpha(alpha, env: Environment, cfg: ChannelConfig):
    """Maximum ground coverage radius (m) when the altitude is ``alpha`` times the radius."""
    alpha = np.asarray(alpha, dtype=float)
    if np.any(alpha <= 0):
        raise ValueError("alpha must be positive")
    p = _los_from_angle(np.degrees(np.arctan(alpha)), env)
    g = np.sqrt(10.0 ** ((cfg.gamma - env.z1 * p - cfg.z2(env)) / 10.0) / (1.0 + alpha**2))
    return float(g) if g.ndim == 0 else g


def stationarity(alpha, env: Environment):
    """Left-hand side of the optimality condition for ``alpha*``.

    ``alpha*pi*(a*E + 1)^2 - k3*E`` with ``E = exp(-b(theta - a))`` and
    ``k3 = -9 ln(10) a b z1``. dGamma/dalpha has the opposite sign.
    """
    alpha = np.asarray(alpha, dtype=float)
    e = np.exp(-env.b * (np.degrees(np.arctan(alpha)) - env.a))
    k3 = -9.0 * math.log(10.0) * env.a * env.b * env.z1
    s = alpha * math.pi * (env.a * e + 1.0) ** 2 - k3 * e
    return float(s) if s.ndim == 0 else s


def dgamma_dalpha(alpha, env: Environment, cfg: ChannelConfig):
    alpha = np.asarray(alpha, dtype=float)
    e = np.exp(-env.b * (np.degrees(np.arctan(alpha)) - env.a))
    dlog = -stationarity(alpha, env) / (math.pi * (1.0 + alpha**2) * (env.a * e + 1.0) ** 2)
    d = gamma_of_alpha(alpha, env, cfg) * dlog
    return float(d) if np.ndim(d) == 0 else d


def find_alpha_star(env: Environment, cfg: ChannelConfig, tol: float = 1e-6,
                    lo: float = ALPHA_MIN, hi: float = ALPHA_MAX) -> AlphaStarResult:
    """Locate the peak of ``Gamma(alpha)`` by bisection on the derivative sign."""
    s_lo, s_hi = stationarity(lo, env), stationarity(hi, env)
    # Gamma increases while the stationarity expression is negative
    if not (s_lo < 0 < s_hi):
        raise AlphaStarNotFound(
            f"no sign change of dGamma/dalpha on [{lo}, {hi}] for environment {env.name!r}"
        )
    root, info = optimize.bisect(lambda x: stationarity(x, env), lo, hi, xtol=tol,
                                 full_output=True)
    return AlphaStarResult(
        alpha_star=root,
        gamma_star=gamma_of_alpha(root, env, cfg),
        iterations=info.iterations,
        residual=abs(stationarity(root, env)),
    )


def best_feasible_alpha(radius: float, h_min: float, h_max: float, env: Environment,
                        cfg: ChannelConfig, tol: float = 1e-9) -> float:
    """Ratio maximizing Gamma subject to ``h_min <= alpha * radius <= h_max``."""
    lo = max(h_min / radius, 1e-9)
    hi = min(h_max / radius, 1e6)
    if hi < lo:
        raise ValueError("altitude bounds are empty")
    x, _, _ = golden_section_max(lambda a: gamma_of_alpha(a, env, cfg), lo, hi, tol)
    # unimodal peak pinned to an edge: report the edge exactly
    for edge in (lo, hi):
        if gamma_of_alpha(edge, env, cfg) >= gamma_of_alpha(x, env, cfg):
            x = edge
    return x
