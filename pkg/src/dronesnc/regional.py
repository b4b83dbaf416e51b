"""Regional analysis for users spread uniformly over a disk world.

A single regional incentive ``tau`` is offered to every user in the annulus of
width ``d_u`` around the coverage disk. Optima are located by golden-section
search and certified on a dense grid; the analytic stationarity conditions are
kept as residual checks.
"""

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy import integrate, optimize

from ._numerics import golden_section_max, sign_changes
from .uil import DEFAULT_FIT, PersuasionFit, beta

TAU_FLOOR = 1e-4
CERT_SAMPLES = 10_000


@dataclass(frozen=True)
class RegionalModel:
    R: float
    W: float
    d_u: float
    density: float = 0.0
    fit: PersuasionFit = DEFAULT_FIT

    def __post_init__(self):
        if not (0 < self.R <= self.W):
            raise ValueError("need 0 < R <= W")
        if not (0 <= self.d_u <= self.W - self.R + 1e-9):
            raise ValueError("need 0 <= d_u <= W - R")
        if self.density < 0:
            raise ValueError("density must be nonnegative")

    @property
    def users(self) -> float:
        return self.density * math.pi * self.W**2


@dataclass(frozen=True)
class RegionalOptimum:
    tau_star: float
    profit: float
    gain_percent: float
    stationarity_residual: float = float("nan")


def _beta_checked(tau, fit):
    tau = np.asarray(tau, dtype=float)
    if np.any(tau <= 0) or np.any(tau > 1):
        raise ValueError("tau must lie in (0, 1]")
    b = beta(tau, fit)
    if np.any(b <= 0):
        raise ValueError("persuasion rate is nonpositive for this tau")
    return b


def p_cov_core(model: RegionalModel) -> float:
    return model.R**2 / model.W**2


def _annulus_mass(b, R, d_u):
    # integral of 2 r e^{-b (r - R)} over [R, R + d_u], i.e.
    # 2((-b(R + d_u) - 1) e^{-b d_u} + bR + 1) / b^2, rearranged into two
    # nonnegative terms to avoid cancellation when b d_u is small
    x = np.asarray(b * d_u, dtype=float)
    small = np.exp(-x) * (np.expm1(np.minimum(x, 1.0)) - x)
    tail = np.where(x < 1.0, small, -np.expm1(-x) - x * np.exp(-x))
    return 2.0 * (-b * R * np.expm1(-x) + tail) / b**2


def p_cov_uil(model: RegionalModel, tau):
    """Probability that a user sits in the band and accepts the move."""
    b = _beta_checked(tau, model.fit)
    out = _annulus_mass(b, model.R, model.d_u) / model.W**2
    return float(out) if np.ndim(out) == 0 else out


def p_cov_uil_quad(model: RegionalModel, tau: float) -> float:
    """Adaptive quadrature of the same integral; used as an oracle."""
    b = float(_beta_checked(tau, model.fit))
    val, _ = integrate.quad(lambda r: 2.0 * r / model.W**2 * math.exp(-b * (r - model.R)),
                            model.R, model.R + model.d_u, epsabs=0.0, epsrel=1e-12, limit=200)
    return val


def regional_profit(model: RegionalModel, tau):
    """Average normalized revenue per user."""
    return p_cov_core(model) + p_cov_uil(model, tau) * (1.0 - np.asarray(tau, dtype=float))


def uil_gain_percent(model: RegionalModel, tau):
    pr = p_cov_core(model)
    if pr == 0:
        raise ZeroDivisionError("gain undefined without a coverage core")
    return 100.0 * p_cov_uil(model, tau) * (1.0 - np.asarray(tau, dtype=float)) / pr


def regional_stationarity(model: RegionalModel, tau: float) -> float:
    """d(profit)/d(tau), from the closed form; zero at interior optima."""
    b = float(_beta_checked(tau, model.fit))
    R, d_u, W = model.R, model.d_u, model.W
    e = math.exp(-b * d_u)
    n = (-b * (R + d_u) - 1.0) * e + b * R + 1.0
    dn = -(R + d_u) * e + d_u * (b * (R + d_u) + 1.0) * e + R
    dp_db = 2.0 * (dn * b - 2.0 * n) / (W**2 * b**3)
    p = 2.0 * n / (W**2 * b**2)
    return dp_db * model.fit.k1 / tau * (1.0 - tau) - p


def optimal_regional_incentive(model: RegionalModel, tol: float = 1e-6, floor: float = TAU_FLOOR):
    """Best single incentive for the band; returns a ``RegionalOptimum``.

    Raises ``RuntimeError`` if the dense-grid certificate beats the search.
    """
    if model.d_u <= 0:
        pr = p_cov_core(model)
        return RegionalOptimum(0.0, pr, 0.0, 0.0)
    tau, val, _ = golden_section_max(lambda t: float(regional_profit(model, t)), floor, 1.0, tol)
    grid = np.linspace(floor, 1.0, CERT_SAMPLES)
    g = regional_profit(model, grid)
    if g.max() > val + 1e-9:
        raise RuntimeError("grid certificate exceeds golden-section optimum")
    gain = 100.0 * (val - p_cov_core(model)) / p_cov_core(model)
    return RegionalOptimum(tau, val, gain, regional_stationarity(model, tau))


def is_unimodal(model: RegionalModel, samples: int = CERT_SAMPLES, floor: float = TAU_FLOOR) -> bool:
    g = regional_profit(model, np.linspace(floor, 1.0, samples))
    return sign_changes(np.diff(g)) == 1


def tau_star_sweep(R: float, W: float, d_values, fit: PersuasionFit = DEFAULT_FIT):
    """``(d_u, tau_star)`` pairs at fixed R and W."""
    out = []
    for d in d_values:
        opt = optimal_regional_incentive(RegionalModel(R, W, float(d), fit=fit))
        out.append((float(d), opt.tau_star))
    return out


# --- infinite world --------------------------------------------------------


def infinite_profit_per_density(R: float, tau, fit: PersuasionFit = DEFAULT_FIT):
    """Limit of ``N * profit / (density * pi)`` as W grows with d_u = W - R."""
    b = _beta_checked(tau, fit)
    return R**2 + 2.0 * (1.0 - np.asarray(tau, dtype=float)) * (b * R + 1.0) / b**2


def infinite_stationarity(R: float, tau: float, fit: PersuasionFit = DEFAULT_FIT) -> float:
    """Half the tau-derivative of the infinite-world profit per density."""
    b = float(_beta_checked(tau, fit))
    k1 = fit.k1
    return (k1 * R * (1.0 - tau) / (tau * b**2) - (R * b + 1.0) / b**2
            - 2.0 * k1 * (1.0 - tau) * (R * b + 1.0) / (tau * b**3))


@dataclass(frozen=True)
class InfiniteOptimum:
    tau: float
    profit_per_density: float   # Pi_N^inf / density, i.e. pi * (R^2 + ...)
    residual: float


def tau_infinity(R: float, fit: PersuasionFit = DEFAULT_FIT, tol: float = 1e-6) -> InfiniteOptimum:
    if R <= 0:
        raise ValueError("R must be positive")
    f = lambda t: float(infinite_profit_per_density(R, t, fit))
    tau, _, _ = golden_section_max(f, TAU_FLOOR, 1.0, tol)
    # sharpen on the stationarity condition when it brackets
    g = lambda t: infinite_stationarity(R, t, fit)
    lo, hi = max(TAU_FLOOR, tau - 1e-3), min(1.0, tau + 1e-3)
    if g(lo) * g(hi) < 0:
        tau = optimize.brentq(g, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    return InfiniteOptimum(float(tau), math.pi * f(tau), abs(g(tau)))


def large_world(model: RegionalModel, W: float) -> RegionalModel:
    """Same R with a bigger world and the band stretched to its edge."""
    return replace(model, W=W, d_u=W - model.R)


__all__ = [
    "InfiniteOptimum", "RegionalModel", "RegionalOptimum", "infinite_profit_per_density",
    "infinite_stationarity", "is_unimodal", "large_world", "optimal_regional_incentive", "p_cov_core",
    "p_cov_uil", "p_cov_uil_quad", "regional_profit", "regional_stationarity", "tau_infinity",
    "tau_star_sweep", "uil_gain_percent",
]
