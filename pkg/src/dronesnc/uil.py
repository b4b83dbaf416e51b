"""User-in-the-loop persuasion model.

A user offered a discount ``tau`` accepts to move a distance ``d`` with
probability ``exp(-beta(tau) d)``, where the persuasion parameter follows a
logarithmic fit ``beta(tau) = k1 ln(tau) + k2``. The operator keeps the
fraction ``1 - tau`` of the service price, so the expected unit profit of an
offer is ``(1 - tau) exp(-beta(tau) d)``.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

# survey incentives and the persuasion values measured for them
SURVEY_TAU = (0.2, 0.4, 0.6, 0.8)
SURVEY_BETA = (0.0244, 0.0164, 0.0117, 0.0082)


class IncentiveDomainError(ValueError):
    pass


@dataclass(frozen=True)
class PersuasionFit:
    k1: float = -0.01166
    k2: float = 0.005676

    def __post_init__(self):
        if not self.k1 < 0:
            raise ValueError("k1 must be negative so that beta decreases with the incentive")


DEFAULT_FIT = PersuasionFit()


@dataclass(frozen=True)
class IncentiveOffer:
    user_id: int
    tau: float
    d: float
    accept_prob: float
    expected_profit: float


def _check_tau(tau):
    tau = np.asarray(tau, dtype=float)
    if np.any(tau <= 0) or np.any(tau > 1):
        raise IncentiveDomainError("incentive must lie in (0, 1]; tau = 0 means no offer")
    return tau


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def beta(tau, fit: PersuasionFit = DEFAULT_FIT):
    """Persuasion parameter (1/m) for discount ``tau``."""
    tau = _check_tau(tau)
    return _scalar(fit.k1 * np.log(tau) + fit.k2)


def move_probability(tau, d, fit: PersuasionFit = DEFAULT_FIT):
    """Probability that a user offered ``tau`` agrees to move ``d`` metres."""
    d = np.asarray(d, dtype=float)
    if np.any(d < 0):
        raise ValueError("move distance must be non-negative")
    b = np.asarray(beta(tau, fit))
    if np.any(b < 0):
        warnings.warn("negative persuasion parameter; move probability clamped to 1",
                      RuntimeWarning, stacklevel=2)
    return _scalar(np.minimum(np.exp(-b * d), 1.0))


def unit_profit(tau, d, fit: PersuasionFit = DEFAULT_FIT):
    """Expected normalized revenue ``(1 - tau) exp(-beta(tau) d)``."""
    tau = _check_tau(tau)
    return _scalar((1.0 - tau) * move_probability(tau, d, fit))


def optimal_tau(d, fit: PersuasionFit = DEFAULT_FIT):
    """Profit-maximizing discount for a required move ``d``; 0 where ``d == 0``."""
    d = np.asarray(d, dtype=float)
    if np.any(d < 0):
        raise ValueError("move distance must be non-negative")
    kd = fit.k1 * d
    return _scalar(kd / (kd - 1.0))


def optimal_profit(d, fit: PersuasionFit = DEFAULT_FIT):
    """Best achievable unit profit for a required move ``d`` (1 at ``d == 0``).

    Vectorized; at the optimum ``ln(tau*)`` enters ``beta`` directly so no
    singular log is evaluated at ``d == 0``.
    """
    d = np.asarray(d, dtype=float)
    t = np.asarray(optimal_tau(d, fit))
    with np.errstate(divide="ignore", invalid="ignore"):
        b = fit.k1 * np.log(t) + fit.k2
        out = np.where(d > 0, (1.0 - t) * np.exp(-np.maximum(b, 0.0) * d), 1.0)
    return _scalar(out)


def optimal_incentive(d: float, fit: PersuasionFit = DEFAULT_FIT):
    """Return ``(tau*, profit at tau*)``; ``(0, 1)`` when no move is needed."""
    if d < 0:
        raise ValueError("move distance must be non-negative")
    if d == 0:
        return 0.0, 1.0
    t = optimal_tau(d, fit)
    return t, unit_profit(t, d, fit)


def make_offer(user_id: int, d: float, fit: PersuasionFit = DEFAULT_FIT, tau=None) -> IncentiveOffer:
    """Offer for a user that must move ``d``; ``tau`` defaults to the optimal incentive."""
    if d <= 0:
        return IncentiveOffer(user_id, 0.0, 0.0, 1.0, 1.0)
    if tau is None:
        tau = optimal_tau(d, fit)
    p = move_probability(tau, d, fit)
    return IncentiveOffer(user_id, float(tau), float(d), p, (1.0 - tau) * p)


def fit_rmse(fit: PersuasionFit = DEFAULT_FIT, taus=SURVEY_TAU, betas=SURVEY_BETA) -> float:
    err = np.asarray(beta(np.asarray(taus), fit)) - np.asarray(betas)
    return math.sqrt(float(np.mean(err**2)))


def profit_second_derivative(tau, d, fit: PersuasionFit = DEFAULT_FIT):
    """Analytic d^2 Pi / d tau^2, used as a concavity certificate at ``tau*``.

    With ``c = -k1 d`` the profit is ``exp(-k2 d) (tau^c - tau^(c+1))``.
    """
    tau = _check_tau(tau)
    c = -fit.k1 * d
    return _scalar(np.exp(-fit.k2 * d) * c * tau ** (c - 2.0) * ((c - 1.0) - (c + 1.0) * tau))
