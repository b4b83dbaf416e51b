"""Domain records shared by the placement methods."""

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .uil import IncentiveOffer

METHODS = ("usnc", "jsnc", "semi-jsnc", "exact-oracle", "no-uil")


@dataclass(frozen=True)
class User:
    id: int
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"user {self.id} has non-finite coordinates")


def users_from_xy(xy) -> list:
    return [User(i, float(x), float(y)) for i, (x, y) in enumerate(np.asarray(xy, dtype=float).reshape(-1, 2))]


def users_xy(users) -> np.ndarray:
    return np.array([(u.x, u.y) for u in users], dtype=float).reshape(-1, 2)


@dataclass(frozen=True)
class Bounds:
    x_l: float
    x_u: float
    y_l: float
    y_u: float
    h_l: float = 0.0
    h_u: float = math.inf

    def __post_init__(self):
        if self.x_l > self.x_u or self.y_l > self.y_u or self.h_l > self.h_u:
            raise ValueError("bounds box is empty")

    def contains(self, x, y, tol=1e-9):
        return (self.x_l - tol <= x <= self.x_u + tol) and (self.y_l - tol <= y <= self.y_u + tol)

    def clip(self, xy):
        xy = np.asarray(xy, dtype=float)
        if xy.shape == (2,):
            return np.array([min(max(xy[0], self.x_l), self.x_u), min(max(xy[1], self.y_l), self.y_u)])
        return np.stack([np.clip(xy[..., 0], self.x_l, self.x_u),
                         np.clip(xy[..., 1], self.y_l, self.y_u)], axis=-1)

    @classmethod
    def square(cls, half_width: float, h_l: float = 0.0, h_u: float = math.inf) -> "Bounds":
        return cls(-half_width, half_width, -half_width, half_width, h_l, h_u)


@dataclass(frozen=True)
class Placement:
    x_d: float
    y_d: float
    h_d: float
    radius: float
    alpha: float

    @property
    def center(self):
        return (self.x_d, self.y_d)


@dataclass(frozen=True)
class RegionFlags:
    u: tuple
    w: tuple

    def __post_init__(self):
        if len(self.u) != len(self.w):
            raise ValueError("flag vectors differ in length")
        if any(a and b for a, b in zip(self.u, self.w)):
            raise ValueError("a user cannot be both covered and in the incentive band")


@dataclass(frozen=True)
class SncSolution:
    method: str
    placement: Placement
    flags: RegionFlags
    offers: tuple
    moves: tuple
    objective: float
    approx_objective: float | None = None
    stats: dict = field(default_factory=dict, compare=False)

    @property
    def covered_count(self) -> int:
        return int(sum(self.flags.u))

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "placement": asdict(self.placement),
            "flags": {"u": [int(v) for v in self.flags.u], "w": [int(v) for v in self.flags.w]},
            "offers": [asdict(o) for o in self.offers],
            "moves": [{"user_id": uid, "dx": dx, "dy": dy} for uid, dx, dy in self.moves],
            "objective": self.objective,
            "approx_objective": self.approx_objective,
            "stats": self.stats,
        }


def offers_and_moves(users, center, radius, d_values, taus, fit, w_mask):
    """Build offers plus radial displacement vectors for the users flagged ``w``."""
    from .uil import make_offer

    offers, moves = [], []
    cx, cy = center
    for u, d, t, w in zip(users, d_values, taus, w_mask):
        if not w:
            continue
        offer = make_offer(u.id, float(d), fit, tau=t)
        offers.append(offer)
        dx, dy = cx - u.x, cy - u.y
        norm = math.hypot(dx, dy)
        scale = offer.d / norm if norm > 0 else 0.0
        moves.append((u.id, dx * scale, dy * scale))
    return tuple(offers), tuple(moves)


def solution_objective(flags: RegionFlags, offers) -> float:
    return float(sum(flags.u)) + float(sum(o.expected_profit for o in offers))


__all__ = [
    "Bounds", "IncentiveOffer", "METHODS", "Placement", "RegionFlags", "SncSolution", "User",
    "offers_and_moves", "solution_objective", "users_from_xy", "users_xy",
]
