"""Drone base station placement with user-in-the-loop incentives."""

from .channel import ChannelConfig, Environment, ENVIRONMENTS, find_alpha_star, get_environment
from .jsnc import SolverOptions, exact_profit, solve_exact, solve_jsnc, solve_semi_jsnc
from .model import Bounds, Placement, RegionFlags, SncSolution, User, users_from_xy
from .pwl import build_grid, fit_pwl1d, triangle_approx
from .regional import RegionalModel, optimal_regional_incentive, tau_infinity
from .scenario import Scenario, generate_users, paper_default
from .uil import DEFAULT_FIT, PersuasionFit, beta, optimal_incentive, unit_profit
from .usnc import no_uil_baseline, solve_usnc, usnc

__version__ = "0.1.0"
