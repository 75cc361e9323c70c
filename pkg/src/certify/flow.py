"""Gradient flow of g = (f - f_star)^((alpha-1)/alpha)."""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.integrate import solve_ivp

from src.certify.certificate import jsonable
from src.errors import DivergenceError

logger = logging.getLogger(__name__)


@dataclass
class FlowTrace:
    times: np.ndarray
    points: np.ndarray
    values: np.ndarray
    terminal_time: float
    terminal_point: np.ndarray
    converged: bool
    time_bound: Optional[float] = None

    @property
    def within_bound(self):
        if self.time_bound is None:
            return None
        return bool(self.terminal_time <= self.time_bound)

    def to_dict(self):
        return jsonable({
            'terminal_time': self.terminal_time,
            'terminal_point': self.terminal_point,
            'converged': self.converged,
            'time_bound': self.time_bound,
            'within_bound': self.within_bound,
            'steps': len(self.times),
        })

    def rows(self):
        for t, p, v in zip(self.times, self.points, self.values):
            yield {'t': t, **{f'x{i}': c for i, c in enumerate(p)},
                   'value': v}


def flow_time_bound(g0, alpha, mu):
    return g0 * (alpha / (alpha - 1)) ** 2 * mu ** (-2 / alpha)


def pl_gradient_flow(field, x0, alpha, f_star, mu=None, stop_eps=1e-8,
                     t_max=1e3, rtol=1e-8, atol=1e-10):
    """Integrate dx/dt = -grad g until f - f_star <= stop_eps.

    Under alpha-PL with constant ``mu`` the stopping time is at most
    g(x0) (alpha/(alpha-1))^2 mu^(-2/alpha); the bound is reported when
    ``mu`` is given.
    """
    if alpha <= 1:
        raise ValueError("alpha must exceed 1")
    x0 = np.asarray(x0, dtype=float)
    power = (alpha - 1) / alpha
    gap0 = field.evaluate(x0) - f_star
    bound = None
    if mu is not None:
        bound = flow_time_bound(max(gap0, 0.0) ** power, alpha, mu)
    if gap0 <= stop_eps:
        return FlowTrace(np.zeros(0), np.zeros((0, len(x0))), np.zeros(0),
                         0.0, x0, True, bound)

    def rhs(_, x):
        value = field.evaluate(x) - f_star
        if value <= 0:
            return np.zeros_like(x)
        return -power * value ** (-1 / alpha) * field.gradient(x)

    def reached(_, x):
        return field.evaluate(x) - f_star - stop_eps
    reached.terminal = True
    reached.direction = -1

    solution = solve_ivp(rhs, (0.0, t_max), x0, method='RK45',
                         events=reached, rtol=rtol, atol=atol)
    if solution.status == -1:
        raise DivergenceError(f"gradient flow failed: {solution.message}")
    converged = solution.status == 1
    if converged:
        terminal_time = float(solution.t_events[0][0])
        terminal_point = solution.y_events[0][0]
    else:
        logger.warning(f"flow did not reach f - f_star <= {stop_eps:g} "
                       f"by t = {t_max:g}")
        terminal_time = float(solution.t[-1])
        terminal_point = solution.y[:, -1]
    points = solution.y.T
    values = field.evaluate_batch(points)
    return FlowTrace(solution.t, points, values, terminal_time,
                     terminal_point, converged, bound)
