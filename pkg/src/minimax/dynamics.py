"""Simultaneous gradient descent-ascent."""
import logging
from dataclasses import dataclass

import numpy as np

from src.certify.certificate import jsonable

logger = logging.getLogger(__name__)


@dataclass
class GdaTrace:
    trajectory: np.ndarray
    converged: bool
    diverged: bool
    norm_nondecreasing: bool
    iterations: int

    @property
    def terminal(self):
        return self.trajectory[-1]

    def to_dict(self):
        return jsonable({'terminal': self.terminal,
                         'converged': self.converged,
                         'diverged': self.diverged,
                         'norm_nondecreasing': self.norm_nondecreasing,
                         'iterations': self.iterations})

    def rows(self):
        for k, point in enumerate(self.trajectory):
            yield {'iteration': k,
                   **{f'x{i}': c for i, c in enumerate(point)}}


def gda(problem, x0, y0, step_x, step_y, iters, tol=1e-6):
    """x <- x - step_x grad_x f, y <- y + step_y grad_y f, in lockstep.

    Stops once the gradient norm drops below ``tol`` or the iterate leaves
    the box scaled ten times about its center.
    """
    if step_x <= 0 or step_y <= 0:
        raise ValueError("steps must be positive")
    n_x = problem.n_x
    z = np.concatenate([np.atleast_1d(x0), np.atleast_1d(y0)]).astype(float)
    scale = np.where(np.arange(len(z)) < n_x, -step_x, step_y)
    outer = problem.box.scaled(10.0)
    path = [z.copy()]
    converged = diverged = False
    for _ in range(iters):
        g = problem.field.gradient(z)
        if np.linalg.norm(g) <= tol:
            converged = True
            break
        z = z + scale * g
        path.append(z.copy())
        if not outer.contains(z) or not np.all(np.isfinite(z)):
            diverged = True
            logger.warning(f"descent-ascent left the box at {z.tolist()}")
            break
    else:
        converged = np.linalg.norm(problem.field.gradient(z)) <= tol

    path = np.array(path)
    norms = np.linalg.norm(path, axis=1)
    nondecreasing = len(path) > 1 and bool(
        np.all(np.diff(norms) >= -1e-12 * (1 + norms[:-1])))
    if nondecreasing and not converged:
        logger.warning("iterate norm never decreased; rotation around the "
                       "saddle")
    return GdaTrace(path, bool(converged), diverged, nondecreasing,
                    len(path) - 1)
