"""Deterministic multistart search: starts, batched projected descent,
slice optima and stationary points."""
import logging
from dataclasses import dataclass, field
from typing import List

import numpy as np
from scipy.optimize import least_squares
from scipy.stats import qmc

from src.config import config
from src.errors import DivergenceError

logger = logging.getLogger(__name__)


def halton_points(lo, hi, count, seed=None):
    """``count`` scrambled Halton points in the box [lo, hi]."""
    seed = config.numerics.seed if seed is None else seed
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    sampler = qmc.Halton(d=len(lo), scramble=True, seed=seed)
    return qmc.scale(sampler.random(count), lo, hi)


def sphere_directions(n, count=None, seed=None):
    """Unit directions covering the sphere S^(n-1) deterministically."""
    count = count or 64 * n
    seed = config.numerics.seed if seed is None else seed
    if n == 1:
        return np.array([[-1.0], [1.0]])
    if n == 2:
        theta = 2 * np.pi * np.arange(count) / count
        return np.stack([np.cos(theta), np.sin(theta)], axis=1)
    if n == 3:
        # Fibonacci sphere
        k = np.arange(count) + 0.5
        z = 1 - 2 * k / count
        radius = np.sqrt(1 - z ** 2)
        phi = np.pi * (3 - np.sqrt(5)) * k
        return np.stack([radius * np.cos(phi), radius * np.sin(phi), z],
                        axis=1)
    sampler = qmc.MultivariateNormalQMC(mean=np.zeros(n), seed=seed)
    raw = sampler.random(count)
    return raw / np.linalg.norm(raw, axis=1, keepdims=True)


def _checked(values, points):
    bad = ~np.isfinite(values)
    if bad.any():
        where = points[np.argmax(bad)]
        raise DivergenceError(f"non-finite value at {where.tolist()}")
    return values


def projected_descent(field, points, free=None, lo=None, hi=None, sign=1.0,
                      iters=None, tol=None):
    """Projected gradient descent with Armijo backtracking, row by row.

    Only the ``free`` coordinates move; they are kept inside [lo, hi].
    ``sign=-1`` ascends. Returns the final points and their values of f.
    """
    iters = iters or config.numerics.max_iters
    tol = config.numerics.opt_tol if tol is None else tol
    armijo = config.numerics.armijo_c
    shrink = config.numerics.armijo_shrink

    x = np.array(points, dtype=float)
    m, n = x.shape
    free = np.arange(n) if free is None else np.asarray(free)
    lo = np.full(len(free), -np.inf) if lo is None else np.asarray(lo)
    hi = np.full(len(free), np.inf) if hi is None else np.asarray(hi)

    f, g = field.value_and_gradient_batch(x)
    f = sign * _checked(f, x)
    g = sign * g[:, free]
    step = np.ones(m)
    active = np.ones(m, dtype=bool)

    for _ in range(iters):
        rows = np.nonzero(active)[0]
        if rows.size == 0:
            break
        step[rows] = np.minimum(step[rows] / shrink, 1e4)
        moved = np.zeros(rows.size, dtype=bool)
        distance = np.zeros(rows.size)
        pending = np.arange(rows.size)
        for _ in range(60):
            if pending.size == 0:
                break
            r = rows[pending]
            base = x[r][:, free]
            trial_free = np.clip(base - step[r, None] * g[r], lo, hi)
            trial = x[r].copy()
            trial[:, free] = trial_free
            change = trial_free - base
            with np.errstate(invalid='ignore', over='ignore'):
                ft = sign * field.evaluate_batch(trial)
            ok = ft <= f[r] + armijo * np.sum(g[r] * change, axis=1)
            ok &= np.isfinite(ft)
            accepted = r[ok]
            x[accepted] = trial[ok]
            f[accepted] = ft[ok]
            moved[pending[ok]] = True
            distance[pending[ok]] = np.linalg.norm(change[ok], axis=1)
            step[r[~ok]] *= shrink
            pending = pending[~ok]

        done = rows[~moved]
        moved_rows = rows[moved]
        if moved_rows.size:
            fm, gm = field.value_and_gradient_batch(x[moved_rows])
            f[moved_rows] = sign * _checked(fm, x[moved_rows])
            g[moved_rows] = sign * gm[:, free]
            small = distance[moved] <= tol
            done = np.concatenate([done, moved_rows[small]])
        active[done] = False
    return x, sign * f


def cluster_points(points, values, radius):
    """Greedy clustering in order of (value, coordinates)."""
    points = np.asarray(points, dtype=float)
    if len(points) == 0:
        return points, np.asarray(values, dtype=float)
    order = np.lexsort(tuple(points.T[::-1]) + (values,))
    kept = []
    for i in order:
        if all(np.linalg.norm(points[i] - points[j]) >= radius
               for j in kept):
            kept.append(i)
    kept = np.array(kept)
    return points[kept], np.asarray(values)[kept]


def slice_optimum(field, bases, free, lo, hi, sense='min', candidates=None,
                  starts=None):
    """Optimum of f over the ``free`` coordinates for each base point.

    ``candidates`` (k, n_free) seeds each slice, typically its best grid
    node. Returns (values, argopt) per slice.
    """
    bases = np.atleast_2d(np.asarray(bases, dtype=float))
    k = len(bases)
    starts = config.numerics.slice_starts if starts is None else starts
    seeds = halton_points(lo, hi, starts)
    if candidates is not None:
        seeds_per = [np.vstack([np.atleast_2d(c), seeds])
                     for c in np.asarray(candidates, dtype=float)]
    else:
        seeds_per = [seeds] * k
    per_slice = len(seeds_per[0])
    rows = np.repeat(bases, per_slice, axis=0)
    rows[:, free] = np.vstack(seeds_per)
    sign = 1.0 if sense == 'min' else -1.0
    x, f = projected_descent(field, rows, free, lo, hi, sign)
    f = (sign * f).reshape(k, per_slice)
    best = np.argmin(f, axis=1)
    x = x.reshape(k, per_slice, -1)[np.arange(k), best][:, free]
    return sign * f[np.arange(k), best], x


@dataclass
class MinimumEstimate:
    f_star: float
    argmin_points: np.ndarray
    boundary_attained: bool

    def to_dict(self):
        return {'f_star': self.f_star,
                'argmin_points': self.argmin_points.tolist(),
                'boundary_attained': self.boundary_attained}


def _on_boundary(points, grads, lo, hi, tol_grad):
    """Points resting on a face while the gradient pushes outward."""
    width = np.subtract(hi, lo)
    at_lo = np.abs(points - lo) <= 1e-9 * width
    at_hi = np.abs(points - hi) <= 1e-9 * width
    outward = (at_lo & (grads > tol_grad)) | (at_hi & (grads < -tol_grad))
    return outward.any(axis=1)


def estimate_minimum(field, box, starts=None, iters=None, tol=1e-8):
    """Multistart projected descent over ``box``."""
    starts = starts or config.numerics.starts
    x, f = projected_descent(field, halton_points(box.lo, box.hi, starts),
                             lo=box.lo, hi=box.hi, iters=iters)
    f_star = float(np.min(f))
    near = f <= f_star + tol * (1 + abs(f_star))
    radius = config.numerics.cluster_fraction * box.diameter
    points, _ = cluster_points(x[near], f[near], radius)
    _, grads = field.value_and_gradient_batch(points)
    boundary = bool(_on_boundary(points, grads, box.lo, box.hi,
                                 config.minimax.tol_grad).any())
    if boundary:
        logger.warning(f"minimum {f_star:.6g} is attained on the box "
                       f"boundary")
    return MinimumEstimate(f_star, points, boundary)


@dataclass
class StationaryPointSet:
    points: np.ndarray
    values: np.ndarray
    gradient_norms: np.ndarray
    radius: float
    tolerance: float = 0.0
    extra: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.points)

    def to_dict(self):
        return {'points': self.points.tolist(),
                'values': self.values.tolist(),
                'gradient_norms': self.gradient_norms.tolist(),
                'radius': self.radius}


def find_stationary_points(field, box, starts=None, tol_grad=None):
    """Zeros of the gradient found by least squares from Halton starts."""
    starts = starts or config.numerics.starts
    tol_grad = config.minimax.tol_grad if tol_grad is None else tol_grad
    found: List[np.ndarray] = []
    for start in halton_points(box.lo, box.hi, starts):
        result = least_squares(field.gradient, start,
                               bounds=(box.lo, box.hi), xtol=1e-15,
                               ftol=1e-15, gtol=1e-15)
        found.append(result.x)
    found = np.array(found)
    values, grads = field.value_and_gradient_batch(found)
    norms = np.linalg.norm(grads, axis=1)
    keep = norms <= tol_grad
    radius = config.numerics.cluster_fraction * box.diameter
    points, values = cluster_points(found[keep], values[keep], radius)
    grads = np.zeros((0, field.dimension))
    if len(points):
        _, grads = field.value_and_gradient_batch(points)
    logger.info(f"{len(points)} stationary point(s) from {starts} starts")
    return StationaryPointSet(points, values, np.linalg.norm(grads, axis=1),
                              radius, tol_grad)
