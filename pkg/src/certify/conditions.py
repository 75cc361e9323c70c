"""Grid certification of invexity, PL, growth and coercivity conditions."""
import logging

import numpy as np
from scipy.spatial import cKDTree

from src.certify.blocks import BlockView
from src.certify.certificate import (FAIL, INCONCLUSIVE, PASS, Certificate,
                                     worst_case)
from src.certify.search import (estimate_minimum, find_stationary_points,
                                sphere_directions)
from src.config import config
from src.errors import EmptySetError
from src.grid.components import distances_to_set
from src.grid.lattice import sample, sample_with_gradient
from src.grid.masks import level_mask

logger = logging.getLogger(__name__)


def _verdict(worst, threshold):
    return PASS if worst >= threshold - config.numerics.ratio_tol else FAIL


def _exclusion(eps_excl, reference):
    eps = config.numerics.eps_excl if eps_excl is None else eps_excl
    return eps * (1 + abs(reference))


def _resolve_f_star(field, grid, values, f_star):
    if f_star is not None:
        return float(f_star)
    estimate = estimate_minimum(field, grid.domain)
    return float(min(estimate.f_star, values.min()))


def _ratio_certificate(condition, params, grid, ratios, points, keep,
                       threshold):
    if not keep.any():
        logger.warning(f"{condition}: every node was excluded")
        return Certificate(condition, params, INCONCLUSIVE,
                           grid=grid.to_dict())
    worst, witness = worst_case(ratios[keep], points[keep])
    verdict = _verdict(worst, threshold)
    logger.info(f"{condition}: worst ratio {worst:.6g} against "
                f"{threshold:.6g} -> {verdict}")
    return Certificate(condition, params, verdict, worst, witness,
                       int(keep.sum()), grid.to_dict())


def invexity_verdict(field, box, tol_grad=None, tol_val=1e-6, starts=None):
    """Every stationary point found must be a global minimum."""
    tol_grad = config.minimax.tol_grad if tol_grad is None else tol_grad
    estimate = estimate_minimum(field, box, starts)
    stationary = find_stationary_points(field, box, starts, tol_grad)
    f_star = estimate.f_star
    if len(stationary):
        f_star = float(min(f_star, stationary.values.min()))
    params = {'tol_grad': tol_grad, 'tol_val': tol_val, 'f_star': f_star}
    grid = {**box.to_dict(), 'resolution': None}
    if not len(stationary):
        return Certificate('invexity', params, INCONCLUSIVE, grid=grid)
    gaps = stationary.values - f_star
    worst = int(np.argmax(gaps))
    verdict = PASS if gaps[worst] <= tol_val else FAIL
    return Certificate('invexity', params, verdict, float(gaps[worst]),
                       stationary.points[worst], len(stationary), grid,
                       notes={'stationary_points': stationary.to_dict()})


def check_alpha_pl(field, grid, alpha, mu, eps_excl=None, f_star=None):
    """||grad f||^alpha >= mu (f - f_star) at every non-excluded node."""
    if alpha <= 0 or mu <= 0:
        raise ValueError("alpha and mu must be positive")
    values, grads = sample_with_gradient(field, grid)
    values, grads = values.ravel(), grads.reshape(-1, grid.dimension)
    f_star = _resolve_f_star(field, grid, values, f_star)
    gap = values - f_star
    keep = gap > _exclusion(eps_excl, f_star)
    with np.errstate(divide='ignore', invalid='ignore'):
        ratios = np.linalg.norm(grads, axis=1) ** alpha / gap
    params = {'alpha': alpha, 'mu': mu, 'f_star': f_star}
    return _ratio_certificate('alpha-pl', params, grid, ratios,
                              grid.points(), keep, mu)


def check_block_pl(problem, grid, block, alpha, mu, scale=1.0,
                   eps_excl=None):
    """Block-wise PL around the slice optimum.

    x block: ||grad_x f||^alpha >= scale * mu * (f - min_x f);
    y block: ||grad_y f||^alpha >= scale * mu * (max_y f - f).
    """
    view = BlockView(problem, grid, block)
    opt, _ = view.optimum()
    gap = view.gap()
    keep = gap > _exclusion(eps_excl, 0.0) * (1 + np.abs(opt))[:, None]
    with np.errstate(divide='ignore', invalid='ignore'):
        ratios = view.block_gradient_norm() ** alpha / (scale * gap)
    params = {'block': block, 'alpha': alpha, 'mu': mu, 'scale': scale}
    return _ratio_certificate(f'pl-{block}', params, grid, ratios.ravel(),
                              view.points.reshape(-1, grid.dimension),
                              keep.ravel(), mu)


def check_two_sided_pl(problem, grid, mu1, mu2, eps_excl=None):
    """Both blocks with the factor-2 convention of the two-sided form."""
    return (check_block_pl(problem, grid, 'x', 2, mu1, 2.0, eps_excl),
            check_block_pl(problem, grid, 'y', 2, mu2, 2.0, eps_excl))


def check_growth(field, grid, beta, eta, minima_mask=None, eps_excl=None,
                 f_star=None, tol=1e-9):
    """f - f_star >= eta * d(x, P)^beta with P the minimizer mask."""
    if beta <= 0:
        raise ValueError("beta must be positive")
    values = sample(field, grid).ravel()
    f_star = _resolve_f_star(field, grid, values, f_star)
    if minima_mask is None:
        minima_mask = level_mask(values.reshape(grid.shape),
                                 f_star + tol * (1 + abs(f_star)),
                                 grid=grid)
    if minima_mask.empty:
        raise EmptySetError("minimizer mask is empty")
    points = grid.points()
    distance = distances_to_set(points, minima_mask)
    gap = values - f_star
    keep = (gap > _exclusion(eps_excl, f_star)) & (distance > 0)
    with np.errstate(divide='ignore', invalid='ignore'):
        ratios = gap / distance ** beta
    params = {'beta': beta, 'eta': eta, 'f_star': f_star}
    return _ratio_certificate('growth', params, grid, ratios, points, keep,
                              eta)


def check_block_growth(problem, grid, block, beta, eta, eps_excl=None,
                       tol=None):
    """Growth of the slice gap away from the slice's best-response set."""
    tol = config.minimax.tol_val if tol is None else tol
    view = BlockView(problem, grid, block)
    opt, argopt = view.optimum()
    gap = view.gap()
    response = view.response_mask(tol)
    distance = np.empty_like(gap)
    for k in range(len(gap)):
        nodes = view.points[k][:, view.free]
        targets = np.vstack([nodes[response[k]], argopt[k]])
        distance[k], _ = cKDTree(targets).query(nodes)
    keep = (gap > _exclusion(eps_excl, 0.0) * (1 + np.abs(opt))[:, None]) \
        & (distance > 0)
    with np.errstate(divide='ignore', invalid='ignore'):
        ratios = gap / distance ** beta
    params = {'block': block, 'beta': beta, 'eta': eta}
    return _ratio_certificate(f'growth-{block}', params, grid,
                              ratios.ravel(),
                              view.points.reshape(-1, grid.dimension),
                              keep.ravel(), eta)


def check_increasing_at_infinity(field, center, radii, c, count=None):
    """Shell minima must exceed c from some radius on, without dropping."""
    radii = [float(r) for r in radii]
    if len(radii) < 3 or any(b <= a for a, b in zip(radii, radii[1:])):
        raise ValueError("need at least three increasing radii")
    center = np.asarray(center, dtype=float)
    directions = sphere_directions(field.dimension, count)
    minima, argmins = [], []
    for radius in radii:
        shell = center + radius * directions
        values = field.evaluate_batch(shell)
        i = int(np.argmin(values))
        minima.append(float(values[i]))
        argmins.append(shell[i])

    above = [k for k, m in enumerate(minima) if m > c]
    start = above[0] if above else len(minima) - 1
    tail = minima[start:]
    holds = bool(above) and all(m > c for m in tail) and all(
        b >= a for a, b in zip(tail, tail[1:]))
    worst = start + int(np.argmin(tail))
    params = {'center': center, 'radii': radii, 'level': c,
              'directions': len(directions)}
    return Certificate('increasing-at-infinity', params,
                       PASS if holds else FAIL, minima[worst],
                       argmins[worst], len(directions) * len(radii),
                       notes={'shell_minima': minima})


def pl_growth_constant(alpha, mu):
    """Growth constant implied by alpha-PL with constant mu."""
    if alpha <= 1:
        raise ValueError("alpha must exceed 1")
    if mu <= 0:
        raise ValueError("mu must be positive")
    return ((alpha - 1) / alpha) ** (alpha / (alpha - 1)) \
        * mu ** (1 / (alpha - 1))


def estimate_gradient_lipschitz(field, grid):
    """Largest gradient difference quotient between face neighbours."""
    _, grads = sample_with_gradient(field, grid)
    best = 0.0
    for axis, h in enumerate(grid.spacing):
        delta = np.diff(grads, axis=axis)
        best = max(best, float(np.linalg.norm(delta, axis=-1).max() / h))
    return best
