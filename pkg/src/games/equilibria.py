"""Approximate Nash sets on joint lattices and potential-game checks."""
import logging
from dataclasses import dataclass, field
from typing import List

import numpy as np
from scipy.optimize import least_squares
from scipy.spatial import cKDTree

from src.certify.certificate import FAIL, PASS, Certificate, jsonable
from src.config import config
from src.grid.components import connected_components
from src.grid.lattice import RegularGrid
from src.grid.masks import CellMask

logger = logging.getLogger(__name__)


def joint_grid(grids):
    box = grids[0].domain
    for g in grids[1:]:
        box = box.product(g.domain)
    resolution = tuple(r for g in grids for r in g.resolution)
    return RegularGrid(box, resolution)


def _player_axes(grids):
    axes, start = [], 0
    for g in grids:
        axes.append(tuple(range(start, start + g.dimension)))
        start += g.dimension
    return axes


@dataclass
class NashResult:
    mask: CellMask
    component_count: int
    representatives: np.ndarray
    excluded_boundary: int = 0
    tolerance: float = 0.0
    component_sizes: List[int] = field(default_factory=list)

    @property
    def points(self):
        return self.mask.points()

    def to_dict(self):
        return jsonable({'component_count': self.component_count,
                         'component_sizes': self.component_sizes,
                         'representatives': self.representatives,
                         'nodes': int(self.mask.count),
                         'excluded_boundary': self.excluded_boundary,
                         'tolerance': self.tolerance})


def _own_gradient(game, points):
    """Stack of d u_i / d a_i for every player, shape (k, joint dim)."""
    out = np.empty_like(points)
    for i, u in enumerate(game.utilities):
        _, grads = u.value_and_gradient_batch(points)
        out[:, game.block(i)] = grads[:, game.block(i)]
    return out


def find_nash(game, grids, tol=None, tol_grad=None):
    """Joint nodes where every player's regret is within tol times the
    utility range of the player's slice.

    Nodes where some player's slice optimum sits on the box boundary with
    the own gradient pointing outward are dropped: they are artifacts of
    truncating the action space.
    """
    tol = config.games.nash_tol if tol is None else tol
    tol_grad = config.minimax.tol_grad if tol_grad is None else tol_grad
    grid = joint_grid(grids)
    points = grid.points()
    shape = grid.shape
    axes = _player_axes(grids)
    lo, hi = np.array(grid.domain.lo), np.array(grid.domain.hi)
    own_grad = _own_gradient(game, points).reshape(shape + (len(lo),))

    nash = np.ones(shape, dtype=bool)
    truncated = np.zeros(shape, dtype=bool)
    regret_total = np.zeros(shape)
    for i, u in enumerate(game.utilities):
        values = u.evaluate_batch(points).reshape(shape)
        best = values.max(axis=axes[i], keepdims=True)
        spread = best - values.min(axis=axes[i], keepdims=True)
        regret = best - values
        scale = np.where(spread > 0, spread, 1.0)
        nash &= regret <= tol * scale
        regret_total += regret / scale

        # is the slice maximizer a boundary node pushed outward?
        at_best = values >= best
        for k in axes[i]:
            coord = points[:, k].reshape(shape)
            g = own_grad[..., k]
            outward = ((coord <= lo[k]) & (g > tol_grad)) \
                | ((coord >= hi[k]) & (g < -tol_grad))
            pushed = np.any(at_best & outward, axis=axes[i], keepdims=True)
            truncated |= np.broadcast_to(pushed, shape)

    excluded = int((nash & truncated).sum())
    nash &= ~truncated
    mask = CellMask(grid, nash)
    labeling = connected_components(mask)
    representatives = []
    for label in range(labeling.count):
        members = labeling.labels == label
        anchor = np.unravel_index(
            np.argmin(np.where(members, regret_total, np.inf)), shape)
        representatives.append(_refine(game, grid.node(anchor), lo, hi))
    if excluded:
        logger.info(f"dropped {excluded} boundary-truncated node(s)")
    logger.info(f"{labeling.count} equilibrium component(s), "
                f"{mask.count} node(s)")
    return NashResult(mask, labeling.count, np.array(representatives),
                      excluded, tol, labeling.sizes)


def _refine(game, start, lo, hi):
    """Solve the first-order system d u_i / d a_i = 0 near ``start``."""
    def residual(a):
        return _own_gradient(game, a[None, :])[0]

    if np.linalg.norm(residual(start)) == 0:
        return start
    inner = np.clip(start, lo + 1e-12, hi - 1e-12)
    result = least_squares(residual, inner, bounds=(lo, hi), xtol=1e-14,
                           ftol=1e-14, gtol=1e-14)
    improved = np.linalg.norm(result.fun) < np.linalg.norm(residual(start))
    return result.x if result.success and improved else start


def potential_consistency_check(game, potential, grids, tol=1e-9):
    """d P / d a_i must equal d u_i / d a_i at every joint node."""
    grid = joint_grid(grids)
    points = grid.points()
    _, p_grad = potential.value_and_gradient_batch(points)
    mismatch = np.abs(p_grad - _own_gradient(game, points)).max(axis=1)
    worst = int(np.argmax(mismatch))
    verdict = PASS if mismatch[worst] <= tol else FAIL
    return Certificate('potential-consistency', {'tol': tol}, verdict,
                       float(mismatch[worst]), points[worst], len(points),
                       grid.to_dict())


def potential_maximizers(potential, grids, tol=1e-9):
    """Joint nodes within tol * (1 + |max|) of the grid maximum of P."""
    grid = joint_grid(grids)
    values = potential.evaluate_batch(grid.points()).reshape(grid.shape)
    best = values.max()
    return CellMask(grid, values >= best - tol * (1 + abs(best)))


def nash_matches_potential(nash: NashResult, maximizers: CellMask, tol=None):
    """One Nash component per maximizer component, each refined
    representative within ``tol`` (default one cell diagonal) of the
    maximizer nodes and every maximizer component near a representative."""
    grid = maximizers.grid
    tol = float(np.linalg.norm(grid.spacing)) if tol is None else tol
    labeling = connected_components(maximizers)
    params = {'tol': tol}
    notes = {'nash_components': nash.component_count,
             'maximizer_components': labeling.count}
    if not len(nash.representatives) or maximizers.empty:
        return Certificate('nash-equals-argmax-potential', params, FAIL,
                           notes={**notes, 'reason': 'empty set'})
    nodes = maximizers.points()
    forward, _ = cKDTree(nodes).query(nash.representatives)
    worst = float(forward.max())
    witness = nash.representatives[int(np.argmax(forward))]
    component_of = labeling.labels[maximizers.bits]
    reps = cKDTree(nash.representatives)
    for label in range(labeling.count):
        distance, _ = reps.query(nodes[component_of == label])
        if distance.min() > worst:
            worst = float(distance.min())
            witness = nodes[component_of == label][int(np.argmin(distance))]
    same_count = nash.component_count == labeling.count
    verdict = PASS if same_count and worst <= tol + 1e-12 else FAIL
    return Certificate('nash-equals-argmax-potential', params, verdict,
                       worst, witness, len(nodes) + len(forward),
                       notes=notes)
