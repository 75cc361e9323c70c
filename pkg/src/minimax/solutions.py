"""Primal/dual values, best responses and the solution-set classification."""
import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.spatial import cKDTree

from src.certify.blocks import BlockView
from src.certify.certificate import FAIL, PASS, Certificate, jsonable
from src.certify.search import halton_points, slice_optimum
from src.config import config
from src.errors import InconclusiveError
from src.grid.components import connected_components
from src.grid.lattice import BoxDomain, RegularGrid
from src.grid.masks import CellMask, touches_boundary

logger = logging.getLogger(__name__)

_SCAN = {1: 201, 2: 41}


def _responder(side):
    if side in ('primal', 'y'):
        return 'y'
    if side in ('dual', 'x'):
        return 'x'
    raise ValueError(f"unknown side {side!r}")


def _inner_optimum(problem, fixed, responder):
    """Best value and argument of the responding block for a fixed other
    block, from a grid scan refined by multistart descent."""
    box = problem.block_box(responder)
    scan = RegularGrid(box, _SCAN.get(box.dimension, 11)).points()
    if responder == 'y':
        rows = problem.joint(fixed, scan)
        free = list(range(problem.n_x, sum(problem.split)))
    else:
        rows = problem.joint(scan, fixed)
        free = list(range(problem.n_x))
    values = problem.field.evaluate_batch(rows)
    sense = 'max' if responder == 'y' else 'min'
    best = int(np.argmax(values) if sense == 'max' else np.argmin(values))
    refined, arg = slice_optimum(problem.field, rows[best], free, box.lo,
                                 box.hi, sense, [scan[best]],
                                 starts=config.numerics.starts)
    if (sense == 'max' and refined[0] > values[best]) or \
            (sense == 'min' and refined[0] < values[best]):
        return float(refined[0]), arg[0]
    return float(values[best]), scan[best]


def primal_dual_value(problem, point, side='primal'):
    """F(x) = max_y f(x, y) for ``primal``, G(y) = min_x f(x, y) for
    ``dual``."""
    value, _ = _inner_optimum(problem, point, _responder(side))
    return value


def best_response_set(problem, side, fixed, grid, tol=None):
    """Nodes of the responding block's grid within tol of the slice
    optimum."""
    tol = config.minimax.tol_val if tol is None else tol
    if side == 'y':
        rows = problem.joint(fixed, grid.points())
        values = problem.field.evaluate_batch(rows)
        reference = values.max()
    elif side == 'x':
        rows = problem.joint(grid.points(), fixed)
        values = problem.field.evaluate_batch(rows)
        reference = values.min()
    else:
        raise ValueError(f"side must be 'x' or 'y', got {side!r}")
    bits = np.abs(values - reference) <= tol * (1 + abs(reference))
    return CellMask(grid, bits.reshape(grid.shape))


def is_saddle(problem, point, tol=None):
    """Unilateral deviations in either block improve f by at most tol."""
    tol = config.minimax.tol_val if tol is None else tol
    x, y = problem.parts(point)
    value = problem.value(x, y)
    slack = tol * (1 + abs(value))
    return (primal_dual_value(problem, x, 'primal') <= value + slack
            and primal_dual_value(problem, y, 'dual') >= value - slack)


@dataclass
class SolutionClassification:
    """Grid approximations of X, Y, the minimax, maximin and saddle sets."""
    E_points: np.ndarray
    Mlow_points: np.ndarray
    Mup_points: np.ndarray
    X_points: np.ndarray
    Y_points: np.ndarray
    tolerances: dict
    minimax_value: Optional[float] = None
    maximin_value: Optional[float] = None
    component_counts: dict = field(default_factory=dict)
    boundary: dict = field(default_factory=dict)
    grid: Optional[RegularGrid] = None
    masks: dict = field(default_factory=dict)
    split: Optional[tuple] = None

    @property
    def bounding_box(self):
        if not len(self.E_points):
            return None
        return self.E_points.min(axis=0), self.E_points.max(axis=0)

    def to_dict(self, include_points=True):
        out = {
            'tolerances': self.tolerances,
            'minimax_value': self.minimax_value,
            'maximin_value': self.maximin_value,
            'component_counts': self.component_counts,
            'boundary': self.boundary,
            'sizes': {name: len(getattr(self, f'{name}_points'))
                      for name in ('E', 'Mlow', 'Mup', 'X', 'Y')},
        }
        if self.bounding_box is not None:
            lo, hi = self.bounding_box
            out['E_bounding_box'] = {'lo': lo, 'hi': hi}
        if self.grid is not None:
            out['grid'] = self.grid.to_dict()
        if include_points:
            for name in ('E', 'Mlow', 'Mup', 'X', 'Y'):
                out[f'{name}_points'] = getattr(self, f'{name}_points')
        return jsonable(out)


def _deviation_extremes(problem, rows, side, count):
    """Best deviation of each row within ``side``'s box over fixed probes."""
    box = problem.block_box(side)
    probes = halton_points(box.lo, box.hi, count)
    n = sum(problem.split)
    block = slice(0, problem.n_x) if side == 'x' else \
        slice(problem.n_x, n)
    trial = np.repeat(rows, count, axis=0)
    trial[:, block] = np.tile(probes, (len(rows), 1))
    values = problem.field.evaluate_batch(trial).reshape(len(rows), count)
    return values.min(axis=1) if side == 'x' else values.max(axis=1)


def classify_solutions(problem, grid, tol_val=None, tol_grad=None):
    """
    Classifies the solution sets of a minimax problem on a joint lattice.

    Args:
        problem (MinimaxProblem): Field, block split and block boxes.
        grid (RegularGrid): Joint lattice over both blocks.
        tol_val (float): Relative slack on optimal values.
        tol_grad (float): Gradient bound for saddle candidates.

    Returns:
        SolutionClassification: Primal and dual optimal sets, the minimax
            and maximin sets, their intersection E with component counts,
            and the two optimal values.
    """
    tol_val = config.minimax.tol_val if tol_val is None else tol_val
    tol_grad = config.minimax.tol_grad if tol_grad is None else tol_grad
    n_x = problem.n_x
    n = sum(problem.split)

    ys = BlockView(problem, grid, 'y')
    xs = BlockView(problem, grid, 'x')
    F, _ = ys.optimum()
    G, _ = xs.optimum()
    if not (np.isfinite(F).any() and np.isfinite(G).any()):
        raise InconclusiveError("primal or dual values are not finite")
    minimax_value = float(F.min())
    maximin_value = float(G.max())
    X = F <= minimax_value + tol_val * (1 + abs(minimax_value))
    Y = G >= maximin_value - tol_val * (1 + abs(maximin_value))
    if not X.any() or not Y.any():
        raise InconclusiveError("primal or dual optimal set is empty")

    mlow = ys.fold(X[:, None] & ys.response_mask(tol_val))
    mup = xs.fold(Y[:, None] & xs.response_mask(tol_val))
    candidate = mlow & mup

    points = grid.points().reshape(grid.shape + (n,))
    cand_points = points[candidate]
    saddle = np.zeros(len(cand_points), dtype=bool)
    if len(cand_points):
        values, grads = problem.field.value_and_gradient_batch(cand_points)
        slack = tol_val * (1 + np.abs(values))
        count = config.minimax.deviations
        best_y = _deviation_extremes(problem, cand_points, 'y', count)
        best_x = _deviation_extremes(problem, cand_points, 'x', count)
        F_at = ys.fold(np.repeat(F[:, None], ys.values.shape[1],
                                 axis=1))[candidate]
        G_at = xs.fold(np.repeat(G[:, None], xs.values.shape[1],
                                 axis=1))[candidate]
        saddle = ((np.maximum(best_y, F_at) <= values + slack)
                  & (np.minimum(best_x, G_at) >= values - slack))
        lo, hi = np.array(grid.domain.lo), np.array(grid.domain.hi)
        interior = (cand_points > lo) & (cand_points < hi)
        saddle &= np.all((np.abs(grads) <= tol_grad) | ~interior, axis=1)
    E = np.zeros(grid.shape, dtype=bool)
    E[candidate] = saddle

    x_shape, y_shape = grid.shape[:n_x], grid.shape[n_x:]
    x_grid = RegularGrid(BoxDomain(grid.domain.lo[:n_x],
                                   grid.domain.hi[:n_x]), x_shape)
    y_grid = RegularGrid(BoxDomain(grid.domain.lo[n_x:],
                                   grid.domain.hi[n_x:]), y_shape)
    X_mask = CellMask(x_grid, X.reshape(x_shape))
    Y_mask = CellMask(y_grid, Y.reshape(y_shape))
    masks = {'E': CellMask(grid, E), 'Mlow': CellMask(grid, mlow),
             'Mup': CellMask(grid, mup), 'X': X_mask, 'Y': Y_mask}
    masks['union'] = masks['Mlow'] | masks['Mup']
    counts = {name: connected_components(mask).count
              for name, mask in masks.items()}
    boundary = {name: touches_boundary(mask) for name, mask in masks.items()}
    if boundary['E']:
        logger.warning("saddle set touches the box boundary")
    logger.info(f"classification: |E|={int(E.sum())}, minimax "
                f"{minimax_value:.6g}, maximin {maximin_value:.6g}")
    return SolutionClassification(
        masks['E'].points(), masks['Mlow'].points(), masks['Mup'].points(),
        X_mask.points(), Y_mask.points(),
        {'tol_val': tol_val, 'tol_grad': tol_grad},
        minimax_value, maximin_value, counts, boundary, grid, masks,
        problem.split)


def product_structure_check(classification, tol=None):
    """E must equal X x Y up to ``tol`` in distance."""
    E = np.asarray(classification.E_points, dtype=float)
    X = np.asarray(classification.X_points, dtype=float)
    Y = np.asarray(classification.Y_points, dtype=float)
    if tol is None:
        tol = 1e-9
        if classification.grid is not None:
            tol = float(classification.grid.spacing.max()) / 2
    params = {'tol': tol}
    if not len(E):
        return Certificate('product-structure', params, FAIL,
                           notes={'reason': 'empty saddle set'})
    n_x = X.shape[1]
    pairs = np.hstack([np.repeat(X, len(Y), axis=0),
                       np.tile(Y, (len(X), 1))])
    distance, _ = cKDTree(E).query(pairs)
    missing = distance > tol
    x_dist, _ = cKDTree(X).query(E[:, :n_x])
    y_dist, _ = cKDTree(Y).query(E[:, n_x:])
    outside = (x_dist > tol) | (y_dist > tol)
    if missing.any():
        witness = pairs[np.argmax(missing)]
    elif outside.any():
        witness = E[np.argmax(outside)]
    else:
        witness = None
    verdict = FAIL if witness is not None else PASS
    return Certificate('product-structure', params, verdict,
                       float(distance.max()), witness,
                       len(pairs) + len(E))


def interchangeability_check(problem, s1, s2, tol=None):
    """Mixing the blocks of two saddles gives saddles of equal value."""
    tol = config.minimax.tol_val if tol is None else tol
    x1, y1 = problem.parts(s1)
    x2, y2 = problem.parts(s2)
    corners = [np.concatenate(p) for p in
               ((x1, y1), (x2, y2), (x1, y2), (x2, y1))]
    values = [problem.value(*problem.parts(c)) for c in corners]
    saddles = [is_saddle(problem, c, tol) for c in corners]
    spread = max(values) - min(values)
    agree = spread <= tol * (1 + max(abs(v) for v in values))
    failing = [c for c, ok in zip(corners, saddles) if not ok]
    verdict = PASS if all(saddles) and agree else FAIL
    return Certificate('interchangeability', {'tol': tol}, verdict,
                       spread, failing[0] if failing else None, 4,
                       notes={'values': values, 'saddles': saddles})
