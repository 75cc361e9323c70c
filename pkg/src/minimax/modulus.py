"""Inner Lipschitz, Hoelder and error-bound moduli of best-response maps."""
import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from src.certify.certificate import jsonable
from src.certify.search import sphere_directions
from src.errors import EmptySetError, InconclusiveError
from src.grid.components import distance_to_set
from src.minimax.solutions import best_response_set

logger = logging.getLogger(__name__)


@dataclass
class ModulusEstimate:
    mode: str
    kappa: float
    alpha_hat: Optional[float] = None
    residual: Optional[float] = None
    deltas: List[float] = field(default_factory=list)
    distances: List[float] = field(default_factory=list)
    witness: Optional[List[float]] = None

    def to_dict(self):
        return jsonable({'mode': self.mode, 'kappa': self.kappa,
                         'alpha_hat': self.alpha_hat,
                         'residual': self.residual, 'deltas': self.deltas,
                         'distances': self.distances,
                         'witness': self.witness})


def _response(problem, side, other_point, grid, tol):
    mask = best_response_set(problem, side, other_point, grid, tol)
    if mask.empty:
        raise EmptySetError(f"empty best response at {other_point}")
    return mask


def estimate_inner_modulus(problem, side, base, deltas, grid,
                           mode='lipschitz', tol=None):
    """
    Estimates a modulus of the best-response map of block ``side``.

    ``lipschitz`` and ``hoelder`` move the other block by delta along
    sampled directions and measure how far the base response falls from
    the new response set; ``eb`` compares distance to the response set
    with the block gradient near the base.

    Args:
        problem (MinimaxProblem): Field and block split.
        side (str): Responding block, ``x`` or ``y``.
        base (array-like): Joint base point whose ``side`` part is a best
            response to the other part.
        deltas (list): Positive perturbation sizes; a Hoelder fit needs at
            least 4 spanning two decades.
        grid (RegularGrid): Lattice over the responding block.
        mode (str): ``lipschitz``, ``hoelder`` or ``eb``.
        tol (float): Best-response tolerance.

    Returns:
        ModulusEstimate: kappa (infinite when a stationary node lies off
            the response set), the fitted exponent in ``hoelder`` mode and
            the sampled distances.
    """
    deltas = sorted((float(d) for d in deltas), reverse=True)
    if not deltas or deltas[-1] <= 0:
        raise ValueError("deltas must be positive")
    x_bar, y_bar = problem.parts(base)
    own, other = (y_bar, x_bar) if side == 'y' else (x_bar, y_bar)
    spacing = float(grid.spacing.max())

    if mode == 'eb':
        response = _response(problem, side, other, grid, tol)
        nodes = grid.points()
        near = np.linalg.norm(nodes - own, axis=1) <= deltas[0]
        nodes = nodes[near]
        rows = problem.joint(nodes, other) if side == 'x' \
            else problem.joint(other, nodes)
        _, grads = problem.field.value_and_gradient_batch(rows)
        block = slice(0, problem.n_x) if side == 'x' \
            else slice(problem.n_x, None)
        norms = np.linalg.norm(grads[:, block], axis=1)
        distance = np.array([distance_to_set(p, response) for p in nodes])
        # stationary off the response set: no finite nu exists
        stranded = (norms == 0) & (distance > 0)
        if stranded.any():
            k = int(np.flatnonzero(stranded)[0])
            logger.warning(f"stationary node {nodes[k].tolist()} lies "
                           f"{distance[k]:.3g} from the response set")
            return ModulusEstimate('eb', float('inf'), deltas=deltas,
                                   distances=distance.tolist(),
                                   witness=nodes[k].tolist())
        usable = norms > 0
        if not usable.any():
            return ModulusEstimate('eb', 0.0, deltas=deltas,
                                   distances=distance.tolist())
        ratios = distance[usable] / norms[usable]
        k = int(np.flatnonzero(usable)[np.argmax(ratios)])
        return ModulusEstimate('eb', float(ratios.max()),
                               deltas=deltas,
                               distances=distance[usable].tolist(),
                               witness=nodes[k].tolist())

    if mode not in ('lipschitz', 'hoelder'):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == 'hoelder' and (len(deltas) < 4
                              or deltas[0] / deltas[-1] < 100):
        raise ValueError("a Hoelder fit needs at least 4 deltas spanning "
                         "two decades")
    if distance_to_set(own, _response(problem, side, other, grid, tol)) \
            > spacing:
        raise InconclusiveError("base point is not a best response")
    directions = sphere_directions(len(other))
    worst = []
    for delta in deltas:
        shifted = other + delta * directions
        distances = [distance_to_set(own, _response(problem, side, p, grid,
                                                    tol)) for p in shifted]
        worst.append(max(distances))
    worst = np.array(worst)
    deltas_arr = np.array(deltas)
    if mode == 'lipschitz':
        return ModulusEstimate('lipschitz', float(np.max(worst / deltas_arr)),
                               deltas=deltas, distances=worst.tolist())

    positive = worst > 0
    if not positive.any():
        return ModulusEstimate('hoelder', 0.0, None, None, deltas,
                               worst.tolist())
    if positive.sum() < 2:
        raise InconclusiveError(
            f"only one positive distance {worst[positive].tolist()} "
            f"across deltas {deltas}; cannot fit an exponent")
    coeffs, residuals, *_ = np.polyfit(np.log(deltas_arr[positive]),
                                       np.log(worst[positive]), 1,
                                       full=True)
    alpha_hat, log_kappa = coeffs
    residual = float(residuals[0]) if len(residuals) else 0.0
    return ModulusEstimate('hoelder', float(np.exp(log_kappa)),
                           float(alpha_hat), residual, deltas,
                           worst.tolist())


def inner_modulus_bound(lipschitz, alpha, eta, mu):
    """Hoelder modulus implied by local PL and growth.

    Returns (kappa, exponent) with kappa = S^(alpha-1) (eta mu)^((1-alpha)
    /alpha) and exponent alpha - 1.
    """
    if alpha <= 1:
        raise ValueError("alpha must exceed 1")
    kappa = lipschitz ** (alpha - 1) * (eta * mu) ** ((1 - alpha) / alpha)
    return kappa, alpha - 1
