"""String method with a climbing image between two points."""
import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from src.certify.certificate import jsonable
from src.config import config

logger = logging.getLogger(__name__)


@dataclass
class PathState:
    """Nodes of the string; the endpoints never move."""
    nodes: np.ndarray
    iteration: int = 0

    @property
    def m(self):
        return len(self.nodes)

    def tangents(self):
        forward = np.diff(self.nodes, axis=0)
        t = np.zeros_like(self.nodes)
        t[1:-1] = self.nodes[2:] - self.nodes[:-2]
        t[0], t[-1] = forward[0], forward[-1]
        norms = np.linalg.norm(t, axis=1, keepdims=True)
        return np.divide(t, norms, out=np.zeros_like(t), where=norms > 0)

    def reparameterize(self, pinned=None):
        """Equal arc-length spacing; a pinned node splits the string."""
        if pinned is None:
            self.nodes = _equalize(self.nodes)
            return
        head = _equalize(self.nodes[:pinned + 1])
        tail = _equalize(self.nodes[pinned:])
        self.nodes = np.vstack([head, tail[1:]])

    def spacing_spread(self):
        lengths = np.linalg.norm(np.diff(self.nodes, axis=0), axis=1)
        mean = lengths.mean()
        return float((lengths.max() - lengths.min()) / mean) if mean else 0.0


def _equalize(nodes):
    if len(nodes) < 3:
        return nodes
    arc = np.concatenate([[0.0], np.cumsum(
        np.linalg.norm(np.diff(nodes, axis=0), axis=1))])
    if arc[-1] == 0:
        return nodes
    target = np.linspace(0.0, arc[-1], len(nodes))
    return np.stack([np.interp(target, arc, nodes[:, k])
                     for k in range(nodes.shape[1])], axis=1)


@dataclass
class PassResult:
    pass_point: Optional[np.ndarray]
    pass_value: Optional[float]
    gradient_norm: Optional[float]
    converged: bool
    no_pass: bool
    boundary_hit: bool = False
    iterations: int = 0
    endpoint_max: float = 0.0
    history: List[float] = field(default_factory=list)
    trace: list = field(default_factory=list)

    @property
    def inconclusive(self):
        return not (self.converged or self.no_pass)

    def to_dict(self):
        return jsonable({
            'pass_point': self.pass_point,
            'pass_value': self.pass_value,
            'gradient_norm': self.gradient_norm,
            'converged': self.converged,
            'no_pass': self.no_pass,
            'boundary_hit': self.boundary_hit,
            'iterations': self.iterations,
            'endpoint_max': self.endpoint_max,
        })

    def rows(self):
        for iteration, nodes, values in self.trace:
            for i, (p, v) in enumerate(zip(nodes, values)):
                yield {'iteration': iteration, 'node': i,
                       **{f'x{k}': c for k, c in enumerate(p)},
                       'value': v}


def find_mountain_pass(field, x0, x1, m=None, iters=None, tol=None,
                       box=None, step=None, record_every=50):
    """Relax a string from x0 to x1, then climb its highest node."""
    settings = config.mountain_pass
    m = m or settings.nodes
    iters = iters or settings.iters
    tol = settings.tol if tol is None else tol
    if m < 3:
        raise ValueError("a string needs at least 3 nodes")
    x0 = np.asarray(x0, dtype=float)
    x1 = np.asarray(x1, dtype=float)
    span = float(np.linalg.norm(x1 - x0))
    step = step or settings.step_fraction * span
    top = max(field.evaluate(x0), field.evaluate(x1))
    threshold = top + 1e-8 * (1 + abs(top))

    path = PathState(np.linspace(x0, x1, m))
    boundary_hit = False
    history, trace = [], []

    def clamp(points):
        nonlocal boundary_hit
        if box is None:
            return points
        clipped = box.clip(points)
        boundary_hit = boundary_hit or bool(np.any(clipped != points))
        return clipped

    def relax(exclude=None):
        nodes = path.nodes
        values, grads = field.value_and_gradient_batch(nodes[1:-1])
        tangents = path.tangents()[1:-1]
        normal = grads - np.sum(grads * tangents, axis=1,
                                keepdims=True) * tangents
        move = -step * normal
        cap = span / (m - 1) / 2
        length = np.linalg.norm(move, axis=1, keepdims=True)
        move = np.where(length > cap, move * cap / np.maximum(length, 1e-300),
                        move)
        if exclude is not None:
            move[exclude - 1] = 0.0
        nodes[1:-1] = clamp(nodes[1:-1] + move)
        return float(np.linalg.norm(normal, axis=1).max())

    iteration = 0
    string_budget = max(iters // 2, 1)
    while iteration < string_budget:
        iteration += 1
        residual = relax()
        path.reparameterize()
        interior = field.evaluate_batch(path.nodes[1:-1])
        history.append(float(interior.max()))
        if iteration % record_every == 0:
            trace.append((iteration, path.nodes.copy(),
                          field.evaluate_batch(path.nodes)))
        if residual <= np.sqrt(tol):
            break

    interior = field.evaluate_batch(path.nodes[1:-1])
    if interior.max() <= threshold:
        logger.info(f"no pass: string stays below {threshold:.6g}")
        best = int(np.argmax(interior)) + 1
        trace.append((iteration, path.nodes.copy(),
                      field.evaluate_batch(path.nodes)))
        return PassResult(path.nodes[best], float(interior.max()), None,
                          False, True, boundary_hit, iteration, top,
                          history, trace)

    climber = int(np.argmax(interior)) + 1
    climb_step = step
    grad_norm = np.inf
    while iteration < iters:
        iteration += 1
        x = path.nodes[climber]
        g = field.gradient(x)
        grad_norm = float(np.linalg.norm(g))
        if grad_norm <= tol:
            break
        tau = path.tangents()[climber]
        candidate = clamp(x - climb_step * (g - 2 * np.dot(g, tau) * tau))
        if np.linalg.norm(field.gradient(candidate)) > grad_norm:
            climb_step *= 0.5
        path.nodes[climber] = candidate
        relax(exclude=climber)
        path.reparameterize(pinned=climber)
        history.append(float(field.evaluate_batch(
            path.nodes[1:-1]).max()))
        if iteration % record_every == 0:
            trace.append((iteration, path.nodes.copy(),
                          field.evaluate_batch(path.nodes)))

    x2 = path.nodes[climber]
    grad_norm = float(np.linalg.norm(field.gradient(x2)))
    converged = grad_norm <= tol
    trace.append((iteration, path.nodes.copy(),
                  field.evaluate_batch(path.nodes)))
    if not converged:
        logger.warning(f"climbing image stalled with gradient norm "
                       f"{grad_norm:.3g} after {iteration} iterations")
    if boundary_hit:
        logger.warning("string touched the box; the field may not increase "
                       "at infinity")
    return PassResult(x2, field.evaluate(x2), grad_norm, converged, False,
                      boundary_hit, iteration, top, history, trace)
