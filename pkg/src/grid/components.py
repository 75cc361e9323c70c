"""Union-find labeling of lattice masks and refinement verdicts."""
import logging
from dataclasses import dataclass, field
from typing import List

import numpy as np
from scipy.spatial import cKDTree
from tqdm import tqdm

from src.config import config
from src.errors import EmptySetError
from src.grid.lattice import RegularGrid
from src.grid.masks import CellMask, critical_mask, sublevel_mask, \
    touches_boundary

logger = logging.getLogger(__name__)


class UnionFind:
    """Disjoint sets with path compression and union by rank."""

    def __init__(self, n):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        x_root = self.find(x)
        y_root = self.find(y)
        if x_root == y_root:
            return
        if self.rank[x_root] < self.rank[y_root]:
            self.parent[x_root] = y_root
        elif self.rank[x_root] > self.rank[y_root]:
            self.parent[y_root] = x_root
        else:
            self.parent[y_root] = x_root
            self.rank[x_root] += 1


@dataclass
class ComponentLabeling:
    mask: CellMask
    labels: np.ndarray
    count: int
    sizes: List[int] = field(default_factory=list)

    def label_at(self, index):
        return int(self.labels[tuple(index)])


def connected_components(mask: CellMask) -> ComponentLabeling:
    """Label face-adjacent runs of true nodes; false nodes get -1."""
    bits = np.asarray(mask.bits, dtype=bool)
    labels = np.full(bits.shape, -1, dtype=int)
    if not bits.any():
        return ComponentLabeling(mask, labels, 0, [])

    flat = np.arange(bits.size).reshape(bits.shape)
    sets = UnionFind(bits.size)
    for axis in range(bits.ndim):
        lead = [slice(None)] * bits.ndim
        tail = [slice(None)] * bits.ndim
        lead[axis] = slice(None, -1)
        tail[axis] = slice(1, None)
        joined = bits[tuple(lead)] & bits[tuple(tail)]
        for a, b in zip(flat[tuple(lead)][joined],
                        flat[tuple(tail)][joined]):
            sets.union(int(a), int(b))

    nodes = flat[bits]
    roots = np.array([sets.find(int(i)) for i in nodes])
    # first-appearance order in C order keeps labels deterministic
    _, first, inverse = np.unique(roots, return_index=True,
                                  return_inverse=True)
    order = np.argsort(np.argsort(first))
    labels[bits] = order[inverse]
    count = len(first)
    sizes = np.bincount(labels[bits], minlength=count).tolist()
    return ComponentLabeling(mask, labels, count, sizes)


@dataclass
class ConnectednessVerdict:
    level: float
    mode: str
    resolutions: List[int]
    counts: List[int]
    stable: bool
    touches_boundary: bool

    def to_dict(self):
        return {'level': self.level, 'mode': self.mode,
                'resolutions': self.resolutions, 'counts': self.counts,
                'stable': self.stable,
                'touches_boundary': self.touches_boundary}


def connectedness_verdict(field, box, c, resolutions, mode='sub',
                          envelope=None, tol_val=None, tol_grad=None):
    """Component counts of a level set across refining lattices.

    ``mode`` is ``sub``, ``super`` or ``critical``; the last labels nodes
    with |f - c| <= tol_val and small gradient (solution sets).
    """
    resolutions = [int(r) for r in resolutions]
    if len(resolutions) < 2 or any(
            b <= a for a, b in zip(resolutions, resolutions[1:])):
        raise ValueError("need at least two strictly increasing resolutions")
    tol_val = config.minimax.tol_val if tol_val is None else tol_val
    tol_grad = config.minimax.tol_grad if tol_grad is None else tol_grad

    counts, boundary = [], False
    for r in tqdm(resolutions, desc="resolutions",
                  disable=not config.logging.progress):
        grid = RegularGrid(box, r)
        if mode == 'critical':
            mask = critical_mask(field, grid, c, tol_val, tol_grad)
        else:
            mask = sublevel_mask(field, grid, c, mode, envelope)
        labeling = connected_components(mask)
        counts.append(labeling.count)
        boundary = boundary or touches_boundary(mask)
        logger.info(f"level {c:g} at resolution {r}: "
                    f"{labeling.count} component(s)")

    stable = len(set(counts)) == 1
    if boundary:
        logger.warning("level set touches the box boundary; connectedness "
                       "on the whole space may differ")
    return ConnectednessVerdict(float(c), mode, resolutions, counts, stable,
                                boundary)


def distances_to_set(points, mask: CellMask) -> np.ndarray:
    """Euclidean distance from each point to the nearest true node."""
    if mask.empty:
        raise EmptySetError("distance to an empty mask is undefined")
    tree = cKDTree(mask.points())
    distances, _ = tree.query(np.atleast_2d(np.asarray(points, float)))
    return distances


def distance_to_set(p, mask: CellMask) -> float:
    return float(distances_to_set(p, mask)[0])
