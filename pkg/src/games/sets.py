"""Product-structured action sets on per-player lattices."""
from dataclasses import dataclass
from typing import List

import numpy as np

from src.certify.certificate import jsonable
from src.grid.components import connected_components
from src.grid.lattice import BoxDomain, RegularGrid
from src.grid.masks import CellMask


@dataclass
class JointGridSet:
    """The product of one node mask per player."""
    grids: List[RegularGrid]
    masks: List[np.ndarray]

    @classmethod
    def full(cls, grids):
        return cls(list(grids), [np.ones(g.shape, dtype=bool) for g in grids])

    @classmethod
    def from_boxes(cls, grids, boxes: List[BoxDomain], slack=1e-9):
        """Nodes of each grid lying inside the matching box."""
        masks = []
        for grid, box in zip(grids, boxes):
            inside = np.all(
                (grid.points() >= np.array(box.lo) - slack)
                & (grid.points() <= np.array(box.hi) + slack), axis=1)
            masks.append(inside.reshape(grid.shape))
        return cls(list(grids), masks)

    @classmethod
    def from_points(cls, grids, points):
        """Nearest node of each player's grid to the given actions."""
        masks = []
        for grid, chosen in zip(grids, points):
            mask = np.zeros(grid.shape, dtype=bool)
            for p in np.atleast_2d(chosen):
                mask[grid.nearest_index(p)] = True
            masks.append(mask)
        return cls(list(grids), masks)

    @property
    def players(self):
        return len(self.grids)

    @property
    def empty(self):
        return any(not m.any() for m in self.masks)

    def nodes(self, i):
        return CellMask(self.grids[i], self.masks[i]).points()

    def sizes(self):
        return [int(m.sum()) for m in self.masks]

    def component_counts(self):
        return [connected_components(CellMask(g, m)).count
                for g, m in zip(self.grids, self.masks)]

    def issubset(self, other):
        return all(not np.any(a & ~b)
                   for a, b in zip(self.masks, other.masks))

    def __eq__(self, other):
        if not isinstance(other, JointGridSet):
            return NotImplemented
        return all(np.array_equal(a, b)
                   for a, b in zip(self.masks, other.masks))

    def extent(self, i):
        nodes = self.nodes(i)
        if not len(nodes):
            return None
        return nodes.min(axis=0), nodes.max(axis=0)

    def contains_point(self, point_blocks, tol=None):
        """Each player's action within ``tol`` (default one spacing) of the
        player's mask."""
        for i, p in enumerate(point_blocks):
            nodes = self.nodes(i)
            limit = float(self.grids[i].spacing.max()) if tol is None \
                else tol
            if not len(nodes) or np.min(np.linalg.norm(
                    nodes - np.atleast_1d(p), axis=1)) > limit + 1e-12:
                return False
        return True

    def to_dict(self):
        extents = []
        for i in range(self.players):
            ext = self.extent(i)
            extents.append(None if ext is None
                           else {'lo': ext[0], 'hi': ext[1]})
        return jsonable({'sizes': self.sizes(),
                         'component_counts': self.component_counts(),
                         'extents': extents})

    def rows(self, k=None):
        for i, (grid, mask) in enumerate(zip(self.grids, self.masks)):
            for index in np.ndindex(grid.shape):
                yield {**({'k': k} if k is not None else {}), 'player': i,
                       'node': int(np.ravel_multi_index(index, grid.shape)),
                       **{f'a{j}': c for j, c in
                          enumerate(grid.node(index))},
                       'member': bool(mask[index])}
