"""Per-slice views of a lattice split into an optimizing block and the
coordinates held fixed."""
import numpy as np

from src.certify.search import slice_optimum
from src.grid.lattice import sample_with_gradient


class BlockView:
    """Lattice values rearranged as (slices, nodes within a slice).

    Block ``x`` minimizes over the first ``n_x`` coordinates, block ``y``
    maximizes over the remaining ones.
    """

    def __init__(self, problem, grid, block):
        if block not in ('x', 'y'):
            raise ValueError(f"block must be 'x' or 'y', got {block!r}")
        n_x, n_y = problem.split
        n = n_x + n_y
        self.field = problem.field
        self.grid = grid
        self.block = block
        self.sense = 'min' if block == 'x' else 'max'
        self.free = list(range(n_x)) if block == 'x' else \
            list(range(n_x, n))
        self.other = [a for a in range(n) if a not in self.free]
        self.order = self.other + self.free
        self.moved_shape = tuple(grid.shape[a] for a in self.order)
        slices = int(np.prod([grid.shape[a] for a in self.other]))
        per_slice = int(np.prod([grid.shape[a] for a in self.free]))

        values, grads = sample_with_gradient(self.field, grid)
        points = grid.points().reshape(grid.shape + (n,))
        target = list(range(n))
        self.values = np.moveaxis(values, self.order, target).reshape(
            slices, per_slice)
        self.grads = np.moveaxis(grads, self.order, target).reshape(
            slices, per_slice, n)
        self.points = np.moveaxis(points, self.order, target).reshape(
            slices, per_slice, n)
        self._optimum = None

    def fold(self, array):
        """(slices, nodes) array back to the lattice shape."""
        n = len(self.order)
        return np.moveaxis(array.reshape(self.moved_shape), list(range(n)),
                           self.order)

    @property
    def grid_optimum(self):
        reduce = np.min if self.sense == 'min' else np.max
        return reduce(self.values, axis=1)

    def optimum(self):
        """Slice optima: the grid scan improved by projected descent."""
        if self._optimum is not None:
            return self._optimum
        pick = np.argmin if self.sense == 'min' else np.argmax
        best = pick(self.values, axis=1)
        rows = np.arange(len(best))
        bases = self.points[:, 0, :]
        candidates = self.points[rows, best][:, self.free]
        lo = [self.grid.domain.lo[a] for a in self.free]
        hi = [self.grid.domain.hi[a] for a in self.free]
        refined, argopt = slice_optimum(self.field, bases, self.free, lo, hi,
                                        self.sense, candidates)
        grid_opt = self.grid_optimum
        better = refined < grid_opt if self.sense == 'min' \
            else refined > grid_opt
        opt = np.where(better, refined, grid_opt)
        argopt = np.where(better[:, None], argopt, candidates)
        self._optimum = (opt, argopt)
        return self._optimum

    def gap(self):
        opt, _ = self.optimum()
        if self.sense == 'min':
            return np.maximum(self.values - opt[:, None], 0.0)
        return np.maximum(opt[:, None] - self.values, 0.0)

    def block_gradient_norm(self):
        return np.linalg.norm(self.grads[..., self.free], axis=-1)

    def response_mask(self, tol):
        """Nodes within tol * (1 + |opt|) of their slice's grid optimum."""
        reference = self.grid_optimum[:, None]
        return np.abs(self.values - reference) <= tol * (1 + np.abs(
            reference))
