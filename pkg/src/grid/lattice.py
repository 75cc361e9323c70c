"""Boxes and the regular lattices laid over them."""
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from src.errors import DimensionError, ExprDomainError


@dataclass(frozen=True)
class BoxDomain:
    lo: Tuple[float, ...]
    hi: Tuple[float, ...]

    def __post_init__(self):
        lo = tuple(float(v) for v in self.lo)
        hi = tuple(float(v) for v in self.hi)
        if len(lo) != len(hi) or not lo:
            raise DimensionError("box bounds must have the same length")
        if any(a >= b for a, b in zip(lo, hi)):
            raise ValueError(f"empty box: lo={lo}, hi={hi}")
        object.__setattr__(self, 'lo', lo)
        object.__setattr__(self, 'hi', hi)

    @classmethod
    def from_bounds(cls, bounds: Sequence[float]):
        """``[lo0, hi0, lo1, hi1, ...]`` as written on the command line."""
        bounds = [float(b) for b in bounds]
        if len(bounds) % 2 or not bounds:
            raise DimensionError("box needs an even number of bounds")
        return cls(tuple(bounds[0::2]), tuple(bounds[1::2]))

    @classmethod
    def cube(cls, lo, hi, dimension):
        return cls((lo,) * dimension, (hi,) * dimension)

    @property
    def dimension(self):
        return len(self.lo)

    @property
    def diameter(self):
        return float(np.linalg.norm(np.subtract(self.hi, self.lo)))

    def contains(self, p, slack=0.0):
        p = np.asarray(p, dtype=float)
        return bool(np.all(p >= np.subtract(self.lo, slack))
                    and np.all(p <= np.add(self.hi, slack)))

    def clip(self, points):
        return np.clip(points, self.lo, self.hi)

    def product(self, other):
        return BoxDomain(self.lo + other.lo, self.hi + other.hi)

    def scaled(self, factor):
        """Box with the same center and ``factor`` times the extent."""
        center = (np.add(self.lo, self.hi)) / 2
        half = (np.subtract(self.hi, self.lo)) / 2 * factor
        return BoxDomain(tuple(center - half), tuple(center + half))

    def to_dict(self):
        return {'lo': list(self.lo), 'hi': list(self.hi)}


@dataclass(frozen=True)
class RegularGrid:
    domain: BoxDomain
    resolution: Tuple[int, ...]

    def __post_init__(self):
        resolution = self.resolution
        if isinstance(resolution, (int, np.integer)):
            resolution = (int(resolution),) * self.domain.dimension
        resolution = tuple(int(r) for r in resolution)
        if len(resolution) != self.domain.dimension:
            raise DimensionError(
                f"resolution has {len(resolution)} axes, box has "
                f"{self.domain.dimension}")
        if any(r < 2 for r in resolution):
            raise ValueError("every axis needs at least 2 nodes")
        object.__setattr__(self, 'resolution', resolution)

    @property
    def dimension(self):
        return self.domain.dimension

    @property
    def shape(self):
        return self.resolution

    @property
    def total(self):
        return int(np.prod(self.resolution))

    @property
    def axes(self):
        return [np.linspace(lo, hi, r) for lo, hi, r
                in zip(self.domain.lo, self.domain.hi, self.resolution)]

    @property
    def spacing(self):
        return np.array([(hi - lo) / (r - 1) for lo, hi, r
                         in zip(self.domain.lo, self.domain.hi,
                                self.resolution)])

    def points(self):
        """All node coordinates in C order, shape (total, n)."""
        mesh = np.meshgrid(*self.axes, indexing='ij')
        return np.stack([m.ravel() for m in mesh], axis=1)

    def node(self, index):
        return np.array([axis[i] for axis, i in zip(self.axes, index)])

    def nearest_index(self, p):
        p = np.asarray(p, dtype=float)
        steps = np.rint((p - np.array(self.domain.lo)) / self.spacing)
        return tuple(int(i) for i in
                     np.clip(steps, 0, np.array(self.resolution) - 1))

    def to_dict(self):
        return {**self.domain.to_dict(), 'resolution': list(self.resolution)}


def _reraise_with_node(exc, grid):
    if exc.node_index is None:
        raise exc
    index = tuple(int(i) for i in np.unravel_index(exc.node_index,
                                                   grid.shape))
    raise ExprDomainError(exc.message, span=exc.span, snippet=exc.snippet,
                          node_index=index) from None


def _check(field, grid):
    if field.dimension != grid.dimension:
        raise DimensionError(
            f"field has dimension {field.dimension}, grid has "
            f"{grid.dimension}")


def sample(field, grid: RegularGrid) -> np.ndarray:
    """Field values at every node, shaped like the grid."""
    _check(field, grid)
    try:
        values = field.evaluate_batch(grid.points())
    except ExprDomainError as exc:
        _reraise_with_node(exc, grid)
    return values.reshape(grid.shape)


def sample_with_gradient(field, grid: RegularGrid):
    """Values shaped like the grid and gradients shaped grid + (n,)."""
    _check(field, grid)
    try:
        values, grads = field.value_and_gradient_batch(grid.points())
    except ExprDomainError as exc:
        _reraise_with_node(exc, grid)
    return (values.reshape(grid.shape),
            grads.reshape(grid.shape + (grid.dimension,)))


def cell_slack(field, grid: RegularGrid) -> np.ndarray:
    """First-order variation of f over the half-cell around each node."""
    _, grads = sample_with_gradient(field, grid)
    return np.abs(grads) @ (grid.spacing / 2)
