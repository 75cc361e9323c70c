from dataclasses import dataclass
from typing import Tuple

import numpy as np

from src.errors import DimensionError
from src.expr.field import ScalarField
from src.grid.lattice import BoxDomain, RegularGrid


@dataclass(frozen=True)
class MinimaxProblem:
    """min over x, max over y of f(x, y); x is the leading block."""
    field: ScalarField
    split: Tuple[int, int]
    x_box: BoxDomain
    y_box: BoxDomain

    def __post_init__(self):
        n_x, n_y = self.split
        if n_x < 1 or n_y < 1:
            raise DimensionError("both blocks need at least one coordinate")
        if n_x + n_y != self.field.dimension:
            raise DimensionError(
                f"split {self.split} does not match field dimension "
                f"{self.field.dimension}")
        if self.x_box.dimension != n_x or self.y_box.dimension != n_y:
            raise DimensionError("block boxes do not match the split")

    @classmethod
    def on_box(cls, field, box: BoxDomain, n_x=1):
        """Split a joint box after the first ``n_x`` coordinates."""
        n_y = box.dimension - n_x
        return cls(field, (n_x, n_y),
                   BoxDomain(box.lo[:n_x], box.hi[:n_x]),
                   BoxDomain(box.lo[n_x:], box.hi[n_x:]))

    @property
    def box(self):
        return self.x_box.product(self.y_box)

    @property
    def n_x(self):
        return self.split[0]

    def joint(self, x, y):
        """Every pairing of the rows of x with the rows of y."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        y = np.atleast_2d(np.asarray(y, dtype=float))
        return np.hstack([np.repeat(x, len(y), axis=0),
                          np.tile(y, (len(x), 1))])

    def parts(self, point):
        point = np.asarray(point, dtype=float)
        return point[..., :self.n_x], point[..., self.n_x:]

    def block_box(self, side):
        return self.x_box if side == 'x' else self.y_box

    def block_grid(self, side, resolution):
        return RegularGrid(self.block_box(side), resolution)

    def grid(self, resolution):
        return RegularGrid(self.box, resolution)

    def value(self, x, y):
        return float(self.field.evaluate(np.concatenate(
            [np.atleast_1d(x), np.atleast_1d(y)])))
