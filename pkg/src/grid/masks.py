"""Boolean level-set membership on lattice nodes."""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.config import config
from src.grid.lattice import RegularGrid, sample_with_gradient


@dataclass
class CellMask:
    grid: Optional[RegularGrid]
    bits: np.ndarray

    @property
    def count(self):
        return int(self.bits.sum())

    @property
    def empty(self):
        return not self.bits.any()

    def points(self):
        """Coordinates of the true nodes, shape (count, n)."""
        if self.grid is None:
            raise ValueError("mask has no grid attached")
        index = np.nonzero(self.bits)
        return np.stack([axis[i] for axis, i in zip(self.grid.axes, index)],
                        axis=1)

    def __and__(self, other):
        return CellMask(self.grid, self.bits & other.bits)

    def __or__(self, other):
        return CellMask(self.grid, self.bits | other.bits)


def level_mask(values, c, direction='sub', slack=None, grid=None):
    """Nodes with value <= c (sub) or >= c (super), widened by ``slack``."""
    values = np.asarray(values, dtype=float)
    widen = 0.0 if slack is None else slack
    if direction == 'sub':
        bits = values - widen <= c
    elif direction == 'super':
        bits = values + widen >= c
    else:
        raise ValueError(f"direction must be 'sub' or 'super', got "
                         f"{direction!r}")
    return CellMask(grid, bits)


def sublevel_mask(field, grid, c, direction='sub', envelope=None):
    """Level mask of a field; with the envelope a node joins when its cell
    can reach the level to first order."""
    envelope = config.grid.envelope if envelope is None else envelope
    values, grads = sample_with_gradient(field, grid)
    slack = np.abs(grads) @ (grid.spacing / 2) if envelope else None
    return level_mask(values, c, direction, slack, grid)


def critical_mask(field, grid, c, tol_val, tol_grad):
    """Nodes where f is within tol_val of c and the gradient is small."""
    values, grads = sample_with_gradient(field, grid)
    bits = ((np.abs(values - c) <= tol_val)
            & (np.linalg.norm(grads, axis=-1) <= tol_grad))
    return CellMask(grid, bits)


def touches_boundary(mask: CellMask) -> bool:
    bits = mask.bits
    for axis in range(bits.ndim):
        if (np.take(bits, 0, axis=axis).any()
                or np.take(bits, -1, axis=axis).any()):
            return True
    return False
