"""n-player continuous games over boxes."""
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from src.errors import DimensionError, UnknownBuiltinError
from src.expr.builtins import BUILTINS
from src.expr.field import ScalarField
from src.grid.lattice import BoxDomain, RegularGrid


@dataclass(frozen=True)
class GameSpec:
    boxes: Tuple[BoxDomain, ...]
    utilities: Tuple[ScalarField, ...]
    potential: Optional[ScalarField] = None
    name: Optional[str] = None

    def __post_init__(self):
        if len(self.boxes) != len(self.utilities):
            raise DimensionError("one utility per player is required")
        total = self.dimension
        for i, u in enumerate(self.utilities):
            if u.dimension != total:
                raise DimensionError(
                    f"utility {i} has dimension {u.dimension}, joint action "
                    f"space has {total}")
        if self.potential is not None and self.potential.dimension != total:
            raise DimensionError("potential dimension mismatch")

    @classmethod
    def from_texts(cls, boxes, utilities, potential=None, name=None):
        boxes = tuple(boxes)
        total = sum(b.dimension for b in boxes)
        fields = tuple(ScalarField.from_text(t, total, name=f"u{i + 1}")
                       for i, t in enumerate(utilities))
        p = ScalarField.from_text(potential, total, name="P") \
            if potential else None
        return cls(boxes, fields, p, name)

    @property
    def players(self):
        return len(self.boxes)

    @property
    def dimensions(self):
        return [b.dimension for b in self.boxes]

    @property
    def dimension(self):
        return sum(self.dimensions)

    @property
    def box(self):
        joint = self.boxes[0]
        for b in self.boxes[1:]:
            joint = joint.product(b)
        return joint

    def block(self, i):
        start = sum(self.dimensions[:i])
        return slice(start, start + self.dimensions[i])

    def assemble(self, i, own, others):
        """Joint rows for every pairing of ``others`` (profiles of the
        remaining players, concatenated in player order) with ``own``."""
        own = np.atleast_2d(np.asarray(own, dtype=float))
        others = np.asarray(others, dtype=float)
        if others.ndim == 1:
            others = others.reshape(1, -1)
        rows = np.empty((len(others) * len(own), self.dimension))
        block = self.block(i)
        rest = [k for k in range(self.dimension)
                if not block.start <= k < block.stop]
        rows[:, block] = np.tile(own, (len(others), 1))
        rows[:, rest] = np.repeat(others, len(own), axis=0)
        return rows

    def grids(self, resolution):
        if isinstance(resolution, int):
            resolution = [resolution] * self.players
        return [RegularGrid(b, r) for b, r in zip(self.boxes, resolution)]

    def describe(self):
        return {'name': self.name, 'players': self.players,
                'boxes': [b.to_dict() for b in self.boxes],
                'utilities': [u.text for u in self.utilities],
                'potential': self.potential.text if self.potential else None}


_ECON = ("-(x0+x1)^2 - x0^2", "-(x0+x1)^2 - x1^2",
         "-(x0+x1)^2 - x0^2 - x1^2")

BUILTIN_GAMES = {
    'fig4': lambda: GameSpec.from_texts(
        [BoxDomain((-2.5,), (2.5,))] * 2,
        [BUILTINS['fig4_u1'][0], BUILTINS['fig4_u2'][0]], name='fig4'),
    # b(a) = -(a1 + a2)^2 shared, private costs c_i = a_i^2
    'econ_incave': lambda: GameSpec.from_texts(
        [BoxDomain((-2.0,), (2.0,))] * 2, _ECON[:2], _ECON[2],
        name='econ_incave'),
}


def builtin_game(name: str) -> GameSpec:
    try:
        return BUILTIN_GAMES[name]()
    except KeyError:
        available = ", ".join(sorted(BUILTIN_GAMES))
        raise UnknownBuiltinError(
            f"unknown game '{name}'; available: {available}") from None

