import logging

import numpy as np

from src.errors import EmptySetError, SeparationInputError
from src.grid.components import connected_components
from src.grid.masks import sublevel_mask

logger = logging.getLogger(__name__)


def _nearest_true(point, mask):
    """Index of the true node closest to ``point``."""
    points = mask.points()
    k = int(np.argmin(np.linalg.norm(points - point, axis=1)))
    return tuple(int(i) for i in np.argwhere(mask.bits)[k])


def verify_separation(field, box, grid, x0, x1, c, envelope=None):
    """True when x0 and x1 fall in different components of {f <= c}."""
    for name, p in (('x0', x0), ('x1', x1)):
        p = np.asarray(p, dtype=float)
        if not box.contains(p):
            raise SeparationInputError(f"{name}={p.tolist()} lies outside "
                                       f"the box")
        if field.evaluate(p) > c:
            raise SeparationInputError(
                f"{name}={p.tolist()} is above level {c:g}")
    mask = sublevel_mask(field, grid, c, 'sub', envelope)
    if mask.empty:
        raise EmptySetError(
            f"no lattice node lies in {{f <= {c:g}}} at resolution "
            f"{list(grid.shape)}; refine the grid or raise the level")
    labeling = connected_components(mask)
    first = labeling.label_at(_nearest_true(np.asarray(x0, float), mask))
    second = labeling.label_at(_nearest_true(np.asarray(x1, float), mask))
    separated = first != second
    logger.info(f"level {c:g}: labels {first} and {second} among "
                f"{labeling.count} component(s)")
    return separated
