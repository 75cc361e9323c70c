"""Plot-data CSV writers. Nothing here draws; columns are documented in
docs/commands.rst."""
import logging
import os

import numpy as np
import pandas as pd

from src.grid.components import connected_components
from src.grid.lattice import sample

logger = logging.getLogger(__name__)


def labeling_frame(mask, field=None, labeling=None):
    """One row per lattice node: coordinates, value, component label (-1 off
    the mask)."""
    grid = mask.grid
    labeling = labeling or connected_components(mask)
    points = grid.points()
    frame = pd.DataFrame(points,
                         columns=[f'x{i}' for i in range(grid.dimension)])
    if field is not None:
        frame['value'] = sample(field, grid).ravel()
    frame['label'] = np.asarray(labeling.labels).ravel()
    return frame


def rows_frame(source):
    """Frame from any result exposing ``rows()``."""
    return pd.DataFrame(list(source.rows()))


def write_csv(frame: pd.DataFrame, path):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    frame.to_csv(path, index=False)
    logger.info(f"wrote {len(frame)} row(s) to {path}")
    return str(path)


def export_labeling(mask, path, field=None, labeling=None):
    return write_csv(labeling_frame(mask, field, labeling), path)


def export_rows(source, path):
    return write_csv(rows_frame(source), path)
