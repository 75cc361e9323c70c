import pandas as pd

from src.certify import pl_gradient_flow
from src.expr import ScalarField, builtin
from src.grid import BoxDomain, RegularGrid, sublevel_mask
from src.visualization import export_labeling, export_rows, labeling_frame


def test_labeling_frame_columns():
    field = builtin('doublewell')
    grid = RegularGrid(BoxDomain.cube(-2.0, 2.0, 2), 41)
    frame = labeling_frame(sublevel_mask(field, grid, 0.5), field=field)
    assert list(frame.columns) == ['x0', 'x1', 'value', 'label']
    assert len(frame) == 41 * 41
    assert sorted(frame['label'].unique()) == [-1, 0, 1]


def test_export_labeling_without_values(tmp_path):
    grid = RegularGrid(BoxDomain((-1.0,), (1.0,)), 5)
    mask = sublevel_mask(ScalarField.from_text('x0^2', 1), grid, 0.3)
    path = export_labeling(mask, tmp_path / 'nested' / 'labels.csv')
    frame = pd.read_csv(path)
    assert list(frame.columns) == ['x0', 'label']
    assert frame['label'].tolist() == [-1, 0, 0, 0, -1]


def test_export_rows_from_trace(tmp_path, quadratic):
    trace = pl_gradient_flow(quadratic, [1.0, 0.0], 2, 0.0, mu=4.0)
    frame = pd.read_csv(export_rows(trace, tmp_path / 'flow.csv'))
    assert list(frame.columns) == ['t', 'x0', 'x1', 'value']
    assert frame['t'].iloc[0] == 0.0
    assert frame['value'].iloc[-1] < frame['value'].iloc[0]
