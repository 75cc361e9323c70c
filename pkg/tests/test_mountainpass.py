import numpy as np
import pytest

from src.errors import EmptySetError, SeparationInputError
from src.expr import builtin
from src.grid import BoxDomain, RegularGrid
from src.mountainpass import (PathState, find_mountain_pass,
                              verify_separation)


@pytest.fixture(scope='module')
def doublewell_pass():
    return find_mountain_pass(builtin('doublewell'), [-1.0, 0.0],
                              [1.0, 0.0])


def test_doublewell_pass_point(doublewell_pass):
    assert doublewell_pass.converged
    assert not doublewell_pass.no_pass
    assert doublewell_pass.pass_value == pytest.approx(1.0, abs=1e-4)
    assert doublewell_pass.gradient_norm <= 1e-6
    np.testing.assert_allclose(doublewell_pass.pass_point, [0.0, 0.0],
                               atol=1e-3)


def test_pass_exceeds_separating_level(doublewell_pass, square3):
    field = builtin('doublewell')
    grid = RegularGrid(square3, 201)
    assert verify_separation(field, square3, grid, [-1, 0], [1, 0], 0.5)
    assert doublewell_pass.pass_value > 0.5


def test_even_node_count_climbs_onto_pass():
    result = find_mountain_pass(builtin('doublewell'), [-1.0, 0.0],
                                [1.0, 0.0], m=20)
    assert result.converged
    assert result.pass_value == pytest.approx(1.0, abs=1e-4)


def test_quadratic_has_no_pass(quadratic):
    result = find_mountain_pass(quadratic, [-1.0, 0.0], [1.0, 0.0])
    assert result.no_pass
    assert not result.inconclusive


def test_pass_rows_for_export(doublewell_pass):
    rows = list(doublewell_pass.rows())
    assert rows
    assert set(rows[0]) == {'iteration', 'node', 'x0', 'x1', 'value'}


def test_separation_fails_when_level_joins_wells(square3):
    field = builtin('doublewell')
    grid = RegularGrid(square3, 201)
    assert not verify_separation(field, square3, grid, [-1, 0], [1, 0], 1.5)


def test_separation_rejects_points_above_level(square3):
    field = builtin('doublewell')
    grid = RegularGrid(square3, 51)
    with pytest.raises(SeparationInputError):
        verify_separation(field, square3, grid, [0, 0], [1, 0], 0.5)
    with pytest.raises(SeparationInputError):
        verify_separation(field, square3, grid, [5, 0], [1, 0], 0.5)


def test_reparameterize_equalizes_spacing():
    nodes = np.array([[0.0, 0.0], [0.1, 0.0], [0.2, 0.0], [1.0, 0.0]])
    path = PathState(nodes.copy())
    path.reparameterize()
    np.testing.assert_allclose(path.nodes[:, 0], [0, 1 / 3, 2 / 3, 1],
                               atol=1e-12)
    assert path.spacing_spread() == pytest.approx(0.0, abs=1e-12)


def test_string_inside_box_is_not_flagged():
    result = find_mountain_pass(builtin('doublewell'), [-1.0, 0.0],
                                [1.0, 0.0],
                                box=BoxDomain.cube(-1.0, 1.0, 2))
    assert result.converged
    assert not result.boundary_hit


def test_pass_is_invariant_under_endpoint_swap(doublewell_pass):
    swapped = find_mountain_pass(builtin('doublewell'), [1.0, 0.0],
                                 [-1.0, 0.0])
    assert swapped.converged
    assert swapped.pass_value == \
        pytest.approx(doublewell_pass.pass_value, abs=1e-4)
    np.testing.assert_allclose(swapped.pass_point,
                               doublewell_pass.pass_point, atol=1e-3)


def test_fig3_primal_slice_has_no_pass():
    field = builtin('fig3_twosided_pl').restrict({1: 0.0})
    result = find_mountain_pass(field, [-2.0, 0.0], [2.0, 0.0])
    assert result.no_pass
    assert result.pass_value <= 1.0 + 1e-8


def test_separation_with_no_node_below_level(quadratic):
    box = BoxDomain.cube(-1.0, 1.0, 2)
    grid = RegularGrid(box, 200)
    with pytest.raises(EmptySetError, match="resolution"):
        verify_separation(quadratic, box, grid, [-0.0005, 0.0],
                          [0.0005, 0.0], 1e-6, envelope=False)
