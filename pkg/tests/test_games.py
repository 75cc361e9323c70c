import numpy as np
import pytest

from src.certify import FAIL, PASS
from src.errors import BudgetExceededError, UnknownBuiltinError
from src.expr import ScalarField
from src.games import (GameSpec, JointGridSet, builtin_game, find_nash,
                       iterate_rationalizable, joint_grid, lambda_operator,
                       nash_matches_potential, player_best_response,
                       potential_consistency_check, potential_maximizers,
                       strategic_compactness_check)
from src.grid import BoxDomain, RegularGrid

ROOT3 = np.sqrt(3.0)


@pytest.fixture(scope='module')
def fig4():
    return builtin_game('fig4')


@pytest.fixture(scope='module')
def econ():
    return builtin_game('econ_incave')


@pytest.fixture(scope='module')
def wide_grids():
    """Per-player lattices over [-2 sqrt 3, 2 sqrt 3] with sqrt 3 on a
    node."""
    box = BoxDomain((-2 * ROOT3,), (2 * ROOT3,))
    return [RegularGrid(box, 121), RegularGrid(box, 121)]


def _square(grids, half):
    box = BoxDomain((-half,), (half,))
    return JointGridSet.from_boxes(grids, [box, box])


def test_unknown_game():
    with pytest.raises(UnknownBuiltinError):
        builtin_game('prisoners')


def test_assemble_places_own_block(fig4):
    rows = fig4.assemble(1, [[0.5], [0.7]], [[2.0]])
    np.testing.assert_array_equal(rows, [[2.0, 0.5], [2.0, 0.7]])


def test_player_one_best_response(fig4):
    grid = RegularGrid(BoxDomain((-2.0,), (2.0,)), 81)
    mask = player_best_response(fig4, 0, [1.0], grid)
    np.testing.assert_allclose(grid.points()[mask.ravel()], [[1.0]])


def test_player_two_best_response(fig4):
    grid = RegularGrid(BoxDomain((-2.0,), (2.0,)), 81)
    mask = player_best_response(fig4, 1, [0.0], grid)
    np.testing.assert_allclose(grid.points()[mask.ravel()], [[0.0]],
                               atol=1e-12)


def test_lambda_of_origin(fig4, wide_grids):
    S = JointGridSet.from_points(wide_grids, [[0.0], [0.0]])
    image = lambda_operator(fig4, S).image
    assert image.sizes() == [1, 1]
    for i in range(2):
        np.testing.assert_allclose(image.nodes(i), [[0.0]], atol=1e-12)


def test_lambda_rejects_empty(fig4, wide_grids):
    S = JointGridSet(wide_grids, [np.zeros(121, dtype=bool)] * 2)
    with pytest.raises(ValueError):
        lambda_operator(fig4, S)


def test_lambda_budget_guard(fig4, wide_grids):
    K = _square(wide_grids, ROOT3)
    with pytest.raises(BudgetExceededError):
        lambda_operator(fig4, K, budget=100)
    result = lambda_operator(fig4, K, budget=200, subsample=True)
    assert result.approximate
    assert not result.image.empty


def test_lambda_budget_counts_opponent_profiles(fig4, wide_grids):
    result = lambda_operator(fig4, _square(wide_grids, ROOT3), budget=1000)
    assert not result.approximate
    assert result.evaluations > 1000


def test_lambda_is_monotone(fig4, rng):
    grid = RegularGrid(BoxDomain((-2.0,), (2.0,)), 21)
    grids = [grid, grid]
    for _ in range(50):
        outer = [rng.random(21) < 0.6 for _ in range(2)]
        for m in outer:
            m[rng.integers(21)] = True
        inner = [m & (rng.random(21) < 0.5) for m in outer]
        for m, o in zip(inner, outer):
            m[np.flatnonzero(o)[0]] = True
        small = lambda_operator(fig4, JointGridSet(grids, inner),
                                refine=2).image
        large = lambda_operator(fig4, JointGridSet(grids, outer),
                                refine=2).image
        assert small.issubset(large)


def test_compactness_passes_on_root3_square(fig4, wide_grids):
    cert = strategic_compactness_check(fig4, _square(wide_grids, ROOT3))
    assert cert.verdict == PASS
    assert cert.worst_ratio <= 1.0 + 1e-9


def test_compactness_fails_on_unit_square(fig4, wide_grids):
    cert = strategic_compactness_check(fig4, _square(wide_grids, 1.0))
    assert cert.verdict == FAIL
    assert abs(cert.witness[0]) == pytest.approx(1.0887, abs=0.06)
    assert cert.notes['player'] == 1


def test_rationalizable_fixed_point_at_first_round(fig4, wide_grids):
    K = _square(wide_grids, ROOT3)
    trace = iterate_rationalizable(fig4, K, max_k=5)
    assert trace.fixed_point_reached
    assert trace.fixed_at == 1
    assert trace.final == K
    assert trace.steps[-1].component_counts == [1, 1]


def test_rationalizable_from_unit_square_settles(fig4, wide_grids):
    spacing = float(wide_grids[0].spacing.max())
    trace = iterate_rationalizable(fig4, _square(wide_grids, 1.0), max_k=6)
    assert trace.fixed_point_reached
    assert not trace.nested
    lo, hi = trace.final.extent(1)
    peak = 2 * np.sqrt(2.0 / 3.0) - np.sqrt(2.0 / 3.0) ** 3
    assert hi[0] == pytest.approx(peak, abs=spacing)
    assert lo[0] == pytest.approx(-peak, abs=spacing)
    for step in trace.steps:
        assert step.component_counts == [1, 1]


def test_rationalizable_validates_rounds(fig4, wide_grids):
    with pytest.raises(ValueError):
        iterate_rationalizable(fig4, _square(wide_grids, 1.0), max_k=0)


def test_budget_exhaustion_returns_partial_trace(fig4, wide_grids):
    trace = iterate_rationalizable(fig4, _square(wide_grids, ROOT3),
                                   max_k=3, budget=10)
    assert trace.budget_exceeded
    assert len(trace.steps) == 1
    assert not trace.fixed_point_reached


@pytest.fixture(scope='module')
def fig4_nash(fig4):
    return find_nash(fig4, fig4.grids(101))


def test_fig4_has_three_isolated_equilibria(fig4_nash):
    assert fig4_nash.component_count == 3
    reps = sorted(fig4_nash.representatives.tolist())
    expected = [[-ROOT3, -ROOT3], [0.0, 0.0], [ROOT3, ROOT3]]
    np.testing.assert_allclose(reps, expected, atol=0.05)


def test_fig4_drops_truncated_boundary_nodes(fig4_nash):
    assert fig4_nash.excluded_boundary > 0
    assert np.all(np.abs(fig4_nash.points[:, 0]) < 2.5)


def test_nash_lies_in_rationalizable_set(fig4, fig4_nash, wide_grids):
    trace = iterate_rationalizable(fig4, _square(wide_grids, ROOT3),
                                   max_k=5)
    for point in fig4_nash.representatives:
        assert trace.final.contains_point([point[:1], point[1:]])


def test_econ_potential_is_consistent(econ):
    cert = potential_consistency_check(econ, econ.potential, econ.grids(41))
    assert cert.verdict == PASS
    assert cert.worst_ratio <= 1e-9


def test_fig4_candidate_potential_is_inconsistent(fig4):
    candidate = ScalarField.from_text("-0.5*x0^2 - 0.5*x1^2 + x0*x1", 2)
    cert = potential_consistency_check(fig4, candidate, fig4.grids(21))
    assert cert.verdict == FAIL
    assert cert.worst_ratio > 1.0


def test_econ_nash_matches_potential_argmax(econ):
    grids = econ.grids(81)
    nash = find_nash(econ, grids)
    assert nash.component_count == 1
    np.testing.assert_allclose(nash.representatives[0], [0.0, 0.0],
                               atol=1e-6)
    maximizers = potential_maximizers(econ.potential, grids)
    np.testing.assert_allclose(maximizers.points(), [[0.0, 0.0]],
                               atol=1e-12)
    cert = nash_matches_potential(nash, maximizers)
    assert cert.verdict == PASS


def test_nash_mismatch_on_count(fig4_nash, fig4):
    peak = ScalarField.from_text("-(x0^2 + x1^2)", 2)
    maximizers = potential_maximizers(peak, fig4.grids(101))
    cert = nash_matches_potential(fig4_nash, maximizers)
    assert cert.verdict == FAIL
    assert cert.notes['maximizer_components'] == 1


def test_single_player_game():
    game = GameSpec.from_texts([BoxDomain((-1.0,), (1.0,))],
                               ["-(x0 - 0.3)^2"])
    nash = find_nash(game, game.grids(201))
    assert nash.component_count == 1
    np.testing.assert_allclose(nash.representatives[0], [0.3], atol=1e-8)
    image = lambda_operator(game, JointGridSet.full(game.grids(21))).image
    np.testing.assert_allclose(image.nodes(0), [[0.3]], atol=1e-12)


def test_joint_grid_concatenates(fig4):
    grid = joint_grid(fig4.grids([11, 21]))
    assert grid.shape == (11, 21)
    assert grid.domain.dimension == 2


def test_set_serialization(wide_grids):
    S = _square(wide_grids, 1.0)
    data = S.to_dict()
    assert data['component_counts'] == [1, 1]
    rows = list(S.rows(k=0))
    assert len(rows) == 242
    assert sum(r['member'] for r in rows) == sum(S.sizes())
