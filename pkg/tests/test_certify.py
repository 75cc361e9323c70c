import numpy as np
import pytest

from src.certify import (FAIL, INCONCLUSIVE, PASS, check_alpha_pl,
                         check_block_growth, check_block_pl, check_growth,
                         check_increasing_at_infinity, check_two_sided_pl,
                         estimate_gradient_lipschitz, estimate_minimum,
                         find_stationary_points, halton_points,
                         invexity_verdict, pl_gradient_flow,
                         pl_growth_constant, sphere_directions)
from src.certify.certificate import worst_case
from src.expr import ScalarField, builtin
from src.grid import BoxDomain, RegularGrid
from src.minimax import MinimaxProblem


@pytest.fixture(scope='module')
def fig3_problem():
    return MinimaxProblem.on_box(builtin('fig3_twosided_pl'),
                                 BoxDomain.cube(-3.0, 3.0, 2))


@pytest.fixture(scope='module')
def appb_problem():
    return MinimaxProblem.on_box(builtin('appB_exp'),
                                 BoxDomain.cube(-2.0, 2.0, 2))


def test_halton_points_are_reproducible():
    first = halton_points([-1, -1], [1, 1], 16, seed=7)
    second = halton_points([-1, -1], [1, 1], 16, seed=7)
    assert np.array_equal(first, second)
    assert np.all(np.abs(first) <= 1)


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_sphere_directions_are_unit(n):
    directions = sphere_directions(n)
    np.testing.assert_allclose(np.linalg.norm(directions, axis=1), 1.0)


def test_worst_case_breaks_ties_lexicographically():
    ratios = np.array([2.0, 1.0, 1.0])
    points = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, 3.0]])
    worst, witness = worst_case(ratios, points)
    assert worst == 1.0
    np.testing.assert_array_equal(witness, [0.5, 3.0])


def test_estimate_minimum_quadratic(quadratic, square3):
    estimate = estimate_minimum(quadratic, square3)
    assert estimate.f_star == pytest.approx(0.0, abs=1e-10)
    assert len(estimate.argmin_points) == 1
    assert not estimate.boundary_attained


def test_estimate_minimum_flags_boundary():
    field = ScalarField.from_text("x0", 1)
    estimate = estimate_minimum(field, BoxDomain((1.0,), (2.0,)))
    assert estimate.f_star == pytest.approx(1.0)
    assert estimate.boundary_attained


def test_stationary_points_of_doublewell(square3):
    found = find_stationary_points(builtin('doublewell'), square3)
    values = sorted(np.round(found.values, 6))
    assert values[0] == pytest.approx(0.0, abs=1e-9)
    assert values[-1] == pytest.approx(1.0, abs=1e-6)


def test_fig1_is_invex(square3):
    cert = invexity_verdict(builtin('fig1_invex'), square3)
    assert cert.verdict == PASS


def test_doublewell_is_not_invex(square3):
    cert = invexity_verdict(builtin('doublewell'), square3)
    assert cert.verdict == FAIL
    np.testing.assert_allclose(cert.witness, [0.0, 0.0], atol=1e-3)


def test_quadratic_pl_equality(quadratic, square3):
    cert = check_alpha_pl(quadratic, RegularGrid(square3, 201), 2, 4)
    assert cert.passed
    assert cert.worst_ratio == pytest.approx(4.0, abs=1e-9)


def test_quadratic_pl_too_strong(quadratic, square3):
    cert = check_alpha_pl(quadratic, RegularGrid(square3, 101), 2, 4.5)
    assert cert.verdict == FAIL
    assert cert.witness is not None


def test_quadratic_growth_equality(quadratic, square3):
    cert = check_growth(quadratic, RegularGrid(square3, 201), 2, 1)
    assert cert.passed
    assert cert.worst_ratio == pytest.approx(1.0, abs=1e-9)


def test_pl_growth_constant():
    assert pl_growth_constant(2, 4) == 1.0
    with pytest.raises(ValueError):
        pl_growth_constant(1, 4)
    with pytest.raises(ValueError):
        pl_growth_constant(2, 0)


def test_all_nodes_excluded_is_inconclusive():
    field = ScalarField.from_text("0*x0", 1)
    grid = RegularGrid(BoxDomain((-1.0,), (1.0,)), 11)
    cert = check_alpha_pl(field, grid, 2, 1, f_star=0.0)
    assert cert.verdict == INCONCLUSIVE


def test_fig3_two_sided_pl(fig3_problem):
    grid = fig3_problem.grid(201)
    x_cert, y_cert = check_two_sided_pl(fig3_problem, grid, 1 / 32, 1 / 7,
                                        1e-9)
    assert x_cert.passed
    assert y_cert.passed


def test_fig3_two_sided_pl_fails_for_large_mu(fig3_problem):
    grid = fig3_problem.grid(201)
    x_cert, _ = check_two_sided_pl(fig3_problem, grid, 0.5, 1 / 7, 1e-9)
    assert x_cert.verdict == FAIL
    assert np.all(np.isfinite(x_cert.witness))


def test_appb_block_pl(appb_problem):
    grid = appb_problem.grid(201)
    assert check_block_pl(appb_problem, grid, 'y', 2, 4 / np.e).passed
    assert check_block_pl(appb_problem, grid, 'x', 2, 1.0).passed


def test_appb_block_growth(appb_problem):
    grid = appb_problem.grid(201)
    assert check_block_growth(appb_problem, grid, 'x', 2, 1 / np.e).passed
    assert check_block_growth(appb_problem, grid, 'y', 2, 1.0).passed


def test_gradient_lipschitz_estimates(fig3_problem, appb_problem):
    fig3 = estimate_gradient_lipschitz(fig3_problem.field,
                                       fig3_problem.grid(201))
    appb = estimate_gradient_lipschitz(appb_problem.field,
                                       appb_problem.grid(201))
    assert 0 < fig3 <= 56
    assert 0 < appb <= 8


def test_quadratic_increases_at_infinity(quadratic):
    cert = check_increasing_at_infinity(quadratic, [0, 0], [1, 2, 3], 0.5)
    assert cert.passed
    assert cert.notes['shell_minima'] == pytest.approx([1.0, 4.0, 9.0])


def test_fig1_does_not_increase_at_infinity():
    cert = check_increasing_at_infinity(builtin('fig1_invex'), [0, 0],
                                        [2, 4, 8, 16], 0.5)
    assert cert.verdict == FAIL


def test_increasing_needs_three_radii(quadratic):
    with pytest.raises(ValueError):
        check_increasing_at_infinity(quadratic, [0, 0], [1, 2], 0.5)


def test_pl_flow_on_quadratic(quadratic):
    trace = pl_gradient_flow(quadratic, [1.0, 0.0], 2, 0.0, mu=4)
    assert trace.converged
    assert trace.terminal_time <= 1.0
    assert np.linalg.norm(trace.terminal_point) <= 1e-3
    assert trace.time_bound == pytest.approx(1.0)
    assert trace.within_bound


def test_pl_flow_already_converged(quadratic):
    trace = pl_gradient_flow(quadratic, [0.0, 0.0], 2, 0.0)
    assert trace.converged
    assert trace.terminal_time == 0.0


def test_certificates_are_reproducible(square3):
    grid = RegularGrid(square3, 101)
    field = builtin('appB_exp')
    first = check_alpha_pl(field, grid, 2, 0.1).to_json()
    second = check_alpha_pl(field, grid, 2, 0.1).to_json()
    assert first == second


def test_flow_values_never_increase():
    trace = pl_gradient_flow(builtin('doublewell'), [0.5, 0.5], 2, 0.0)
    assert trace.converged
    assert len(trace.values) > 2
    steps = np.diff(trace.values)
    assert np.all(steps <= 1e-10 * (1 + np.abs(trace.values[:-1])))
    np.testing.assert_allclose(trace.terminal_point, [1.0, 0.0], atol=1e-3)


@pytest.mark.parametrize('text', ["x0^2 + x1^2 + x1^4", "x0^2 + 2*x1^2"])
def test_pl_implies_growth_with_derived_constant(text):
    field = ScalarField.from_text(text, 2)
    grid = RegularGrid(BoxDomain.cube(-2.0, 2.0, 2), 101)
    assert check_alpha_pl(field, grid, 2, 4, f_star=0.0).passed
    eta = pl_growth_constant(2, 4)
    cert = check_growth(field, grid, 2, eta, f_star=0.0)
    assert cert.passed
    assert cert.worst_ratio >= eta - 1e-6
