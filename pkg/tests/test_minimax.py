import numpy as np
import pytest

from src.certify import FAIL, PASS
from src.errors import DimensionError, InconclusiveError
from src.expr import ScalarField, builtin
from src.grid import BoxDomain
from src.minimax import (MinimaxProblem, SolutionClassification,
                         best_response_set, classify_solutions,
                         estimate_inner_modulus, gda, inner_modulus_bound,
                         interchangeability_check, is_saddle,
                         primal_dual_value, product_structure_check)


def _problem(text, lo=-1.0, hi=1.0):
    return MinimaxProblem.on_box(ScalarField.from_text(text, 2),
                                 BoxDomain.cube(lo, hi, 2))


@pytest.fixture(scope='module', params=['fig3_twosided_pl', 'appB_exp'])
def classified(request):
    problem = MinimaxProblem.on_box(builtin(request.param),
                                    BoxDomain.cube(-3.0, 3.0, 2))
    return problem, classify_solutions(problem, problem.grid(201))


def test_split_must_match_dimension():
    field = builtin('quadratic')
    with pytest.raises(DimensionError):
        MinimaxProblem(field, (1, 2), BoxDomain((-1.0,), (1.0,)),
                       BoxDomain((-1.0, -1.0), (1.0, 1.0)))


def test_joint_pairs_every_row():
    problem = _problem("x0*x1")
    rows = problem.joint([[1.0], [2.0]], [[3.0], [4.0], [5.0]])
    assert rows.shape == (6, 2)
    np.testing.assert_array_equal(rows[:3, 0], [1.0, 1.0, 1.0])
    np.testing.assert_array_equal(rows[:3, 1], [3.0, 4.0, 5.0])


def test_primal_and_dual_values():
    problem = _problem("x0^2 - x1^2")
    assert primal_dual_value(problem, [0.5], 'primal') == \
        pytest.approx(0.25)
    assert primal_dual_value(problem, [0.5], 'dual') == \
        pytest.approx(-0.25)


def test_best_response_plateau():
    problem = MinimaxProblem.on_box(builtin('appB_exp'),
                                    BoxDomain.cube(-3.0, 3.0, 2))
    mask = best_response_set(problem, 'y', [0.0],
                             problem.block_grid('y', 61))
    assert mask.count == 21
    np.testing.assert_allclose(mask.points().min(), -1.0, atol=1e-9)


def test_is_saddle():
    problem = _problem("x0^2 - x1^2")
    assert is_saddle(problem, [0.0, 0.0])
    assert not is_saddle(problem, [0.5, 0.0])


def test_saddle_set_is_the_unit_square(classified):
    _, result = classified
    lo, hi = result.bounding_box
    np.testing.assert_allclose(lo, [-1.0, -1.0], atol=0.03)
    np.testing.assert_allclose(hi, [1.0, 1.0], atol=0.03)
    assert result.component_counts['E'] == 1


def test_minimax_equals_maximin(classified):
    _, result = classified
    assert result.minimax_value == pytest.approx(result.maximin_value,
                                                 abs=1e-6)


def test_saddle_set_is_a_product(classified):
    _, result = classified
    assert product_structure_check(result).verdict == PASS


def test_corner_saddles_interchange(classified):
    problem, _ = classified
    cert = interchangeability_check(problem, [-1.0, -1.0], [1.0, 1.0])
    assert cert.verdict == PASS


def test_classification_serializes(classified):
    _, result = classified
    out = result.to_dict(include_points=False)
    assert set(out['component_counts']) >= {'E', 'Mlow', 'Mup', 'union'}
    assert 'E_points' not in out


def test_product_structure_on_synthetic_sets():
    X = np.array([[0.0], [1.0]])
    Y = np.array([[0.0], [2.0]])
    E = np.array([[0.0, 0.0], [0.0, 2.0], [1.0, 0.0], [1.0, 2.0]])
    good = SolutionClassification(E, E, E, X, Y, {})
    assert product_structure_check(good, tol=1e-9).verdict == PASS
    bad = SolutionClassification(E[:3], E, E, X, Y, {})
    cert = product_structure_check(bad, tol=1e-9)
    assert cert.verdict == FAIL
    np.testing.assert_array_equal(cert.witness, [1.0, 2.0])


def test_gda_converges_on_strict_saddle():
    trace = gda(_problem("x0^2 - x1^2"), [0.5], [0.5], 0.1, 0.1, 500)
    assert trace.converged
    np.testing.assert_allclose(trace.terminal, [0.0, 0.0], atol=1e-5)


def test_gda_rotates_on_bilinear():
    trace = gda(_problem("x0*x1"), [0.5], [0.5], 0.1, 0.1, 100)
    assert not trace.converged
    assert not trace.diverged
    assert trace.norm_nondecreasing
    assert trace.iterations == 100


def test_gda_rejects_nonpositive_steps():
    with pytest.raises(ValueError):
        gda(_problem("x0*x1"), [0.5], [0.5], 0.0, 0.1, 10)


def test_constant_best_response_has_zero_modulus():
    problem = MinimaxProblem.on_box(builtin('appB_exp'),
                                    BoxDomain.cube(-2.0, 2.0, 2))
    estimate = estimate_inner_modulus(problem, 'y', [0.0, 0.0],
                                      [0.1, 0.2, 0.4],
                                      problem.block_grid('y', 201))
    assert estimate.kappa == 0.0


def test_error_bound_of_strict_saddle():
    problem = _problem("x0^2 - x1^2")
    estimate = estimate_inner_modulus(problem, 'y', [0.0, 0.0], [0.5],
                                      problem.block_grid('y', 201),
                                      mode='eb')
    assert estimate.kappa == pytest.approx(0.5, abs=0.05)


def test_modulus_needs_best_response_base():
    problem = _problem("x0^2 - x1^2")
    with pytest.raises(InconclusiveError):
        estimate_inner_modulus(problem, 'y', [0.0, 0.5], [0.1],
                               problem.block_grid('y', 101))


def test_inner_modulus_bound_exponent():
    kappa, exponent = inner_modulus_bound(8.0, 2.0, 1.0, 4.0)
    assert exponent == 1.0
    assert kappa == pytest.approx(8.0 * (4.0 ** -0.5))


def test_error_bound_is_infinite_at_stationary_node_off_response():
    problem = _problem("(x0^2 - 1)^2 - x1^2", -2.0, 2.0)
    estimate = estimate_inner_modulus(problem, 'x', [1.0, 0.0], [1.5],
                                      problem.block_grid('x', 201),
                                      mode='eb')
    assert estimate.kappa == np.inf
    np.testing.assert_allclose(estimate.witness, [0.0], atol=1e-12)
    assert estimate.to_dict()['kappa'] is None


@pytest.fixture(scope='module')
def cubic_response():
    """max over y of -(y - (x^3 - 2x))^2 responds with x^3 - 2x."""
    return _problem("-(x1 - (x0^3 - 2*x0))^2", -2.0, 2.0)


def test_hoelder_fit_of_cubic_response(cubic_response):
    estimate = estimate_inner_modulus(
        cubic_response, 'y', [0.0, 0.0], [0.5, 0.2, 0.1, 0.05, 0.02, 0.005],
        cubic_response.block_grid('y', 4001), mode='hoelder')
    assert estimate.alpha_hat == pytest.approx(1.0, abs=0.05)
    assert estimate.kappa == pytest.approx(2.0, abs=0.25)
    assert estimate.residual is not None


@pytest.mark.parametrize('deltas', [
    [0.5],
    [0.4, 0.2, 0.1, 0.05],
    [0.5, 0.005],
])
def test_hoelder_fit_needs_two_decades(cubic_response, deltas):
    with pytest.raises(ValueError):
        estimate_inner_modulus(cubic_response, 'y', [0.0, 0.0], deltas,
                               cubic_response.block_grid('y', 401),
                               mode='hoelder')


def test_hoelder_on_constant_response_is_zero():
    problem = MinimaxProblem.on_box(builtin('appB_exp'),
                                    BoxDomain.cube(-2.0, 2.0, 2))
    estimate = estimate_inner_modulus(problem, 'y', [0.0, 0.0],
                                      [0.5, 0.2, 0.05, 0.005],
                                      problem.block_grid('y', 201),
                                      mode='hoelder')
    assert estimate.kappa == 0.0
    assert estimate.alpha_hat is None


def test_saddle_set_lies_in_minimax_and_maximin_sets(classified):
    _, result = classified
    E = result.masks['E'].bits
    both = result.masks['Mlow'].bits & result.masks['Mup'].bits
    assert E.any()
    assert not np.any(E & ~both)
    lower = {tuple(p) for p in result.Mlow_points}
    upper = {tuple(p) for p in result.Mup_points}
    assert all(tuple(p) in lower and tuple(p) in upper
               for p in result.E_points)
