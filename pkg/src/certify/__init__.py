from src.certify.blocks import BlockView
from src.certify.certificate import (FAIL, INCONCLUSIVE, PASS, Certificate,
                                     jsonable)
from src.certify.conditions import (check_alpha_pl, check_block_growth,
                                    check_block_pl, check_growth,
                                    check_increasing_at_infinity,
                                    check_two_sided_pl,
                                    estimate_gradient_lipschitz,
                                    invexity_verdict, pl_growth_constant)
from src.certify.flow import FlowTrace, pl_gradient_flow
from src.certify.search import (MinimumEstimate, StationaryPointSet,
                                estimate_minimum, find_stationary_points,
                                halton_points, projected_descent,
                                slice_optimum, sphere_directions)

__all__ = ['BlockView', 'Certificate', 'FAIL', 'FlowTrace', 'INCONCLUSIVE',
           'MinimumEstimate', 'PASS', 'StationaryPointSet', 'check_alpha_pl',
           'check_block_growth', 'check_block_pl', 'check_growth',
           'check_increasing_at_infinity', 'check_two_sided_pl',
           'estimate_gradient_lipschitz', 'estimate_minimum',
           'find_stationary_points', 'halton_points', 'invexity_verdict',
           'jsonable', 'pl_gradient_flow', 'pl_growth_constant',
           'projected_descent', 'slice_optimum', 'sphere_directions']
