from src.minimax.dynamics import GdaTrace, gda
from src.minimax.modulus import (ModulusEstimate, estimate_inner_modulus,
                                 inner_modulus_bound)
from src.minimax.problem import MinimaxProblem
from src.minimax.solutions import (SolutionClassification, best_response_set,
                                   classify_solutions,
                                   interchangeability_check, is_saddle,
                                   primal_dual_value,
                                   product_structure_check)

__all__ = ['GdaTrace', 'MinimaxProblem', 'ModulusEstimate',
           'SolutionClassification', 'best_response_set',
           'classify_solutions', 'estimate_inner_modulus', 'gda',
           'inner_modulus_bound', 'interchangeability_check', 'is_saddle',
           'primal_dual_value', 'product_structure_check']
