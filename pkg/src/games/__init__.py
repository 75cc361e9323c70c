from src.games.equilibria import (NashResult, find_nash, joint_grid,
                                  nash_matches_potential,
                                  potential_consistency_check,
                                  potential_maximizers)
from src.games.operators import (LambdaResult, RationalizabilityTrace,
                                 best_response_masks, iterate_rationalizable,
                                 lambda_operator, player_best_response,
                                 strategic_compactness_check)
from src.games.sets import JointGridSet
from src.games.spec import BUILTIN_GAMES, GameSpec, builtin_game

__all__ = ['BUILTIN_GAMES', 'GameSpec', 'JointGridSet', 'LambdaResult',
           'NashResult', 'RationalizabilityTrace', 'best_response_masks',
           'builtin_game', 'find_nash', 'iterate_rationalizable',
           'joint_grid', 'lambda_operator', 'nash_matches_potential',
           'player_best_response', 'potential_consistency_check',
           'potential_maximizers', 'strategic_compactness_check']
