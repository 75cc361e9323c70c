from src.expr.builtins import BUILTINS, builtin
from src.expr.field import (ScalarField, evaluate, finite_difference_check,
                            gradient)
from src.expr.nodes import to_text
from src.expr.parser import parse_expression

__all__ = ['BUILTINS', 'ScalarField', 'builtin', 'evaluate',
           'finite_difference_check', 'gradient', 'parse_expression',
           'to_text']
