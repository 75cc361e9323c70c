"""Text to expression tree, built on a LALR grammar."""
import re

from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedInput, VisitError

from src.errors import ExprSyntaxError, UnknownIdentifierError
from src.expr.nodes import Binary, Call, Const, Unary, Var

GRAMMAR = r"""
?start: sum

?sum: product
    | sum "+" product       -> add
    | sum "-" product       -> sub

?product: unary
    | product "*" unary     -> mul
    | product "/" unary     -> div

?unary: power
    | "-" unary             -> neg
    | "+" unary             -> pos

?power: atom
    | atom POW unary        -> pow

?atom: NUMBER               -> number
    | NAME "(" args ")"     -> call
    | NAME                  -> name
    | "(" sum ")"

args: sum ("," sum)*

POW: "^" | "**"
NAME: /[A-Za-z_][A-Za-z0-9_]*/
NUMBER: /(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?/

%import common.WS
%ignore WS
"""

FUNCTIONS = {
    'exp': 1, 'sin': 1, 'cos': 1, 'abs': 1, 'sgn': 1, 'sigmoid': 1,
    'sqrt': 1, 'log': 1, 'max': 2, 'min': 2,
}
CONSTANTS = {'pi': 3.141592653589793, 'e': 2.718281828459045}
_VARIABLE = re.compile(r"x(\d+)")

_lark = Lark(GRAMMAR, parser='lalr', propagate_positions=True)


class VariableIndexError(ExprSyntaxError):
    pass


def _span(meta):
    if getattr(meta, 'empty', True):
        return (0, 0)
    return (meta.start_pos, meta.end_pos)


@v_args(meta=True)
class _TreeBuilder(Transformer):

    def __init__(self, dimension):
        super().__init__()
        self.dimension = dimension

    def _binary(self, op, meta, children):
        return Binary(op, children[0], children[1], _span(meta))

    def add(self, meta, children):
        return self._binary('+', meta, children)

    def sub(self, meta, children):
        return self._binary('-', meta, children)

    def mul(self, meta, children):
        return self._binary('*', meta, children)

    def div(self, meta, children):
        return self._binary('/', meta, children)

    def pow(self, meta, children):
        return Binary('^', children[0], children[2], _span(meta))

    def neg(self, meta, children):
        return Unary('neg', children[0], _span(meta))

    def pos(self, meta, children):
        return children[0]

    def number(self, meta, children):
        return Const(float(children[0]), _span(meta))

    def args(self, meta, children):
        return tuple(children)

    def name(self, meta, children):
        token = children[0]
        match = _VARIABLE.fullmatch(token)
        if match:
            index = int(match.group(1))
            if index >= self.dimension:
                raise VariableIndexError(
                    f"variable index out of range: x{index} with dimension "
                    f"{self.dimension}", token.start_pos)
            return Var(index, _span(meta))
        if token in CONSTANTS:
            return Const(CONSTANTS[token], _span(meta))
        raise UnknownIdentifierError(
            f"unknown identifier '{token}'", token.start_pos)

    def call(self, meta, children):
        token, args = children
        if token not in FUNCTIONS:
            raise UnknownIdentifierError(
                f"unknown function '{token}'", token.start_pos)
        if len(args) != FUNCTIONS[token]:
            raise ExprSyntaxError(
                f"{token} expects {FUNCTIONS[token]} argument(s), got "
                f"{len(args)}", token.start_pos)
        return Call(str(token), args, _span(meta))


def _byte_offset(text, char_offset):
    return len(text[:char_offset].encode('utf-8'))


def parse_expression(text: str, n: int):
    """Parse ``text`` over variables x0..x(n-1) into an expression tree."""
    try:
        tree = _lark.parse(text)
    except UnexpectedInput as exc:
        offset = getattr(exc, 'pos_in_stream', None)
        if offset is None or offset < 0:
            offset = len(text)
        raise ExprSyntaxError(
            "syntax error", _byte_offset(text, offset)) from None
    try:
        return _TreeBuilder(n).transform(tree)
    except VisitError as exc:
        inner = exc.orig_exc
        if isinstance(inner, ExprSyntaxError):
            inner.offset = _byte_offset(text, inner.offset)
        raise inner from None
