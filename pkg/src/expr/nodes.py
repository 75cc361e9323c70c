"""Immutable expression tree.

Spans are byte ranges into the source text and do not take part in
equality, so two trees compare equal when their structure and constants do.
"""
from dataclasses import dataclass, field
from typing import Tuple, Union

Span = Tuple[int, int]


@dataclass(frozen=True)
class Const:
    value: float
    span: Span = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Var:
    index: int
    span: Span = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Unary:
    op: str
    arg: 'Expr'
    span: Span = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Binary:
    op: str
    left: 'Expr'
    right: 'Expr'
    span: Span = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Call:
    func: str
    args: Tuple['Expr', ...]
    span: Span = field(default=(0, 0), compare=False)


Expr = Union[Const, Var, Unary, Binary, Call]


def to_text(expr: Expr) -> str:
    """Fully parenthesized rendering that parses back to an equivalent tree."""
    if isinstance(expr, Const):
        text = repr(float(expr.value))
        return f"({text})" if expr.value < 0 else text
    if isinstance(expr, Var):
        return f"x{expr.index}"
    if isinstance(expr, Unary):
        return f"(-{to_text(expr.arg)})"
    if isinstance(expr, Binary):
        return f"({to_text(expr.left)} {expr.op} {to_text(expr.right)})"
    args = ", ".join(to_text(a) for a in expr.args)
    return f"{expr.func}({args})"


def substitute(expr: Expr, assignments: dict) -> Expr:
    """Replace variables listed in ``assignments`` by constants."""
    if isinstance(expr, Var):
        if expr.index in assignments:
            return Const(float(assignments[expr.index]), expr.span)
        return expr
    if isinstance(expr, Const):
        return expr
    if isinstance(expr, Unary):
        return Unary(expr.op, substitute(expr.arg, assignments), expr.span)
    if isinstance(expr, Binary):
        return Binary(expr.op, substitute(expr.left, assignments),
                      substitute(expr.right, assignments), expr.span)
    return Call(expr.func,
                tuple(substitute(a, assignments) for a in expr.args),
                expr.span)


def max_variable(expr: Expr) -> int:
    """Largest variable index used, -1 for a constant expression."""
    if isinstance(expr, Var):
        return expr.index
    if isinstance(expr, Const):
        return -1
    if isinstance(expr, Unary):
        return max_variable(expr.arg)
    if isinstance(expr, Binary):
        return max(max_variable(expr.left), max_variable(expr.right))
    return max((max_variable(a) for a in expr.args), default=-1)
