"""Scalar fields: evaluation and exact gradients of parsed expressions."""
from dataclasses import dataclass, field as dc_field
from typing import Optional

import numpy as np

from src.errors import DimensionError, ExprDomainError
from src.expr import dual
from src.expr.nodes import (Binary, Call, Const, Unary, Var, substitute,
                            to_text)
from src.expr.parser import parse_expression

_BINARY = {'+': dual.add, '-': dual.sub, '*': dual.mul, '/': dual.div,
           '^': dual.power}
_CALLS = {'exp': dual.exp, 'sin': dual.sin, 'cos': dual.cos,
          'abs': dual.absolute, 'sgn': dual.sgn, 'sigmoid': dual.sigmoid,
          'sqrt': dual.sqrt, 'log': dual.log, 'max': dual.maximum,
          'min': dual.minimum}


class _Evaluator:
    """Walks a tree once for a batch of points."""

    def __init__(self, text, points, with_grad):
        self.text = text
        self.points = points
        self.with_grad = with_grad
        self.count, self.dimension = points.shape

    def _fail(self, node, message, bad):
        row = int(np.argmax(bad))
        snippet = None
        if self.text and node.span[1] > node.span[0]:
            raw = self.text.encode('utf-8')[node.span[0]:node.span[1]]
            snippet = raw.decode('utf-8', errors='replace')
        raise ExprDomainError(
            message, span=node.span, snippet=snippet,
            node_index=row if self.count > 1 else None)

    def run(self, node):
        if isinstance(node, Const):
            return dual.Dual(np.full(self.count, node.value))
        if isinstance(node, Var):
            grad = None
            if self.with_grad:
                grad = np.zeros((self.count, self.dimension))
                grad[:, node.index] = 1.0
            return dual.Dual(self.points[:, node.index].astype(float), grad)
        if isinstance(node, Unary):
            return dual.neg(self.run(node.arg))
        if isinstance(node, Binary):
            left = self.run(node.left)
            right = self.run(node.right)
            self._check_binary(node, left, right)
            with np.errstate(divide='ignore', invalid='ignore',
                             over='ignore'):
                return _BINARY[node.op](left, right)
        args = [self.run(a) for a in node.args]
        self._check_call(node, args)
        return _CALLS[node.func](*args)

    def _check_binary(self, node, left, right):
        if node.op == '/':
            bad = right.value == 0
            if bad.any():
                self._fail(node, "division by zero", bad)
        elif node.op == '^':
            base, exponent = left.value, right.value
            whole = exponent == np.round(exponent)
            bad = (base < 0) & ~whole
            if right.grad is not None:
                bad |= base <= 0
            if bad.any():
                self._fail(node, "power of a negative base", bad)
            bad = (base == 0) & (exponent < 0)
            if bad.any():
                self._fail(node, "zero raised to a negative power", bad)
            if self.with_grad and left.grad is not None:
                bad = (base == 0) & (exponent > 0) & (exponent < 1)
                if bad.any():
                    self._fail(node, "derivative undefined at zero base",
                               bad)

    def _check_call(self, node, args):
        if node.func == 'sqrt':
            bad = args[0].value < 0
            if self.with_grad and args[0].grad is not None:
                bad |= args[0].value == 0
            if bad.any():
                self._fail(node, "sqrt outside its domain", bad)
        elif node.func == 'log':
            bad = args[0].value <= 0
            if bad.any():
                self._fail(node, "log of a non-positive value", bad)


@dataclass(frozen=True)
class ScalarField:
    """A differentiable function R^n -> R given by an expression tree."""
    dimension: int
    body: object = dc_field(compare=False)
    name: Optional[str] = None
    text: str = ''

    @classmethod
    def from_text(cls, text, dimension, name=None):
        if dimension < 1:
            raise DimensionError("dimension must be positive")
        return cls(dimension, parse_expression(text, dimension), name, text)

    def _points(self, points):
        points = np.asarray(points, dtype=float)
        if points.ndim == 1:
            points = points[None, :]
        if points.shape[-1] != self.dimension:
            raise DimensionError(
                f"expected points of dimension {self.dimension}, got "
                f"{points.shape[-1]}")
        return points

    def evaluate_batch(self, points):
        points = self._points(points)
        return _Evaluator(self.text, points, False).run(self.body).value

    def value_and_gradient_batch(self, points):
        points = self._points(points)
        out = _Evaluator(self.text, points, True).run(self.body)
        grad = out.grad
        if grad is None:
            grad = np.zeros(points.shape)
        return out.value, grad

    def evaluate(self, p):
        return float(self.evaluate_batch(p)[0])

    def gradient(self, p):
        return self.value_and_gradient_batch(p)[1][0]

    def restrict(self, assignments):
        """Same-dimension field with some coordinates frozen to constants."""
        body = substitute(self.body, assignments)
        label = ",".join(f"x{k}={v:g}" for k, v in sorted(assignments.items()))
        name = f"{self.name or 'field'}|{label}"
        return ScalarField(self.dimension, body, name, to_text(body))

    def describe(self):
        return {'name': self.name, 'dimension': self.dimension,
                'expression': self.text}


def evaluate(field: ScalarField, p) -> float:
    return field.evaluate(p)


def gradient(field: ScalarField, p) -> np.ndarray:
    return field.gradient(p)


def finite_difference_check(field: ScalarField, p, h: float) -> float:
    """Largest coordinate error of the dual gradient vs central differences.

    Errors are relative to max(||grad||_inf, 1).
    """
    p = np.asarray(p, dtype=float)
    n = field.dimension
    steps = np.eye(n) * h
    probes = np.vstack([p + steps, p - steps])
    values = field.evaluate_batch(probes)
    central = (values[:n] - values[n:]) / (2.0 * h)
    exact = field.gradient(p)
    scale = max(float(np.max(np.abs(exact))), 1.0)
    return float(np.max(np.abs(exact - central)) / scale)
