"""Vectorized forward-mode dual numbers.

A ``Dual`` carries values for a batch of N points and, optionally, the
gradient of each value with respect to the n input coordinates. A missing
gradient (``None``) means the quantity is constant in every coordinate.
"""
import numpy as np
from scipy.special import expit


class Dual:
    __slots__ = ('value', 'grad')

    def __init__(self, value, grad=None):
        self.value = value
        self.grad = grad

    def scaled(self, factor):
        """Gradient multiplied row-wise by ``factor`` (None stays None)."""
        if self.grad is None:
            return None
        return self.grad * factor[:, None]


def _sum(*grads):
    present = [g for g in grads if g is not None]
    if not present:
        return None
    total = present[0]
    for g in present[1:]:
        total = total + g
    return total


def add(a, b):
    return Dual(a.value + b.value, _sum(a.grad, b.grad))


def sub(a, b):
    return Dual(a.value - b.value, _sum(a.grad, neg(b).grad))


def neg(a):
    return Dual(-a.value, None if a.grad is None else -a.grad)


def mul(a, b):
    return Dual(a.value * b.value, _sum(a.scaled(b.value), b.scaled(a.value)))


def div(a, b):
    value = a.value / b.value
    inv = 1.0 / b.value
    return Dual(value, _sum(a.scaled(inv), b.scaled(-value * inv)))


def power(a, b):
    if b.grad is None:
        exponent = b.value
        value = np.power(a.value, exponent)
        if a.grad is None:
            return Dual(value)
        with np.errstate(divide='ignore', invalid='ignore'):
            slope = np.where(exponent == 0, 0.0,
                             exponent * np.power(a.value, exponent - 1.0))
        return Dual(value, a.scaled(slope))
    log_a = np.log(a.value)
    value = np.exp(b.value * log_a)
    return Dual(value, _sum(a.scaled(value * b.value / a.value),
                            b.scaled(value * log_a)))


def exp(a):
    with np.errstate(over='ignore'):
        value = np.exp(a.value)
    return Dual(value, a.scaled(value))


def log(a):
    return Dual(np.log(a.value), a.scaled(1.0 / a.value))


def sin(a):
    return Dual(np.sin(a.value), a.scaled(np.cos(a.value)))


def cos(a):
    return Dual(np.cos(a.value), a.scaled(-np.sin(a.value)))


def sqrt(a):
    value = np.sqrt(a.value)
    if a.grad is None:
        return Dual(value)
    return Dual(value, a.scaled(0.5 / value))


def sigmoid(a):
    value = expit(a.value)
    return Dual(value, a.scaled(value * (1.0 - value)))


def absolute(a):
    # sign(0) == 0: the derivative at the kink is zero
    return Dual(np.abs(a.value), a.scaled(np.sign(a.value)))


def sgn(a):
    return Dual(np.sign(a.value))


def _select(a, b, prefer_a):
    """Gradient of a piecewise choice; ties keep only agreeing partials."""
    if a.grad is None and b.grad is None:
        return None
    shape = (a.value.shape[0], (a.grad if a.grad is not None
                                else b.grad).shape[1])
    ga = a.grad if a.grad is not None else np.zeros(shape)
    gb = b.grad if b.grad is not None else np.zeros(shape)
    tie = (a.value == b.value)[:, None]
    at_tie = np.where(ga == gb, ga, 0.0)
    return np.where(tie, at_tie, np.where(prefer_a[:, None], ga, gb))


def maximum(a, b):
    return Dual(np.maximum(a.value, b.value),
                _select(a, b, a.value > b.value))


def minimum(a, b):
    return Dual(np.minimum(a.value, b.value),
                _select(a, b, a.value < b.value))
