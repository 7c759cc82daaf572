"""Forward-mode automatic differentiation with (nestable) dual numbers.

A :class:`Dual` carries a primal part and one tangent part.  Either part may
itself be a :class:`Dual`, so wrapping a dual inside another one yields exact
higher-order mixed derivatives.  The newest perturbation is always the
outermost layer, and extraction peels layers from the outside in.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "Dual",
    "primal",
    "tangent",
    "exp",
    "log",
    "sqrt",
    "directional",
    "gradient",
    "hessian",
    "mixed_partial",
]


class Dual:
    """Number ``a + b*eps`` with ``eps**2 == 0``."""

    __slots__ = ("a", "b")

    def __init__(self, a, b=0.0):
        self.a = a
        self.b = b

    def __repr__(self):
        return f"Dual({self.a!r}, {self.b!r})"

    def __add__(self, other):
        if isinstance(other, Dual):
            return Dual(self.a + other.a, self.b + other.b)
        return Dual(self.a + other, self.b)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Dual):
            return Dual(self.a - other.a, self.b - other.b)
        return Dual(self.a - other, self.b)

    def __rsub__(self, other):
        return Dual(other - self.a, -self.b)

    def __neg__(self):
        return Dual(-self.a, -self.b)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, Dual):
            return Dual(self.a * other.a, self.a * other.b + self.b * other.a)
        return Dual(self.a * other, self.b * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Dual):
            if primal(other) == 0.0:
                raise ZeroDivisionError("division by a dual with zero primal part")
            return Dual(self.a / other.a, (self.b * other.a - self.a * other.b) / (other.a * other.a))
        return Dual(self.a / other, self.b / other)

    def __rtruediv__(self, other):
        if primal(self) == 0.0:
            raise ZeroDivisionError("division by a dual with zero primal part")
        return Dual(other / self.a, -other * self.b / (self.a * self.a))

    def __pow__(self, k):
        if isinstance(k, Dual):
            return exp(k * log(self))
        k = float(k)
        if k == 0.0:
            return Dual(self.a ** 0, self.b * 0.0)
        if k.is_integer():
            return Dual(self.a ** int(k), int(k) * self.a ** (int(k) - 1) * self.b)
        if primal(self) <= 0.0:
            raise ValueError("non-integer power of a non-positive base")
        return Dual(self.a ** k, k * self.a ** (k - 1.0) * self.b)

    def __rpow__(self, base):
        return exp(self * math.log(base))

    # ordering compares primal parts only
    def __lt__(self, other):
        return primal(self) < primal(other)

    def __le__(self, other):
        return primal(self) <= primal(other)

    def __gt__(self, other):
        return primal(self) > primal(other)

    def __ge__(self, other):
        return primal(self) >= primal(other)


def primal(x) -> float:
    """Innermost real value of a possibly nested dual."""
    while isinstance(x, Dual):
        x = x.a
    return float(x)


def tangent(x):
    """Outermost tangent part; zero for plain numbers."""
    return x.b if isinstance(x, Dual) else 0.0


def exp(x):
    if isinstance(x, Dual):
        ea = exp(x.a)
        return Dual(ea, ea * x.b)
    return math.exp(x)


def log(x):
    if isinstance(x, Dual):
        if primal(x) <= 0.0:
            raise ValueError("log of a non-positive value")
        return Dual(log(x.a), x.b / x.a)
    return math.log(x)


def sqrt(x):
    if isinstance(x, Dual):
        if primal(x) <= 0.0:
            raise ValueError("sqrt derivative undefined at non-positive values")
        r = sqrt(x.a)
        return Dual(r, x.b / (2.0 * r))
    return math.sqrt(x)


def _lift(x: Sequence, v: Sequence) -> list:
    return [Dual(xi, vi) for xi, vi in zip(x, v)]


def directional(f: Callable, x: Sequence, v: Sequence):
    """Derivative of ``f`` at ``x`` along ``v`` (one forward pass)."""
    return tangent(f(_lift(x, v)))


def mixed_partial(f: Callable, x: Sequence, directions: Sequence[Sequence]):
    """Mixed directional derivative ``D_{d1} D_{d2} ... f(x)``.

    Each direction adds one nesting level.  The returned object has the same
    type as the entries of ``x`` (float for float input, dual for dual input).
    """
    if not directions:
        return f(list(x))
    d, rest = directions[0], directions[1:]
    return directional(lambda y: mixed_partial(f, y, rest), x, d)


def gradient(f: Callable, x: Sequence) -> np.ndarray:
    x = list(x)
    m = len(x)
    out = []
    for i in range(m):
        e = [0.0] * m
        e[i] = 1.0
        out.append(directional(f, x, e))
    return _pack(out)


def hessian(f: Callable, x: Sequence) -> np.ndarray:
    """Symmetric Hessian from doubly nested duals (upper triangle evaluated)."""
    x = list(x)
    m = len(x)
    basis = np.eye(m)
    H = [[None] * m for _ in range(m)]
    for i in range(m):
        for j in range(i, m):
            H[i][j] = H[j][i] = mixed_partial(f, x, [basis[i], basis[j]])
    return _pack(H)


def _pack(values):
    arr = np.array(values, dtype=object)
    if all(not isinstance(v, Dual) for v in arr.flat):
        return arr.astype(float)
    return arr
