"""Darboux chart on the (2n+1)-dimensional thermodynamic phase space.

Coordinates are ordered ``(w, p_1..p_n, q^1..q^n)``.  Indices are 1-based in
every external name (``p1``, ``q1``) and 0-based in arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import dual
from .errors import DimensionError, EvaluationError

__all__ = [
    "DarbouxPoint",
    "TangentVector",
    "CotangentVector",
    "ScalarField",
    "coordinate_names",
    "to_adapted",
    "from_adapted",
    "differentiate",
    "finite_difference_gradient",
    "random_point",
    "as_vector",
]


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


def coordinate_names(n: int) -> list[str]:
    return ["w"] + [f"p{a}" for a in range(1, n + 1)] + [f"q{a}" for a in range(1, n + 1)]


@dataclass(frozen=True)
class DarbouxPoint:
    """A point ``(w, p, q)`` of the phase space."""

    w: float
    p: tuple
    q: tuple

    def __post_init__(self):
        p = tuple(float(v) for v in np.atleast_1d(self.p))
        q = tuple(float(v) for v in np.atleast_1d(self.q))
        if len(p) != len(q):
            raise DimensionError(f"len(p)={len(p)} but len(q)={len(q)}")
        if len(p) < 1:
            raise DimensionError("n must be >= 1")
        object.__setattr__(self, "w", float(self.w))
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        if not all(math.isfinite(v) for v in (self.w, *p, *q)):
            raise EvaluationError("non-finite coordinate", (self.w, *p, *q))

    @property
    def n(self) -> int:
        return len(self.p)

    @property
    def dim(self) -> int:
        return 2 * self.n + 1

    @property
    def coords(self) -> np.ndarray:
        return _frozen((self.w, *self.p, *self.q))

    @classmethod
    def from_coords(cls, coords: Sequence[float]) -> "DarbouxPoint":
        coords = np.asarray(coords, dtype=float).ravel()
        if coords.size % 2 != 1:
            raise DimensionError(f"expected 2n+1 coordinates, got {coords.size}")
        n = coords.size // 2
        return cls(coords[0], coords[1 : n + 1], coords[n + 1 :])

    @classmethod
    def from_dict(cls, values: dict, n: int) -> "DarbouxPoint":
        names = coordinate_names(n)
        extra = set(values) - set(names)
        if extra:
            raise DimensionError(f"unknown coordinates {sorted(extra)} for n={n}")
        missing = [k for k in names if k not in values]
        if missing:
            raise DimensionError(f"missing coordinates {missing}")
        return cls.from_coords([values[k] for k in names])

    def as_dict(self) -> dict:
        return dict(zip(coordinate_names(self.n), self.coords.tolist()))


def as_vector(X, dim: int, what: str = "vector") -> np.ndarray:
    """Components of a vector, covector or array-like, checked against ``dim``."""
    coord = X.coord if isinstance(X, (TangentVector, CotangentVector)) else X
    arr = np.asarray(coord, dtype=float).ravel()
    if arr.size != dim:
        raise DimensionError(f"{what} has {arr.size} components, expected {dim}")
    return arr


@dataclass(frozen=True)
class TangentVector:
    """Components on ``(d/dw, d/dp_a, d/dq^a)``."""

    coord: np.ndarray
    base: Optional[DarbouxPoint] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "coord", _frozen(np.ravel(self.coord)))
        if self.coord.size % 2 != 1:
            raise DimensionError(f"tangent vector needs 2n+1 components, got {self.coord.size}")
        if self.base is not None and self.base.dim != self.coord.size:
            raise DimensionError("tangent vector and base point differ in dimension")

    @property
    def n(self) -> int:
        return self.coord.size // 2

    def __add__(self, other):
        return TangentVector(self.coord + as_vector(other, self.coord.size), self.base)

    def __sub__(self, other):
        return TangentVector(self.coord - as_vector(other, self.coord.size), self.base)

    def __mul__(self, c):
        return TangentVector(self.coord * float(c), self.base)

    __rmul__ = __mul__

    def __neg__(self):
        return TangentVector(-self.coord, self.base)


@dataclass(frozen=True)
class CotangentVector:
    """Components on ``(dw, dp_a, dq^a)``."""

    coord: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coord", _frozen(np.ravel(self.coord)))
        if self.coord.size % 2 != 1:
            raise DimensionError(f"covector needs 2n+1 components, got {self.coord.size}")

    @property
    def n(self) -> int:
        return self.coord.size // 2

    def __call__(self, X) -> float:
        return float(self.coord @ as_vector(X, self.coord.size))

    def __add__(self, other):
        return CotangentVector(self.coord + as_vector(other, self.coord.size, "covector"))

    def __sub__(self, other):
        return CotangentVector(self.coord - as_vector(other, self.coord.size, "covector"))

    def __mul__(self, c):
        return CotangentVector(self.coord * float(c))

    __rmul__ = __mul__


def to_adapted(X, at: DarbouxPoint):
    """Split ``X`` on the adapted frame ``(xi, P^a, Q_a)``.

    Returns ``(X_xi, Xp, Xq)`` with ``X_xi = X_w + sum_a p_a X_q^a``.
    """
    n = at.n
    x = as_vector(X, at.dim)
    Xq = x[n + 1 :].copy()
    Xp = x[1 : n + 1].copy()
    X_xi = float(x[0] + np.dot(at.p, Xq))
    return X_xi, Xp, Xq


def from_adapted(X_xi: float, Xp, Xq, at: DarbouxPoint) -> TangentVector:
    """Inverse of :func:`to_adapted`."""
    n = at.n
    Xp = np.asarray(Xp, dtype=float).ravel()
    Xq = np.asarray(Xq, dtype=float).ravel()
    if Xp.size != n or Xq.size != n:
        raise DimensionError(f"adapted components must have length n={n}")
    w = float(X_xi) - float(np.dot(at.p, Xq))
    return TangentVector(np.concatenate(([w], Xp, Xq)), at)


class ScalarField:
    """A differentiable function on the phase space.

    ``func`` receives the coordinate list ``[w, p1.., q1..]`` and must be
    written with operations that accept :class:`~thermocontact.dual.Dual`
    entries (arithmetic plus ``dual.exp``/``dual.log``/``dual.sqrt``).
    """

    def __init__(self, func: Callable, name: str = "f"):
        self.func = func
        self.name = name

    def __repr__(self):
        return f"ScalarField({self.name!r})"

    def _call(self, coords, at):
        try:
            return self.func(coords)
        except EvaluationError:
            raise
        except (ValueError, ZeroDivisionError, OverflowError) as exc:
            raise EvaluationError(f"{self.name}: {exc}", at) from exc

    def value(self, at: DarbouxPoint) -> float:
        v = dual.primal(self._call(at.coords.tolist(), at))
        if not math.isfinite(v):
            raise EvaluationError(f"{self.name} is not finite", at)
        return v

    __call__ = value

    def differential(self, at: DarbouxPoint) -> CotangentVector:
        coords = at.coords.tolist()
        g = dual.gradient(lambda c: self._call(c, at), coords)
        if not np.all(np.isfinite(g)):
            raise EvaluationError(f"derivative of {self.name} is not finite", at)
        return CotangentVector(g)

    def hessian(self, at: DarbouxPoint) -> np.ndarray:
        H = dual.hessian(lambda c: self._call(c, at), at.coords.tolist())
        if not np.all(np.isfinite(H)):
            raise EvaluationError(f"second derivative of {self.name} is not finite", at)
        return H

    @classmethod
    def constant(cls, c: float) -> "ScalarField":
        c = float(c)
        return cls(lambda x: c + 0.0 * x[0], name=repr(c))

    @classmethod
    def coordinate(cls, index: int, n: int) -> "ScalarField":
        name = coordinate_names(n)[index]
        return cls(lambda x: x[index], name=name)


def differentiate(f: ScalarField, at: DarbouxPoint) -> CotangentVector:
    """Exact differential ``df`` at a point via dual numbers."""
    return f.differential(at)


def finite_difference_gradient(f: Callable[[DarbouxPoint], float], at: DarbouxPoint) -> np.ndarray:
    """Central differences with step ``1e-6 * max(1, |x_i|)``; a cross-check only."""
    x = np.array(at.coords)
    g = np.empty_like(x)
    for i in range(x.size):
        h = 1e-6 * max(1.0, abs(x[i]))
        xp, xm = x.copy(), x.copy()
        xp[i] += h
        xm[i] -= h
        g[i] = (f(DarbouxPoint.from_coords(xp)) - f(DarbouxPoint.from_coords(xm))) / (2 * h)
    return g


def random_point(rng: np.random.Generator, n: int, low: float = 0.1, high: float = 2.0) -> DarbouxPoint:
    """Coordinates uniform on ``[-high, -low] U [low, high]``.

    Keeping away from zero avoids accidental singularities of gauges such as
    ``1/p1``.
    """
    mag = rng.uniform(low, high, 2 * n + 1)
    sign = np.where(rng.random(2 * n + 1) < 0.5, -1.0, 1.0)
    return DarbouxPoint.from_coords(mag * sign)
