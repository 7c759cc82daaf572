"""Contact structure in Darboux form: eta = dw + sum_a p_a dq^a.

Two-forms follow the convention with a factor 1/2 in the wedge product, so
``deta(X, Y) = 1/2 sum_a [dp_a(X) dq^a(Y) - dp_a(Y) dq^a(X)]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .chart import (
    CotangentVector,
    DarbouxPoint,
    ScalarField,
    TangentVector,
    as_vector,
)
from .errors import DimensionError

__all__ = [
    "ContactChart",
    "VectorField",
    "eta",
    "eta_covector",
    "reeb",
    "horizontal_basis",
    "frame_matrix",
    "d_eta",
    "d_eta_matrix",
    "split",
    "lie_bracket",
    "bracket_table",
    "contact_nondegeneracy",
]


@dataclass(frozen=True)
class ContactChart:
    """Darboux chart of a phase space with ``n`` degrees of freedom."""

    n: int

    def __post_init__(self):
        if int(self.n) < 1:
            raise DimensionError("n must be >= 1")

    @property
    def dim(self) -> int:
        return 2 * self.n + 1


def eta_covector(at: DarbouxPoint) -> CotangentVector:
    return CotangentVector(np.concatenate(([1.0], np.zeros(at.n), at.p)))


def eta(at: DarbouxPoint, X) -> float:
    x = as_vector(X, at.dim)
    return float(x[0] + np.dot(at.p, x[at.n + 1 :]))


def reeb(at: DarbouxPoint) -> TangentVector:
    e = np.zeros(at.dim)
    e[0] = 1.0
    return TangentVector(e, at)


def horizontal_basis(at: DarbouxPoint) -> list[TangentVector]:
    """``[P^1..P^n, Q_1..Q_n]`` with ``P^a = d/dp_a``, ``Q_a = d/dq^a - p_a d/dw``."""
    n = at.n
    out = []
    for a in range(n):
        e = np.zeros(at.dim)
        e[1 + a] = 1.0
        out.append(TangentVector(e, at))
    for a in range(n):
        e = np.zeros(at.dim)
        e[n + 1 + a] = 1.0
        e[0] = -at.p[a]
        out.append(TangentVector(e, at))
    return out


def frame_matrix(at: DarbouxPoint) -> np.ndarray:
    """Columns are ``xi, P^1..P^n, Q_1..Q_n`` in coordinate components."""
    cols = [reeb(at).coord] + [B.coord for B in horizontal_basis(at)]
    return np.column_stack(cols)


def d_eta_matrix(n: int) -> np.ndarray:
    """Matrix ``D`` with ``deta(X, Y) = X @ D @ Y`` (point independent)."""
    D = np.zeros((2 * n + 1, 2 * n + 1))
    for a in range(n):
        D[1 + a, n + 1 + a] = 0.5
        D[n + 1 + a, 1 + a] = -0.5
    return D


def d_eta(at: DarbouxPoint, X, Y) -> float:
    n = at.n
    x = as_vector(X, at.dim)
    y = as_vector(Y, at.dim)
    xp, xq = x[1 : n + 1], x[n + 1 :]
    yp, yq = y[1 : n + 1], y[n + 1 :]
    return 0.5 * float(np.dot(xp, yq) - np.dot(yp, xq))


def split(at: DarbouxPoint, X) -> tuple[TangentVector, TangentVector]:
    """Vertical part ``eta(X) xi`` and horizontal remainder."""
    x = as_vector(X, at.dim)
    vertical = eta(at, x) * reeb(at).coord
    return TangentVector(vertical, at), TangentVector(x - vertical, at)


class VectorField:
    """Vector field given by ``2n+1`` scalar component fields."""

    def __init__(self, components: Sequence[ScalarField]):
        self.components = list(components)
        if len(self.components) % 2 != 1:
            raise DimensionError("a vector field needs 2n+1 components")

    @property
    def n(self) -> int:
        return len(self.components) // 2

    def at(self, point: DarbouxPoint) -> TangentVector:
        if point.dim != len(self.components):
            raise DimensionError("vector field and point differ in dimension")
        return TangentVector([c.value(point) for c in self.components], point)

    def jacobian(self, point: DarbouxPoint) -> np.ndarray:
        """Row ``k`` holds ``d(X^k)``."""
        return np.vstack([c.differential(point).coord for c in self.components])

    @classmethod
    def reeb(cls, n: int) -> "VectorField":
        comps = [ScalarField.constant(0.0) for _ in range(2 * n + 1)]
        comps[0] = ScalarField.constant(1.0)
        return cls(comps)

    @classmethod
    def P(cls, a: int, n: int) -> "VectorField":
        """``P^a`` for 1-based ``a``."""
        comps = [ScalarField.constant(0.0) for _ in range(2 * n + 1)]
        comps[a] = ScalarField.constant(1.0)
        return cls(comps)

    @classmethod
    def Q(cls, a: int, n: int) -> "VectorField":
        """``Q_a`` for 1-based ``a``."""
        comps = [ScalarField.constant(0.0) for _ in range(2 * n + 1)]
        comps[n + a] = ScalarField.constant(1.0)
        comps[0] = ScalarField(lambda x, i=a: -x[i], name=f"-p{a}")
        return cls(comps)


def lie_bracket(Xf: VectorField, Yf: VectorField, at: DarbouxPoint) -> TangentVector:
    """``[X, Y]^k = X^i d_i Y^k - Y^i d_i X^k`` evaluated at ``at``."""
    if Xf.n != Yf.n or Xf.n != at.n:
        raise DimensionError("vector fields and point differ in dimension")
    X, Y = Xf.at(at).coord, Yf.at(at).coord
    return TangentVector(Yf.jacobian(at) @ X - Xf.jacobian(at) @ Y, at)


def bracket_table(fields: Sequence[VectorField], at: DarbouxPoint) -> np.ndarray:
    """All pairwise brackets; ``out[i, j]`` holds ``[F_i, F_j]`` components.

    Each field's Jacobian is computed once, so this is much cheaper than
    calling :func:`lie_bracket` for every pair.
    """
    vals = [f.at(at).coord for f in fields]
    jacs = [f.jacobian(at) for f in fields]
    k = len(fields)
    out = np.zeros((k, k, at.dim))
    for i in range(k):
        for j in range(k):
            out[i, j] = jacs[j] @ vals[i] - jacs[i] @ vals[j]
    return out


def contact_nondegeneracy(at: DarbouxPoint) -> float:
    """Determinant of ``deta`` restricted to ``ker eta`` on the horizontal basis.

    Nonzero exactly when ``eta ^ (deta)^n != 0``; equals ``(1/4)^n``.
    """
    B = np.column_stack([b.coord for b in horizontal_basis(at)])
    return float(np.linalg.det(B.T @ d_eta_matrix(at.n) @ B))
