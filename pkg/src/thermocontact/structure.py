"""Para-Sasakian data on the phase space: the metric G, its inverse and Phi.

All matrices are in the coordinate basis ordered ``(w, p_a, q^a)``.  The
symmetric product carries a factor 1/2, so ``G(P^a, Q_b) = -1/2 delta``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chart import CotangentVector, DarbouxPoint, TangentVector, as_vector
from .contact import d_eta, eta, eta_covector, horizontal_basis, reeb
from .errors import DimensionError

__all__ = [
    "MetricAtPoint",
    "EndoAtPoint",
    "sym",
    "metric_G",
    "metric_apply",
    "lower",
    "phi",
    "phi_matrix",
    "inverse_metric",
    "inverse_metric_matrix",
    "compatibility_check",
]


def sym(a, b) -> np.ndarray:
    """Matrix of the symmetric product ``a (x)s b = 1/2 (a(x)b + b(x)a)``."""
    a = np.asarray(getattr(a, "coord", a), dtype=float)
    b = np.asarray(getattr(b, "coord", b), dtype=float)
    return 0.5 * (np.outer(a, b) + np.outer(b, a))


@dataclass(frozen=True)
class MetricAtPoint:
    """A symmetric bilinear form at a point, as a coordinate matrix."""

    n: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.shape != (2 * self.n + 1, 2 * self.n + 1):
            raise DimensionError(f"metric matrix has shape {m.shape}, expected {(2 * self.n + 1,) * 2}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def __call__(self, X, Y) -> float:
        return metric_apply(self, X, Y)

    def asymmetry(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.T)))

    def signature(self, tol: float = 1e-12) -> tuple[int, int]:
        """Counts of (positive, negative) eigenvalues."""
        ev = np.linalg.eigvalsh(0.5 * (self.matrix + self.matrix.T))
        scale = max(1.0, float(np.max(np.abs(ev))))
        return int(np.sum(ev > tol * scale)), int(np.sum(ev < -tol * scale))


@dataclass(frozen=True)
class EndoAtPoint:
    """A linear map of the tangent space; ``matrix @ X`` gives the image."""

    n: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.shape != (2 * self.n + 1, 2 * self.n + 1):
            raise DimensionError(f"endomorphism has shape {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def __call__(self, X) -> TangentVector:
        return TangentVector(self.matrix @ as_vector(X, 2 * self.n + 1))

    def rank(self, tol: float = 1e-12) -> int:
        return int(np.linalg.matrix_rank(self.matrix, tol=tol))


def _pq_sym(n: int) -> np.ndarray:
    S = np.zeros((2 * n + 1, 2 * n + 1))
    for a in range(n):
        S[1 + a, n + 1 + a] = S[n + 1 + a, 1 + a] = 0.5
    return S


def metric_G(at: DarbouxPoint) -> MetricAtPoint:
    """``G = eta (x) eta - sum_a dp_a (x)s dq^a``."""
    e = eta_covector(at).coord
    return MetricAtPoint(at.n, np.outer(e, e) - _pq_sym(at.n))


def metric_apply(M: MetricAtPoint, X, Y) -> float:
    dim = 2 * M.n + 1
    return float(as_vector(X, dim) @ M.matrix @ as_vector(Y, dim))


def lower(at: DarbouxPoint, X) -> CotangentVector:
    """The covector ``G(X, .)``."""
    return CotangentVector(metric_G(at).matrix @ as_vector(X, at.dim))


def phi_matrix(at: DarbouxPoint) -> EndoAtPoint:
    """``Phi = dp_a (x) P^a - dq^a (x) Q_a``: kills xi, fixes P, negates Q."""
    n = at.n
    F = np.zeros((at.dim, at.dim))
    for a in range(n):
        F[1 + a, 1 + a] = 1.0
        # Phi(d/dq^a) = -Q_a = -d/dq^a + p_a d/dw
        F[n + 1 + a, n + 1 + a] = -1.0
        F[0, n + 1 + a] = at.p[a]
    return EndoAtPoint(n, F)


def phi(at: DarbouxPoint, X) -> TangentVector:
    return TangentVector(phi_matrix(at).matrix @ as_vector(X, at.dim), at)


def inverse_metric_matrix(at: DarbouxPoint) -> np.ndarray:
    """``G^-1 = xi (x) xi - 4 sum_a P^a (x)s Q_a`` as a coordinate matrix."""
    n = at.n
    basis = horizontal_basis(at)
    xi = reeb(at).coord
    Ginv = np.outer(xi, xi)
    for a in range(n):
        Ginv -= 4.0 * sym(basis[a], basis[n + a])
    return Ginv


def inverse_metric(at: DarbouxPoint, alpha) -> TangentVector:
    """Raise an index: ``xi alpha(xi) - 2 sum_a [P^a alpha(Q_a) + Q_a alpha(P^a)]``."""
    return TangentVector(inverse_metric_matrix(at) @ as_vector(alpha, at.dim, "covector"), at)


def compatibility_check(at: DarbouxPoint, X, Y) -> float:
    """``|G(X,Y) - eta(X) eta(Y) + deta(Phi X, Y)|``."""
    G = metric_G(at)
    return abs(G(X, Y) - eta(at, X) * eta(at, Y) + d_eta(at, phi(at, X), Y))

