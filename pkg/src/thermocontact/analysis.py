"""Levi-Civita machinery for metric fields, plus diagnostics built on it.

Conventions: ``Gamma[k, i, j] = Gamma^k_{ij}``,
``R^r_{s m n} = d_m Gamma^r_{n s} - d_n Gamma^r_{m s}
+ Gamma^r_{m l} Gamma^l_{n s} - Gamma^r_{n l} Gamma^l_{m s}``,
``Ric_{s n} = R^r_{s r n}`` and ``R = g^{s n} Ric_{s n}``.  The unit
2-sphere has ``R = 2``.
"""

from __future__ import annotations

from typing import Callable, Optional, Sequence

import numpy as np

from . import dual
from .chart import DarbouxPoint
from .errors import EvaluationError
from .structure import metric_G, phi_matrix
from .thermo import FundamentalRelation, ThermoModel

__all__ = [
    "SingularMetricError",
    "MetricField",
    "hessian_metric_field",
    "contact_metric_field",
    "christoffel",
    "christoffel_derivative",
    "riemann",
    "ricci",
    "scalar_curvature",
    "reeb_covariant_diagnostic",
    "curvature_scan",
]


class SingularMetricError(EvaluationError):
    """The metric is not invertible at the queried point."""


def _tangent_array(values) -> np.ndarray:
    return np.vectorize(dual.tangent, otypes=[object])(np.asarray(values, dtype=object))


def _jet(g: Callable, x: list, dirs: Sequence) -> np.ndarray:
    """Mixed directional derivative of an array-valued function."""
    if not dirs:
        return np.asarray(g(x), dtype=object)
    d, rest = dirs[0], dirs[1:]
    lifted = [dual.Dual(xi, di) for xi, di in zip(x, d)]
    return _tangent_array(_jet(g, lifted, rest))


def _floats(arr) -> np.ndarray:
    return np.vectorize(dual.primal, otypes=[float])(np.asarray(arr, dtype=object))


class MetricField:
    """Metric components ``g_ij(x)`` on an ``m``-dimensional chart.

    ``g`` maps a coordinate list to an ``m x m`` array and must be
    dual-compatible unless both derivative oracles are supplied.
    ``dg(x)[k, i, j] = d_k g_ij`` and ``d2g(x)[k, l, i, j] = d_k d_l g_ij``.
    """

    def __init__(self, dim: int, g: Callable, dg: Optional[Callable] = None, d2g: Optional[Callable] = None,
                 name: str = "g"):
        self.dim = int(dim)
        self.g = g
        self._dg = dg
        self._d2g = d2g
        self.name = name

    def __repr__(self):
        return f"MetricField({self.name!r}, dim={self.dim})"

    def at(self, x) -> np.ndarray:
        return _floats(self.g(list(map(float, x))))

    def d(self, x) -> np.ndarray:
        x = list(map(float, x))
        if self._dg is not None:
            return np.asarray(self._dg(x), dtype=float)
        E = np.eye(self.dim)
        return np.stack([_floats(_jet(self.g, x, [E[k]])) for k in range(self.dim)])

    def d2(self, x) -> np.ndarray:
        x = list(map(float, x))
        if self._d2g is not None:
            return np.asarray(self._d2g(x), dtype=float)
        m = self.dim
        E = np.eye(m)
        out = np.empty((m, m, m, m))
        for k in range(m):
            for l in range(k, m):
                out[k, l] = out[l, k] = _floats(_jet(self.g, x, [E[k], E[l]]))
        return out

    def inverse(self, x) -> np.ndarray:
        g = self.at(x)
        cond = np.linalg.cond(g)
        if not np.isfinite(cond) or cond > 1e14:
            raise SingularMetricError(f"{self.name} is singular (condition number {cond:.3g})", list(x))
        return np.linalg.inv(g)

    def condition(self, x) -> float:
        return float(np.linalg.cond(self.at(x)))


def hessian_metric_field(f: FundamentalRelation) -> MetricField:
    """``g = Hess f`` as a metric field (derivatives by nested duals)."""

    def g(x):
        if f.domain is not None and not f.domain([dual.primal(v) for v in x]):
            raise EvaluationError(f"{f.name} evaluated outside its domain", [dual.primal(v) for v in x])
        return dual.hessian(f.func, x)

    return MetricField(f.arity, g, name=f"Hess {f.name}")


def contact_metric_field(n: int) -> MetricField:
    """The contact metric ``G`` on the Darboux chart with analytic derivatives.

    Entries are polynomial in ``p``: ``G_{w q_a} = p_a`` and
    ``G_{q_a q_b} = p_a p_b``.
    """
    m = 2 * n + 1

    def g(x):
        return metric_G(DarbouxPoint.from_coords(x)).matrix

    def dg(x):
        p = np.asarray(x[1 : n + 1])
        eta = np.concatenate(([1.0], np.zeros(n), p))
        out = np.zeros((m, m, m))
        for c in range(n):
            e = np.zeros(m)
            e[n + 1 + c] = 1.0
            out[1 + c] = np.outer(e, eta) + np.outer(eta, e)
        return out

    def d2g(x):
        out = np.zeros((m, m, m, m))
        for c in range(n):
            for d in range(n):
                ec = np.zeros(m)
                ed = np.zeros(m)
                ec[n + 1 + c] = 1.0
                ed[n + 1 + d] = 1.0
                out[1 + c, 1 + d] = np.outer(ec, ed) + np.outer(ed, ec)
        return out

    return MetricField(m, g, dg, d2g, name="G")


def _first_kind(dg: np.ndarray) -> np.ndarray:
    # T[l, i, j] = d_i g_lj + d_j g_li - d_l g_ij
    return np.einsum("ilj->lij", dg) + np.einsum("jli->lij", dg) - dg


def christoffel(g: MetricField, x) -> np.ndarray:
    """``Gamma^k_ij = 1/2 g^kl (d_i g_lj + d_j g_li - d_l g_ij)``."""
    return 0.5 * np.einsum("kl,lij->kij", g.inverse(x), _first_kind(g.d(x)))


def christoffel_derivative(g: MetricField, x) -> np.ndarray:
    """``dGamma[m, k, i, j] = d_m Gamma^k_ij``."""
    ginv = g.inverse(x)
    dg = g.d(x)
    d2g = g.d2(x)
    T = _first_kind(dg)
    dT = np.einsum("milj->mlij", d2g) + np.einsum("mjli->mlij", d2g) - d2g
    dginv = -np.einsum("ka,mab,bl->mkl", ginv, dg, ginv)
    return 0.5 * (np.einsum("mkl,lij->mkij", dginv, T) + np.einsum("kl,mlij->mkij", ginv, dT))


def riemann(g: MetricField, x) -> np.ndarray:
    """``Riem[r, s, m, n] = R^r_{s m n}``."""
    G = christoffel(g, x)
    dG = christoffel_derivative(g, x)
    return (
        np.einsum("mrns->rsmn", dG)
        - np.einsum("nrms->rsmn", dG)
        + np.einsum("rml,lns->rsmn", G, G)
        - np.einsum("rnl,lms->rsmn", G, G)
    )


def ricci(g: MetricField, x) -> np.ndarray:
    return np.einsum("rsrn->sn", riemann(g, x))


def scalar_curvature(g: MetricField, x) -> float:
    return float(np.einsum("sn,sn->", g.inverse(x), ricci(g, x)))


def reeb_covariant_diagnostic(at: DarbouxPoint) -> tuple[float, float]:
    """Fit ``c`` in ``nabla_X xi = c Phi X`` over the coordinate basis.

    ``xi = d/dw`` has constant components, so ``(nabla_X xi)^k = X^i Gamma^k_{i w}``.
    Returns ``(c, max residual)``.
    """
    Gam = christoffel(contact_metric_field(at.n), at.coords)
    nabla = Gam[:, :, 0]  # column i holds nabla_{e_i} xi
    Phi = phi_matrix(at).matrix
    c = float(np.sum(nabla * Phi) / np.sum(Phi * Phi))
    return c, float(np.max(np.abs(nabla - c * Phi)))


def curvature_scan(model: ThermoModel, samples: int = 50, eps: float = 1e-3, t_start: float = 1.5,
                   v: Optional[float] = None, T_c: Optional[float] = None,
                   spacing: str = "log") -> list[tuple[float, float]]:
    """Ruppeiner scalar curvature along an isochore approaching ``T_c``.

    Temperatures run from ``t_start * T_c`` down to ``(1 + eps) * T_c``;
    with ``spacing="log"`` the reduced temperature ``T/T_c - 1`` is
    geometrically spaced.  ``v`` and ``T_c`` default to the model's critical
    constants.
    """
    if samples < 2:
        raise ValueError("samples must be >= 2")
    v = model.constants["v_c"] if v is None else v
    T_c = model.constants["T_c"] if T_c is None else T_c
    if spacing == "log":
        reduced = np.geomspace(t_start - 1.0, eps, samples)
    elif spacing == "linear":
        reduced = np.linspace(t_start - 1.0, eps, samples)
    else:
        raise ValueError("spacing must be 'log' or 'linear'")
    field = hessian_metric_field(model.entropy)
    rows = []
    for r in reduced:
        T = T_c * (1.0 + r)
        rows.append((float(T), scalar_curvature(field, model.state(T, v))))
    return rows
