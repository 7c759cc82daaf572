"""Thermodynamic charts, constitutive models and Hessian (pullback) metrics.

Closed systems (n = 2) share the physical coordinates ``(u, s, v, T, p)``.

* energy chart:  ``w = u,  p = (-T, p_mech),        q = (s, v)``
* entropy chart: ``w = s,  p = (-1/T, -p_mech/T),   q = (u, v)``

so that ``eta_u = du - T ds + p dv`` and ``eta_s = ds - du/T - (p/T) dv``.
The Weinhold metric is ``Hess u(s, v)`` and the Ruppeiner metric is
``+Hess s(u, v)`` (negative definite for stable systems).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import dual
from .chart import DarbouxPoint, TangentVector
from .contact import eta_covector, horizontal_basis, reeb
from .errors import ChartSingularityError, DimensionError, DomainError, EvaluationError
from .gauge import GaugedStructure, GaugeFactor, transform
from .structure import MetricAtPoint, metric_G, phi_matrix, sym

__all__ = [
    "PHYSICAL_NAMES",
    "Representation",
    "ENERGY",
    "ENTROPY",
    "FundamentalRelation",
    "ThermoModel",
    "ProcessCurve",
    "quadratic_relation",
    "model_quadratic",
    "model_ideal_gas",
    "model_van_der_waals",
    "model_from_config",
    "legendre_embed",
    "embedding_jacobian",
    "pullback_metric",
    "pullback_of_G",
    "eta_physical",
    "contact_metric_physical",
    "representation_change",
    "conformal_check",
    "process_length",
    "gauged_metric",
]

PHYSICAL_NAMES = ("u", "s", "v", "T", "p")


@dataclass(frozen=True)
class Representation:
    """A map between physical variables and Darboux slots.

    ``to_darboux`` takes the physical coordinate list (dual-compatible) and
    returns ``[w, p1.., q1..]``; ``aliases`` expose physical names as
    functions of Darboux coordinates, for use in expressions.
    """

    name: str
    n: int
    physical_names: tuple
    to_darboux: Callable = field(repr=False)
    from_darboux: Callable = field(repr=False)
    aliases: dict = field(default_factory=dict, repr=False)
    singular: Optional[Callable] = field(default=None, repr=False)

    def _check(self, phys):
        phys = np.asarray(phys, dtype=float).ravel()
        if phys.size != len(self.physical_names):
            raise DimensionError(f"{self.name} chart expects {len(self.physical_names)} physical values")
        if self.singular is not None and self.singular(phys):
            raise ChartSingularityError(f"{self.name} chart is singular", dict(zip(self.physical_names, phys)))
        return phys

    def point(self, phys: Sequence[float]) -> DarbouxPoint:
        phys = self._check(phys)
        return DarbouxPoint.from_coords([float(c) for c in self.to_darboux(list(phys))])

    def physical(self, at: DarbouxPoint) -> np.ndarray:
        return np.array([float(c) for c in self.from_darboux(list(at.coords))])

    def jacobian(self, phys: Sequence[float]) -> np.ndarray:
        """``d(darboux) / d(physical)``, rows indexed by Darboux slots."""
        phys = list(self._check(phys))
        m = len(phys)
        cols = []
        for j in range(m):
            e = [0.0] * m
            e[j] = 1.0
            lifted = [dual.Dual(x, d) for x, d in zip(phys, e)]
            cols.append([float(dual.tangent(c)) for c in self.to_darboux(lifted)])
        return np.array(cols).T

    def vector_to_physical(self, phys, X) -> np.ndarray:
        return np.linalg.solve(self.jacobian(phys), np.asarray(getattr(X, "coord", X), dtype=float))

    def vector_to_darboux(self, phys, X) -> np.ndarray:
        return self.jacobian(phys) @ np.asarray(X, dtype=float)

    def covector_to_physical(self, phys, alpha) -> np.ndarray:
        return self.jacobian(phys).T @ np.asarray(getattr(alpha, "coord", alpha), dtype=float)

    def metric_to_physical(self, phys, M) -> np.ndarray:
        J = self.jacobian(phys)
        return J.T @ np.asarray(getattr(M, "matrix", M), dtype=float) @ J

    def endo_to_physical(self, phys, F) -> np.ndarray:
        J = self.jacobian(phys)
        return np.linalg.solve(J, np.asarray(getattr(F, "matrix", F), dtype=float) @ J)


def _energy_to(x):
    u, s, v, T, p = x
    return [u, -T, p, s, v]


def _energy_from(c):
    w, p1, p2, q1, q2 = c
    return [w, q1, q2, -p1, p2]


def _entropy_to(x):
    u, s, v, T, p = x
    return [s, -1.0 / T, -p / T, u, v]


def _entropy_from(c):
    w, p1, p2, q1, q2 = c
    return [q1, w, q2, -1.0 / p1, p2 / p1]


ENERGY = Representation(
    "energy", 2, PHYSICAL_NAMES, _energy_to, _energy_from,
    aliases={"u": lambda c: c[0], "s": lambda c: c[3], "v": lambda c: c[4],
             "T": lambda c: -c[1], "p": lambda c: c[2]},
)

ENTROPY = Representation(
    "entropy", 2, PHYSICAL_NAMES, _entropy_to, _entropy_from,
    aliases={"s": lambda c: c[0], "u": lambda c: c[3], "v": lambda c: c[4],
             "T": lambda c: -1.0 / c[1], "p": lambda c: c[2] / c[1]},
    singular=lambda x: x[3] == 0.0,
)


class FundamentalRelation:
    """A potential ``f(q^1..q^n)`` with exact derivatives to any order.

    ``func`` takes the list of ``n`` variables and must be dual-compatible.
    """

    def __init__(self, func: Callable, arity: int, domain: Optional[Callable] = None,
                 name: str = "f", variables: Optional[Sequence[str]] = None):
        self.func = func
        self.arity = int(arity)
        self.domain = domain
        self.name = name
        self.variables = tuple(variables or (f"q{a}" for a in range(1, self.arity + 1)))

    def __repr__(self):
        return f"FundamentalRelation({self.name!r}, arity={self.arity})"

    def _args(self, q) -> list:
        q = [float(v) for v in np.ravel(q)]
        if len(q) != self.arity:
            raise DimensionError(f"{self.name} takes {self.arity} variables, got {len(q)}")
        if self.domain is not None and not self.domain(q):
            raise DomainError(f"{self.name} evaluated outside its domain", dict(zip(self.variables, q)))
        return q

    def _finite(self, arr, what, q):
        arr = np.asarray(arr, dtype=float)
        if not np.all(np.isfinite(arr)):
            raise EvaluationError(f"{what} of {self.name} is not finite", dict(zip(self.variables, q)))
        return arr

    def __call__(self, q) -> float:
        q = self._args(q)
        return float(self._finite(dual.primal(self.func(q)), "value", q))

    def gradient(self, q) -> np.ndarray:
        q = self._args(q)
        return self._finite(dual.gradient(self.func, q), "gradient", q)

    def hessian(self, q) -> np.ndarray:
        q = self._args(q)
        return self._finite(dual.hessian(self.func, q), "hessian", q)

    def third(self, q) -> np.ndarray:
        """Third derivative tensor ``f_{ijk}``."""
        q = self._args(q)
        n = self.arity
        E = np.eye(n)
        out = np.empty((n, n, n))
        for i in range(n):
            for j in range(i, n):
                for k in range(j, n):
                    val = dual.primal(dual.mixed_partial(self.func, q, [E[i], E[j], E[k]]))
                    for idx in {(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)}:
                        out[idx] = val
        return self._finite(out, "third derivative", q)


@dataclass(frozen=True)
class ThermoModel:
    """Energy and entropy forms of one closed-system model."""

    name: str
    energy: FundamentalRelation
    entropy: FundamentalRelation
    temperature: Callable = field(repr=False)  # (u, v) -> T
    pressure: Callable = field(repr=False)  # (u, v) -> p
    energy_at: Callable = field(repr=False)  # (T, v) -> u
    params: dict = field(default_factory=dict)
    constants: dict = field(default_factory=dict)

    def state(self, T: float, v: float) -> tuple[float, float]:
        """Entropy-representation variables ``(u, v)`` for given ``(T, v)``."""
        return float(self.energy_at(T, v)), float(v)


def quadratic_relation(n: int) -> FundamentalRelation:
    return FundamentalRelation(lambda q: 0.5 * sum(x * x for x in q), n, name="quadratic")


def model_quadratic() -> ThermoModel:
    """Toy ``u = (s^2 + v^2)/2``; the entropy form uses the ``s > 0`` branch."""
    energy = FundamentalRelation(lambda q: 0.5 * (q[0] * q[0] + q[1] * q[1]), 2, name="quadratic",
                                 variables=("s", "v"))
    entropy = FundamentalRelation(lambda x: dual.sqrt(2.0 * x[0] - x[1] * x[1]), 2,
                                  domain=lambda x: 2.0 * x[0] - x[1] ** 2 > 0.0,
                                  name="quadratic-entropy", variables=("u", "v"))

    def temperature(u, v):
        return math.sqrt(2.0 * u - v * v)

    return ThermoModel("quadratic", energy, entropy, temperature,
                       pressure=lambda u, v: -v,
                       energy_at=lambda T, v: 0.5 * (T * T + v * v))


def model_ideal_gas(c_v: float = 1.0, R_gas: float = 1.0, u0: float = 1.0, v0: float = 1.0,
                    s0: float = 0.0) -> ThermoModel:
    """``s(u, v) = s0 + c_v ln(u/u0) + R ln(v/v0)`` and its inverse."""
    if min(c_v, R_gas, u0, v0) <= 0:
        raise DomainError("ideal gas parameters must be positive")

    def energy(q):
        s, v = q
        return u0 * dual.exp((s - s0 - R_gas * dual.log(v / v0)) / c_v)

    def entropy(x):
        u, v = x
        return s0 + c_v * dual.log(u / u0) + R_gas * dual.log(v / v0)

    return ThermoModel(
        "ideal",
        FundamentalRelation(energy, 2, domain=lambda q: q[1] > 0, name="ideal-energy", variables=("s", "v")),
        FundamentalRelation(entropy, 2, domain=lambda x: x[0] > 0 and x[1] > 0, name="ideal-entropy",
                            variables=("u", "v")),
        temperature=lambda u, v: u / c_v,
        pressure=lambda u, v: R_gas * u / (c_v * v),
        energy_at=lambda T, v: c_v * T,
        params={"cv": c_v, "R": R_gas, "u0": u0, "v0": v0, "s0": s0},
    )


def model_van_der_waals(a: float, b: float, c_v: float, R_gas: float = 1.0) -> ThermoModel:
    """``s(u, v) = c_v ln(u + a/v) + R ln(v - b)`` (entropy constant zero).

    Critical constants: ``v_c = 3b``, ``T_c = 8a / (27 R b)``, ``p_c = a / (27 b^2)``.
    """
    if min(a, b, c_v, R_gas) <= 0:
        raise DomainError("van der Waals parameters must be positive")

    def energy(q):
        s, v = q
        return dual.exp((s - R_gas * dual.log(v - b)) / c_v) - a / v

    def entropy(x):
        u, v = x
        return c_v * dual.log(u + a / v) + R_gas * dual.log(v - b)

    def temperature(u, v):
        return (u + a / v) / c_v

    return ThermoModel(
        "vdw",
        FundamentalRelation(energy, 2, domain=lambda q: q[1] > b, name="vdw-energy", variables=("s", "v")),
        FundamentalRelation(entropy, 2, domain=lambda x: x[1] > b and x[0] + a / x[1] > 0,
                            name="vdw-entropy", variables=("u", "v")),
        temperature=temperature,
        pressure=lambda u, v: R_gas * temperature(u, v) / (v - b) - a / (v * v),
        energy_at=lambda T, v: c_v * T - a / v,
        params={"a": a, "b": b, "cv": c_v, "R": R_gas},
        constants={"v_c": 3.0 * b, "T_c": 8.0 * a / (27.0 * R_gas * b), "p_c": a / (27.0 * b * b)},
    )


def model_from_config(config: dict) -> ThermoModel:
    """Build a model from ``{"model": "vdw", "a": .., "b": .., "cv": ..}`` style input."""
    cfg = dict(config)
    kind = cfg.pop("model", None)
    try:
        if kind == "vdw":
            return model_van_der_waals(float(cfg.pop("a")), float(cfg.pop("b")), float(cfg.pop("cv")),
                                       float(cfg.pop("R", 1.0)))
        if kind == "ideal":
            kw = {"c_v": cfg.pop("cv", 1.0), "R_gas": cfg.pop("R", 1.0), "u0": cfg.pop("u0", 1.0),
                  "v0": cfg.pop("v0", 1.0), "s0": cfg.pop("s0", 0.0)}
            return model_ideal_gas(**{k: float(v) for k, v in kw.items()})
        if kind == "quadratic":
            return model_quadratic()
    except KeyError as exc:
        raise ValueError(f"model {kind!r} is missing parameter {exc.args[0]!r}") from None
    if kind is None:
        raise ValueError("model configuration needs a 'model' key")
    raise ValueError(f"unknown model {kind!r}; expected vdw, ideal or quadratic")


def legendre_embed(f: FundamentalRelation, q) -> DarbouxPoint:
    """Point of the Legendre submanifold ``w = f(q), p_a = -df/dq^a``."""
    return DarbouxPoint(f(q), -f.gradient(q), np.ravel(q))


def embedding_jacobian(f: FundamentalRelation, q) -> np.ndarray:
    """``(2n+1) x n`` Jacobian of ``q -> (f(q), -grad f(q), q)``."""
    n = f.arity
    return np.vstack([f.gradient(q)[None, :], -f.hessian(q), np.eye(n)])


def pullback_metric(f: FundamentalRelation, q) -> np.ndarray:
    """Hessian metric ``d^2 f`` (Weinhold for ``u(s,v)``, Ruppeiner for ``s(u,v)``)."""
    return f.hessian(q)


def pullback_of_G(f: FundamentalRelation, q) -> np.ndarray:
    """``J^T G J`` along the Legendre embedding; equals :func:`pullback_metric`."""
    J = embedding_jacobian(f, q)
    return J.T @ metric_G(legendre_embed(f, q)).matrix @ J


def _phys_basis(i):
    e = np.zeros(5)
    e[i] = 1.0
    return e


def eta_physical(rep: Representation, phys) -> np.ndarray:
    """Contact form of ``rep`` in physical components ``(du, ds, dv, dT, dp)``."""
    return rep.covector_to_physical(phys, eta_covector(rep.point(phys)))


def contact_metric_physical(rep: Representation, phys) -> MetricAtPoint:
    """``G_u`` or ``G_s`` written directly in physical coordinates."""
    u, s, v, T, p = rep._check(phys)
    du, ds, dv, dT, dp = (_phys_basis(i) for i in range(5))
    e = eta_physical(rep, phys)
    if rep.name == "energy":
        M = np.outer(e, e) + sym(ds, dT) - sym(dv, dp)
    elif rep.name == "entropy":
        d_invT = -dT / (T * T)
        d_pT = dp / T - p * dT / (T * T)
        M = np.outer(e, e) + sym(du, d_invT) + sym(dv, d_pT)
    else:
        M = rep.metric_to_physical(phys, metric_G(rep.point(phys)))
    return MetricAtPoint(2, M)


def representation_change(phys) -> tuple[GaugedStructure, dict]:
    """Energy-to-entropy change as the gauge ``Omega = 1/p1 = -1/T``.

    Returns the gauged structure (energy chart) and residuals against the
    independently built entropy-representation objects, all in physical
    coordinates.
    """
    phys = ENERGY._check(phys)
    T = phys[3]
    if T == 0.0:
        raise ChartSingularityError("T = 0 is outside both charts", dict(zip(PHYSICAL_NAMES, phys)))
    x_u = ENERGY.point(phys)
    gs = transform(x_u, GaugeFactor("1/p1", n=2))

    x_s = ENTROPY.point(phys)
    G_s = contact_metric_physical(ENTROPY, phys).matrix
    G_u = contact_metric_physical(ENERGY, phys).matrix
    Gp_phys = ENERGY.metric_to_physical(phys, gs.G_prime)
    xi_prime = ENERGY.vector_to_physical(phys, gs.xi_prime)
    xi_s = ENTROPY.vector_to_physical(phys, reeb(x_s))
    phi_prime = ENERGY.endo_to_physical(phys, gs.phi_prime)
    phi_s = ENTROPY.endo_to_physical(phys, phi_matrix(x_s))
    phi_u = ENERGY.endo_to_physical(phys, phi_matrix(x_u))

    H = np.column_stack([ENERGY.vector_to_physical(phys, b) for b in horizontal_basis(x_u)])
    eta_u = eta_physical(ENERGY, phys)
    eta_s = eta_physical(ENTROPY, phys)
    report = {
        "xi_prime_vs_d_ds": float(np.max(np.abs(xi_prime - _phys_basis(1)))),
        "xi_prime_vs_xi_s": float(np.max(np.abs(xi_prime - xi_s))),
        "phi_prime_vs_phi_s": float(np.max(np.abs(phi_prime - phi_s))),
        "G_prime_vs_G_s": float(np.max(np.abs(Gp_phys - G_s))),
        "restricted_G_s_vs_G_u": float(np.max(np.abs(H.T @ G_s @ H + (H.T @ G_u @ H) / T))),
        "restricted_phi_u_vs_phi_s": float(np.max(np.abs((phi_u - phi_s) @ H))),
        "eta_s_vs_eta_u": float(np.max(np.abs(eta_s - eta_u / (-T)))),
    }
    return gs, report


def conformal_check(f_energy: FundamentalRelation, f_entropy: FundamentalRelation, state) -> float:
    """``max |g^R + g^W / T|`` after moving ``g^R`` to the energy variables.

    ``state`` holds the energy-representation variables ``(s, v, ...)``.
    """
    q = [float(v) for v in np.ravel(state)]
    u = f_energy(q)
    grad = f_energy.gradient(q)
    T = grad[0]
    if abs(T) <= 1e-300:
        raise ChartSingularityError("temperature vanishes", dict(zip(f_energy.variables, q)))
    x = [u] + q[1:]
    s_back = f_entropy(x)
    if abs(f_energy([s_back] + q[1:]) - u) > 1e-9:
        raise DomainError("entropy and energy relations are not inverse", dict(zip(f_energy.variables, q)))
    gW = f_energy.hessian(q)
    gR = f_entropy.hessian(x)
    K = np.eye(len(q))
    K[0, :] = grad
    transported = K.T @ gR @ K
    return float(np.max(np.abs(transported + gW / T)))


@dataclass(frozen=True)
class ProcessCurve:
    """A parametrised curve ``t -> coords`` on ``[t0, t1]``.

    ``position`` must be dual-compatible in ``t``; the velocity oracle uses a
    dual perturbation unless ``velocity`` is given.  ``breakpoints`` mark
    parameter values where the velocity may jump.
    """

    t0: float
    t1: float
    position: Callable = field(repr=False)
    velocity: Optional[Callable] = field(default=None, repr=False)
    breakpoints: tuple = ()

    def point(self, t: float) -> DarbouxPoint:
        return DarbouxPoint.from_coords([dual.primal(c) for c in self.position(t)])

    def tangent(self, t: float) -> TangentVector:
        if self.velocity is not None:
            return TangentVector(np.asarray(self.velocity(t), dtype=float))
        return TangentVector([float(dual.tangent(c)) for c in self.position(dual.Dual(float(t), 1.0))])

    @classmethod
    def polyline(cls, points: Sequence[Sequence[float]], times: Optional[Sequence[float]] = None):
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2 or len(pts) < 2:
            raise DimensionError("a polyline needs at least two points")
        ts = np.arange(len(pts), dtype=float) if times is None else np.asarray(times, dtype=float)
        if ts.shape != (len(pts),) or np.any(np.diff(ts) <= 0):
            raise ValueError("polyline times must be strictly increasing, one per point")

        def segment(t):
            return min(max(int(np.searchsorted(ts, t, side="right")) - 1, 0), len(ts) - 2)

        def position(t):
            k = segment(dual.primal(t))
            lam = (t - ts[k]) / (ts[k + 1] - ts[k])
            return [pts[k][i] + lam * (pts[k + 1][i] - pts[k][i]) for i in range(pts.shape[1])]

        def velocity(t):
            k = segment(t)
            return (pts[k + 1] - pts[k]) / (ts[k + 1] - ts[k])

        return cls(float(ts[0]), float(ts[-1]), position, velocity, tuple(float(t) for t in ts[1:-1]))


def gauged_metric(omega) -> Callable[[DarbouxPoint], np.ndarray]:
    """Metric selector returning the primed metric ``G'`` of a gauge."""
    return lambda at: transform(at, omega).G_prime.matrix


def process_length(curve: ProcessCurve, metric: Optional[Callable] = None, steps: int = 100,
                   null_tol: float = 1e-14) -> tuple[float, list[int]]:
    """Composite-midpoint length ``int sqrt|G(v, v)| dt`` and per-step signs.

    ``metric`` maps a :class:`DarbouxPoint` to a coordinate matrix and
    defaults to the contact metric ``G``.  With breakpoints, each smooth
    piece gets ``steps`` midpoint cells.
    """
    if steps < 2:
        raise ValueError("steps must be >= 2")
    metric = metric or (lambda at: metric_G(at).matrix)
    knots = [curve.t0, *curve.breakpoints, curve.t1]
    total = 0.0
    signs = []
    for a, b in zip(knots[:-1], knots[1:]):
        h = (b - a) / steps
        for k in range(steps):
            t = a + (k + 0.5) * h
            at = curve.point(t)
            vel = curve.tangent(t).coord
            q = float(vel @ metric(at) @ vel)
            total += math.sqrt(abs(q)) * h
            scale = max(1.0, float(vel @ vel))
            signs.append(0 if abs(q) <= null_tol * scale else (1 if q > 0 else -1))
    return total, signs
