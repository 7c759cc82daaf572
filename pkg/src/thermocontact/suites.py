"""Seeded invariant sweeps shared by the ``verify`` command and the tests.

Each suite returns a mapping from residual name to the largest residual seen
over the sampled points.  Residual names end in ``_max_residual``.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .chart import DarbouxPoint, ScalarField, from_adapted, random_point, to_adapted
from .contact import (
    VectorField,
    bracket_table,
    contact_nondegeneracy,
    d_eta,
    d_eta_matrix,
    eta,
    horizontal_basis,
    reeb,
)
from .gauge import GaugeFactor, verify_gauge
from .structure import compatibility_check, inverse_metric_matrix, metric_G, phi_matrix

__all__ = [
    "sample_points",
    "default_gauges",
    "chart_suite",
    "contact_suite",
    "structure_suite",
    "gauge_suite",
    "run_all",
]


def sample_points(n: int, count: int, seed: int = 0) -> tuple[list[DarbouxPoint], np.random.Generator]:
    """``count`` points from ``[-2, -0.1] U [0.1, 2]`` and the generator used."""
    rng = np.random.default_rng(seed)
    return [random_point(rng, n) for _ in range(count)], rng


def default_gauges(n: int) -> list[str]:
    """The standard gauge set; ``q2`` falls back to ``q1`` when ``n = 1``."""
    q = "q2" if n >= 2 else "q1"
    return ["1", "1/p1", "exp(q1)", f"exp(0.5*p1+{q})"]


def _update(acc: dict, name: str, value: float):
    acc[name] = max(acc.get(name, 0.0), float(value))


def chart_suite(points: Sequence[DarbouxPoint], rng: np.random.Generator) -> dict[str, float]:
    acc: dict[str, float] = {}
    for at in points:
        X = rng.normal(size=at.dim)
        back = from_adapted(*to_adapted(X, at), at).coord
        _update(acc, "adapted_roundtrip_max_residual", np.max(np.abs(back - X)))
        again = DarbouxPoint.from_dict(at.as_dict(), at.n).coords
        _update(acc, "point_roundtrip_max_residual", np.max(np.abs(again - at.coords)))
        dw = sum(ScalarField.coordinate(k, at.n).differential(at).coord[k] for k in range(at.dim))
        _update(acc, "coordinate_differential_max_residual", abs(dw - at.dim))
    return acc


def contact_suite(points: Sequence[DarbouxPoint], rng: np.random.Generator) -> dict[str, float]:
    acc: dict[str, float] = {}
    if not points:
        return acc
    n = points[0].n
    fields = [VectorField.reeb(n)] + [VectorField.P(a, n) for a in range(1, n + 1)] + \
        [VectorField.Q(a, n) for a in range(1, n + 1)]
    for at in points:
        xi = reeb(at).coord
        H = horizontal_basis(at)
        _update(acc, "eta_horizontal_max_residual", max(abs(eta(at, B)) for B in H))
        _update(acc, "eta_reeb_max_residual", abs(eta(at, xi) - 1.0))
        _update(acc, "deta_reeb_max_residual", np.max(np.abs(xi @ d_eta_matrix(n))))
        Y = rng.normal(size=at.dim)
        _update(acc, "deta_reeb_random_max_residual", abs(d_eta(at, xi, Y)))

        # [P^a, Q_b] = -delta^a_b xi; every other pair commutes.
        table = bracket_table(fields, at)
        expected = np.zeros_like(table)
        for a in range(n):
            expected[1 + a, 1 + n + a] = -xi
            expected[1 + n + a, 1 + a] = xi
        _update(acc, "bracket_max_residual", np.max(np.abs(table - expected)))
        _update(acc, "nondegeneracy_max_residual", abs(contact_nondegeneracy(at) - 0.25 ** n))
    return acc


def structure_suite(points: Sequence[DarbouxPoint], rng: np.random.Generator) -> dict[str, float]:
    acc: dict[str, float] = {}
    for at in points:
        dim = at.dim
        G = metric_G(at)
        F = phi_matrix(at).matrix
        xi = reeb(at).coord
        e = np.concatenate(([1.0], np.zeros(at.n), at.p))
        _update(acc, "phi_squared_max_residual", np.max(np.abs(F @ F - (np.eye(dim) - np.outer(xi, e)))))
        _update(acc, "phi_reeb_max_residual", np.max(np.abs(F @ xi)))
        _update(acc, "eta_phi_max_residual", np.max(np.abs(e @ F)))
        X, Y = rng.normal(size=dim), rng.normal(size=dim)
        _update(acc, "metric_compatibility_max_residual", compatibility_check(at, X, Y))
        _update(acc, "metric_symmetry_max_residual", G.asymmetry())
        Ginv = inverse_metric_matrix(at)
        _update(acc, "inverse_metric_max_residual", np.max(np.abs(G.matrix @ Ginv - np.eye(dim))))
        # Phi is an isometry up to sign: G(Phi X, Phi Y) = -G(X, Y) + eta(X) eta(Y).
        iso = F.T @ G.matrix @ F + G.matrix - np.outer(e, e)
        _update(acc, "phi_antiisometry_max_residual", np.max(np.abs(iso)))
        sig_ok = G.signature() == (at.n + 1, at.n)
        _update(acc, "signature_mismatch_max_residual", 0.0 if sig_ok else 1.0)
    return acc


def gauge_suite(points: Sequence[DarbouxPoint], omegas: Iterable[str]) -> dict[str, float]:
    acc: dict[str, float] = {}
    for src in omegas:
        factor = GaugeFactor(src, n=points[0].n) if points else None
        for at in points:
            for key, value in verify_gauge(at, factor).items():
                _update(acc, f"gauge[{src}].{key.removesuffix('_max')}_max_residual", value)
    return acc


def run_all(n: int, count: int, seed: int = 0, omegas: Sequence[str] | None = None) -> dict[str, dict]:
    """Every suite on one seeded sample; ``{suite: {residual: value}}``."""
    points, rng = sample_points(n, count, seed)
    return {
        "chart": chart_suite(points, rng),
        "contact": contact_suite(points, rng),
        "structure": structure_suite(points, rng),
        "gauge": gauge_suite(points, default_gauges(n) if omegas is None else omegas),
    }
