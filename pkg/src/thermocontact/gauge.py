"""Conformal gauge transformations ``eta -> Omega * eta``.

Given a non-vanishing scalar field ``Omega`` the primed structure is::

    zeta   = -1/(2 Omega) Phi[G^-1(dOmega)]
    eta'   = Omega eta
    xi'    = (xi + zeta) / Omega
    Phi'   = Phi + 1/(2 Omega) eta (x) [G^-1(dOmega) - xi(Omega) xi]
    deta'  = Omega deta + dOmega ^ eta
    G'     = eta' (x) eta' - deta' o (Phi' (x) I)

``G'`` is always assembled from the last (structural) line.  The collected
closed form in :func:`closed_form_Gprime` is an independent second route.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .chart import CotangentVector, DarbouxPoint, ScalarField, TangentVector
from .contact import d_eta_matrix, eta_covector, horizontal_basis, reeb
from .errors import GaugeSingularityError
from .structure import EndoAtPoint, MetricAtPoint, inverse_metric_matrix, metric_G, phi_matrix, sym

__all__ = [
    "SINGULAR_THRESHOLD",
    "GaugeFactor",
    "GaugedStructure",
    "zeta",
    "transform",
    "closed_form_Gprime",
    "d_eta_prime_matrix",
    "verify_gauge",
    "reeb_curvature_witness",
]

SINGULAR_THRESHOLD = 1e-12


class GaugeFactor:
    """A scaling field ``Omega`` that must not vanish where it is used.

    Accepts a :class:`ScalarField`, a dual-compatible callable on the
    coordinate list, a number, or expression text (``"1/p1"``) together
    with ``n``.
    """

    def __init__(self, omega: Union[ScalarField, Callable, float, str], n: int | None = None,
                 check_nonvanishing: bool = True):
        if isinstance(omega, str):
            from .exprlang import compile_field

            if n is None:
                raise ValueError("n is required to compile an expression gauge factor")
            omega = compile_field(omega, n)
        elif isinstance(omega, (int, float)):
            omega = ScalarField.constant(omega)
        elif not isinstance(omega, ScalarField):
            omega = ScalarField(omega, name=getattr(omega, "__name__", "Omega"))
        self.field = omega
        self.check_nonvanishing = check_nonvanishing

    def __repr__(self):
        return f"GaugeFactor({self.field.name!r})"

    def value(self, at: DarbouxPoint) -> float:
        v = self.field.value(at)
        if self.check_nonvanishing and abs(v) <= SINGULAR_THRESHOLD:
            raise GaugeSingularityError(f"gauge factor {self.field.name} vanishes (|Omega|={abs(v):.3g})", at)
        return v

    def differential(self, at: DarbouxPoint) -> CotangentVector:
        return self.field.differential(at)


def _as_factor(omega, n) -> GaugeFactor:
    return omega if isinstance(omega, GaugeFactor) else GaugeFactor(omega, n)


@dataclass(frozen=True)
class GaugedStructure:
    """Primed structure evaluated at one point."""

    at: DarbouxPoint
    omega: float
    d_omega: CotangentVector
    zeta: TangentVector
    eta_prime: CotangentVector
    xi_prime: TangentVector
    phi_prime: EndoAtPoint
    d_eta_prime: np.ndarray
    G_prime: MetricAtPoint

    @property
    def xi_omega(self) -> float:
        """``xi(Omega)``, the derivative of the factor along the Reeb field."""
        return float(self.d_omega.coord[0])

    def z(self) -> CotangentVector:
        """``z = G(zeta, .)``."""
        return CotangentVector(metric_G(self.at).matrix @ self.zeta.coord)


def _zeta(at, Om, dOm):
    v = inverse_metric_matrix(at) @ dOm
    return -(phi_matrix(at).matrix @ v) / (2.0 * Om)


def zeta(at: DarbouxPoint, omega) -> TangentVector:
    """Horizontal tilt of the primed Reeb field; ``dOmega(zeta) = 0``."""
    factor = _as_factor(omega, at.n)
    Om = factor.value(at)
    return TangentVector(_zeta(at, Om, factor.differential(at).coord), at)


def d_eta_prime_matrix(at: DarbouxPoint, Om: float, dOm: np.ndarray) -> np.ndarray:
    """``Omega deta + dOmega ^ eta`` with the 1/2 wedge convention."""
    e = eta_covector(at).coord
    return Om * d_eta_matrix(at.n) + 0.5 * (np.outer(dOm, e) - np.outer(e, dOm))


def transform(at: DarbouxPoint, omega) -> GaugedStructure:
    factor = _as_factor(omega, at.n)
    Om = factor.value(at)
    dOm = factor.differential(at).coord
    e = eta_covector(at).coord
    xi = reeb(at).coord

    z = _zeta(at, Om, dOm)
    v = inverse_metric_matrix(at) @ dOm - dOm[0] * xi
    Phi_p = phi_matrix(at).matrix + np.outer(v, e) / (2.0 * Om)
    D_p = d_eta_prime_matrix(at, Om, dOm)
    e_p = Om * e
    G_p = np.outer(e_p, e_p) - Phi_p.T @ D_p
    return GaugedStructure(
        at=at,
        omega=Om,
        d_omega=CotangentVector(dOm),
        zeta=TangentVector(z, at),
        eta_prime=CotangentVector(e_p),
        xi_prime=TangentVector((xi + z) / Om, at),
        phi_prime=EndoAtPoint(at.n, Phi_p),
        d_eta_prime=D_p,
        G_prime=MetricAtPoint(at.n, G_p),
    )


def closed_form_Gprime(at: DarbouxPoint, omega) -> MetricAtPoint:
    """``Omega [G - 2 eta (x)s z] + Omega [Omega - 1 + G(zeta,zeta)] eta (x) eta``."""
    factor = _as_factor(omega, at.n)
    Om = factor.value(at)
    dOm = factor.differential(at).coord
    G = metric_G(at).matrix
    e = eta_covector(at).coord
    z_vec = _zeta(at, Om, dOm)
    z = G @ z_vec
    norm = float(z_vec @ G @ z_vec)
    M = Om * (G - 2.0 * sym(e, z)) + Om * (Om - 1.0 + norm) * np.outer(e, e)
    return MetricAtPoint(at.n, M)


def reeb_curvature_witness(at: DarbouxPoint, omega) -> float:
    """``max_i |deta'(xi, e_i)|``: nonzero when Omega varies along xi."""
    factor = _as_factor(omega, at.n)
    D_p = d_eta_prime_matrix(at, factor.value(at), factor.differential(at).coord)
    return float(np.max(np.abs(reeb(at).coord @ D_p)))


def verify_gauge(at: DarbouxPoint, omega) -> dict[str, float]:
    """Named residuals of every identity the primed structure must satisfy."""
    gs = transform(at, omega)
    n, dim = at.n, at.dim
    Om, dOm = gs.omega, gs.d_omega.coord
    G = metric_G(at).matrix
    Gp = gs.G_prime.matrix
    D = d_eta_matrix(n)
    Phi = phi_matrix(at).matrix
    Phip = gs.phi_prime.matrix
    e = eta_covector(at).coord
    xp = gs.xi_prime.coord
    zt = gs.zeta.coord
    basis = np.eye(dim)
    H = np.column_stack([b.coord for b in horizontal_basis(at)])

    domega_identity = dOm - 2.0 * Om * (zt @ D) - dOm[0] * e
    horiz_pairs = H.T @ Gp @ H - Om * (H.T @ G @ H)
    null = [abs(H[:, i] @ Gp @ H[:, i]) for i in range(2 * n)]
    phi_sq = Phip @ Phip - (np.eye(dim) - np.outer(xp, gs.eta_prime.coord))

    return {
        "eta_prime_xi_prime": abs(float(gs.eta_prime.coord @ xp) - 1.0),
        "deta_prime_xi_prime_max": float(np.max(np.abs(xp @ gs.d_eta_prime @ basis))),
        "domega_zeta": abs(float(dOm @ zt)),
        "eta_zeta": abs(float(e @ zt)),
        "domega_identity_max": float(np.max(np.abs(domega_identity))),
        "conformal_horizontal_max": float(np.max(np.abs(horiz_pairs))),
        "phi_horizontal_max": float(np.max(np.abs((Phip - Phi) @ H))),
        "phi_prime_xi_prime": float(np.max(np.abs(Phip @ xp))),
        "phi_prime_squared_max": float(np.max(np.abs(phi_sq))),
        "null_directions_max": float(max(null)),
        "G_prime_xi_prime_norm": abs(float(xp @ Gp @ xp) - 1.0),
        "G_prime_xi_prime_horizontal_max": float(np.max(np.abs(xp @ Gp @ H))),
        "closed_form_max": float(np.max(np.abs(closed_form_Gprime(at, omega).matrix - Gp))),
    }
