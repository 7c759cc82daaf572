import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from thermocontact.chart import DarbouxPoint, from_adapted, random_point
from thermocontact.contact import d_eta, eta, eta_covector, horizontal_basis, reeb
from thermocontact.errors import DimensionError
from thermocontact.structure import (
    EndoAtPoint,
    MetricAtPoint,
    compatibility_check,
    inverse_metric,
    inverse_metric_matrix,
    lower,
    metric_G,
    phi,
    phi_matrix,
)

coord = st.floats(min_value=-3, max_value=3, allow_nan=False)


def test_metric_n1_matrix():
    p = -1.7
    G = metric_G(DarbouxPoint(0.4, [p], [2.0])).matrix
    np.testing.assert_array_equal(G, [[1, 0, p], [0, 0, -0.5], [p, -0.5, p * p]])


def test_metric_values(rng):
    at = random_point(rng, 2)
    G = metric_G(at)
    xi = reeb(at)
    P1, P2, Q1, Q2 = horizontal_basis(at)
    assert G(xi, xi) == 1.0
    for B in (P1, P2, Q1, Q2):
        assert G(B, B) == pytest.approx(0.0, abs=1e-15)
        assert G(xi, B) == pytest.approx(0.0, abs=1e-15)
    assert G(P1, Q1) == pytest.approx(-0.5, abs=1e-15)
    assert G(P1, Q2) == pytest.approx(0.0, abs=1e-15)


def test_adapted_norm():
    at = DarbouxPoint(0.0, [0.7], [1.0])
    X = from_adapted(2.0, [1.0], [3.0], at)
    assert metric_G(at)(X, X) == pytest.approx(1.0, abs=1e-14)


def test_signature_and_symmetry(rng):
    for n in (1, 2, 3):
        G = metric_G(random_point(rng, n))
        assert G.asymmetry() == 0.0
        assert G.signature() == (n + 1, n)


def test_metric_validation():
    with pytest.raises(DimensionError):
        MetricAtPoint(1, np.zeros((2, 2)))
    with pytest.raises(DimensionError):
        EndoAtPoint(1, np.zeros((3, 2)))


def test_phi_examples(rng):
    at = random_point(rng, 1)
    P, Q = horizontal_basis(at)
    assert not np.any(phi(at, reeb(at)).coord)
    np.testing.assert_allclose(phi(at, P + Q).coord, (P - Q).coord, atol=1e-15)
    assert phi_matrix(at).rank() == 2
    for _ in range(20):
        X = rng.normal(size=3)
        lhs = phi(at, phi(at, X)).coord
        np.testing.assert_allclose(lhs, X - eta(at, X) * reeb(at).coord, atol=1e-14)


def test_inverse_metric_examples():
    p = 0.8
    at = DarbouxPoint(0.1, [p], [-1.0])
    np.testing.assert_array_equal(inverse_metric_matrix(at), [[1, 2 * p, 0], [2 * p, 0, -2], [0, -2, 0]])
    P, Q = horizontal_basis(at)
    np.testing.assert_allclose(inverse_metric(at, eta_covector(at)).coord, reeb(at).coord, atol=1e-15)
    np.testing.assert_allclose(inverse_metric(at, [0, 1, 0]).coord, (-2 * Q).coord, atol=1e-15)
    np.testing.assert_allclose(inverse_metric(at, [0, 0, 1]).coord, (-2 * P).coord, atol=1e-15)


def test_inverse_against_numpy(rng):
    for n in (1, 2, 3):
        at = random_point(rng, n)
        np.testing.assert_allclose(inverse_metric_matrix(at), np.linalg.inv(metric_G(at).matrix), atol=1e-12)
        alpha, Y = rng.normal(size=at.dim), rng.normal(size=at.dim)
        assert metric_G(at)(inverse_metric(at, alpha), Y) == pytest.approx(alpha @ Y, abs=1e-12)
        np.testing.assert_allclose(lower(at, inverse_metric(at, alpha)).coord, alpha, atol=1e-12)


def test_compatibility_examples():
    at = DarbouxPoint(0.0, [1.3], [0.2])
    xi = reeb(at)
    P, Q = horizontal_basis(at)
    assert compatibility_check(at, xi, xi) == 0.0
    assert compatibility_check(at, P, Q) == pytest.approx(0.0, abs=1e-15)


def test_compatibility_sweep(rng):
    worst = 0.0
    for n in (1, 2, 3):
        for _ in range(500):
            at = random_point(rng, n)
            X, Y = rng.normal(size=at.dim), rng.normal(size=at.dim)
            worst = max(worst, compatibility_check(at, X, Y))
    assert worst <= 1e-13


@given(arrays(float, 5, elements=coord), arrays(float, 4, elements=coord))
def test_defining_property_on_horizontal(c, coeffs):
    at = DarbouxPoint.from_coords(c)
    H = horizontal_basis(at)
    U = sum((a * B for a, B in zip(coeffs[:2], H[:2])), H[2] * coeffs[2])
    V = H[3] * coeffs[3] + H[0]
    assert -d_eta(at, phi(at, U), V) == pytest.approx(metric_G(at)(U, V), abs=1e-12)
