import numpy as np
import pytest

from thermocontact.chart import DarbouxPoint, ScalarField, random_point
from thermocontact.contact import (
    ContactChart,
    VectorField,
    bracket_table,
    contact_nondegeneracy,
    d_eta,
    eta,
    frame_matrix,
    horizontal_basis,
    lie_bracket,
    reeb,
    split,
)
from thermocontact.errors import DimensionError


def test_chart_dimension():
    assert ContactChart(3).dim == 7
    with pytest.raises(DimensionError):
        ContactChart(0)


def test_eta_examples():
    at = DarbouxPoint(0.0, [-2.0], [1.0])
    assert eta(at, reeb(at)) == 1.0
    assert all(eta(at, B) == 0.0 for B in horizontal_basis(at))
    assert eta(at, [1.0, 0.0, 1.0]) == -1.0


def test_reeb_and_basis():
    at = DarbouxPoint(0.5, [-2.0], [1.0])
    assert reeb(at).coord.tolist() == [1.0, 0.0, 0.0]
    P, Q = horizontal_basis(at)
    assert P.coord.tolist() == [0.0, 1.0, 0.0]
    assert Q.coord.tolist() == [2.0, 0.0, 1.0]
    assert d_eta(at, reeb(at), P) == 0.0


def test_basis_rank(rng):
    for n in (1, 2, 3):
        at = random_point(rng, n)
        B = np.vstack([b.coord for b in horizontal_basis(at)])
        assert np.linalg.matrix_rank(B) == 2 * n
        assert np.linalg.matrix_rank(frame_matrix(at)) == 2 * n + 1


def test_d_eta_values(rng):
    at = random_point(rng, 2)
    P1, P2, Q1, Q2 = horizontal_basis(at)
    assert d_eta(at, P1, Q1) == 0.5
    assert d_eta(at, Q1, P1) == -0.5
    assert d_eta(at, P1, Q2) == 0.0
    for _ in range(20):
        X, Y = rng.normal(size=5), rng.normal(size=5)
        assert d_eta(at, X, X) == 0.0
        assert d_eta(at, X, Y) == -d_eta(at, Y, X)
        assert abs(d_eta(at, reeb(at), Y)) <= 1e-15


def test_split_examples():
    at = DarbouxPoint(0.0, [-2.0], [1.0])
    v, h = split(at, reeb(at))
    assert v.coord.tolist() == [1.0, 0.0, 0.0] and not np.any(h.coord)
    Q = horizontal_basis(at)[1]
    v, h = split(at, Q)
    assert not np.any(v.coord) and h.coord.tolist() == Q.coord.tolist()
    v, h = split(at, [0.0, 0.0, 1.0])
    assert v.coord.tolist() == [-2.0, 0.0, 0.0]
    assert h.coord.tolist() == Q.coord.tolist()


def test_lie_brackets(rng):
    n = 2
    at = random_point(rng, n)
    xi = reeb(at).coord
    for a in (1, 2):
        for b in (1, 2):
            br = lie_bracket(VectorField.P(a, n), VectorField.Q(b, n), at).coord
            np.testing.assert_array_equal(br, -xi if a == b else 0 * xi)
            assert not np.any(lie_bracket(VectorField.P(a, n), VectorField.P(b, n), at).coord)
    assert not np.any(lie_bracket(VectorField.Q(1, n), VectorField.Q(2, n), at).coord)


def test_bracket_table_matches_pairwise(rng):
    n = 2
    at = random_point(rng, n)
    # a non-constant field makes the comparison meaningful
    W = VectorField([ScalarField(lambda x, k=k: x[k] * x[(k + 1) % 5]) for k in range(5)])
    fields = [W, VectorField.P(1, n), VectorField.Q(2, n)]
    table = bracket_table(fields, at)
    for i, X in enumerate(fields):
        for j, Y in enumerate(fields):
            np.testing.assert_allclose(table[i, j], lie_bracket(X, Y, at).coord, atol=1e-15)


def test_bracket_dimension_mismatch():
    with pytest.raises(DimensionError):
        lie_bracket(VectorField.P(1, 1), VectorField.P(1, 2), DarbouxPoint(0, [1], [1]))


def test_nondegeneracy(rng):
    assert contact_nondegeneracy(DarbouxPoint(0, [0.3], [1])) == pytest.approx(0.25, abs=1e-15)
    assert contact_nondegeneracy(random_point(rng, 2)) == pytest.approx(1 / 16, abs=1e-15)
    vals = [contact_nondegeneracy(random_point(rng, 3)) for _ in range(100)]
    assert max(vals) - min(vals) <= 1e-14
