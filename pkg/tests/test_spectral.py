import math
from fractions import Fraction

import numpy as np
import pytest

import guided_embedding as ge
from guided_embedding.errors import (
    DimensionMismatch,
    EigenvalueOutOfRange,
    NotPSD,
    NotSymmetric,
    SpectralRadiusExceeded,
)

from conftest import random_connected_graph

SQRT2_HALF = math.sqrt(2) / 2


def exact_coeff(k):
    """Rational oracle for the square-root series coefficient."""
    return Fraction(math.factorial(2 * k), 2 ** (2 * k) * math.factorial(k) ** 2 * (2 * k - 1))


def test_eig_sym_two_node_edge():
    basis = ge.eig_sym([[1.0, -1.0], [-1.0, 1.0]], "ascending")
    assert np.allclose(basis.eigenvalues, [0, 2])
    assert np.allclose(np.abs(basis.eigenvectors), SQRT2_HALF)
    # sign convention: largest-magnitude entry positive, ties at lowest index
    assert basis.eigenvectors[0, 0] > 0 and basis.eigenvectors[0, 1] > 0


def test_eig_sym_identity():
    basis = ge.eig_sym(np.eye(4))
    assert np.allclose(basis.eigenvalues, 1)
    for col in basis.eigenvectors.T:
        assert col[np.argmax(np.abs(col))] > 0


def test_eig_sym_reconstruction():
    rng = np.random.default_rng(0)
    m = rng.standard_normal((6, 6))
    m = (m + m.T) / 2
    basis = ge.eig_sym(m)
    rec = (basis.eigenvectors * basis.eigenvalues) @ basis.eigenvectors.T
    assert np.linalg.norm(rec - m) / np.linalg.norm(m) < 1e-8
    assert np.linalg.norm(basis.eigenvectors.T @ basis.eigenvectors - np.eye(6)) < 1e-8


def test_eig_sym_rejects_asymmetric():
    with pytest.raises(NotSymmetric):
        ge.eig_sym([[0.0, 1.0], [0.5, 0.0]])


def test_eig_sym_descending():
    basis = ge.eig_sym(np.diag([3.0, 1.0, 2.0]), "descending")
    assert np.allclose(basis.eigenvalues, [3, 2, 1])


def test_gft_of_basis_vector():
    basis = ge.eig_sym(ge.normalize(random_connected_graph(np.random.default_rng(1))).laplacian)
    u = basis.eigenvectors
    xhat = ge.gft(u, u[:, 2])
    expected = np.zeros(u.shape[0])
    expected[2] = 1.0
    assert np.allclose(xhat, expected, atol=1e-10)


def test_gft_zero():
    u = np.eye(5)
    assert np.array_equal(ge.gft(u, np.zeros(5)), np.zeros(5))


def test_gft_round_trip():
    rng = np.random.default_rng(2)
    ops = ge.normalize(random_connected_graph(rng, n_min=10, n_max=10))
    u = ge.eig_sym(ops.laplacian).eigenvectors
    for _ in range(20):
        x = rng.standard_normal(10)
        assert np.max(np.abs(ge.igft(u, ge.gft(u, x)) - x)) < 1e-10


def test_gft_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        ge.gft(np.eye(3), np.ones(4))
    with pytest.raises(DimensionMismatch):
        ge.igft(np.eye(3), np.ones(4))


def test_sqrt_psd_two_node_analytic():
    s = ge.sqrt_psd_exact([[1.0, -1.0], [-1.0, 1.0]])
    assert np.allclose(s, SQRT2_HALF * np.array([[1, -1], [-1, 1]]))


def test_sqrt_psd_identity_and_zero():
    assert np.allclose(ge.sqrt_psd_exact(np.eye(3)), np.eye(3))
    assert np.allclose(ge.sqrt_psd_exact(np.zeros((3, 3))), 0)


def test_sqrt_psd_rejects_negative():
    with pytest.raises(NotPSD):
        ge.sqrt_psd_exact(np.diag([1.0, -0.5]))


def test_sqrt_psd_squares_back():
    rng = np.random.default_rng(3)
    for _ in range(100):
        lap = ge.normalize(random_connected_graph(rng, n_max=30, n_min=4)).laplacian
        s = ge.sqrt_psd_exact(lap)
        assert np.linalg.norm(s @ s - lap) / np.linalg.norm(lap) < 1e-7


def test_taylor_coeff_first_values():
    assert ge.taylor_coeff(1) == 0.5
    assert ge.taylor_coeff(2) == 0.125
    assert ge.taylor_coeff(3) == 0.0625
    assert ge.taylor_coeff(4) == 5 / 128


def test_taylor_coeff_matches_rational_oracle():
    for k in range(1, 21):
        exact = float(exact_coeff(k))
        assert abs(ge.taylor_coeff(k) - exact) / exact < 1e-14


def test_taylor_coeff_positive_decreasing():
    values = [ge.taylor_coeff(k) for k in range(1, 31)]
    assert all(v > 0 for v in values)
    assert all(b < a for a, b in zip(values, values[1:]))


def test_sqrt_taylor_first_order():
    a = np.array([[0.0, 0.5], [0.5, 0.0]])
    assert np.allclose(ge.sqrt_taylor(a, 1), np.eye(2) - a / 2)


def test_sqrt_taylor_zero_matrix():
    for order in (1, 5, 20):
        assert np.allclose(ge.sqrt_taylor(np.zeros((3, 3)), order), np.eye(3))


def test_sqrt_taylor_rejects_large_radius():
    with pytest.raises(SpectralRadiusExceeded):
        ge.sqrt_taylor(np.array([[0.0, 1.5], [1.5, 0.0]]), 3)


def test_sqrt_taylor_two_node_bound_is_infinite():
    # spectrum {0, 2}: the remainder bound blows up at 0 by design
    a = np.array([[0.0, 1.0], [1.0, 0.0]])
    lap = np.eye(2) - a
    dist = np.linalg.norm(ge.sqrt_taylor(a, 25) - ge.sqrt_psd_exact(lap))
    bound = ge.taylor_error_bound(25, np.linalg.eigvalsh(lap))
    assert bound == np.inf and dist <= bound


def test_error_bound_zero_at_expansion_point():
    assert ge.taylor_error_bound(3, np.ones(5)) == 0.0


def test_error_bound_k1_lambda2():
    # |f''(y)|/2 on y in [1,2] peaks at y=1: bound 1/8
    assert ge.taylor_error_bound(1, [2.0]) == pytest.approx(1 / 8, rel=1e-12)


def test_error_bound_infinite_below_eps():
    assert ge.taylor_error_bound(1, [0.0, 2.0]) == np.inf


def test_error_bound_rejects_out_of_range():
    with pytest.raises(EigenvalueOutOfRange):
        ge.taylor_error_bound(1, [2.5])


def test_error_bound_dominates_on_gapped_spectra():
    # synthetic symmetric operators whose spectrum stays away from 0 keep
    # the bound finite; the truncation error must sit below it and shrink
    rng = np.random.default_rng(4)
    for _ in range(10):
        n = 12
        q, _ = np.linalg.qr(rng.standard_normal((n, n)))
        a = (q * rng.uniform(-0.9, 0.9, n)) @ q.T
        a = (a + a.T) / 2
        lap = np.eye(n) - a
        lam = np.linalg.eigvalsh(lap)
        exact = ge.sqrt_psd_exact(lap)
        prev = np.inf
        for order in (1, 2, 5, 10, 20):
            err = np.linalg.norm(exact - ge.sqrt_taylor(a, order))
            assert err <= ge.taylor_error_bound(order, lam)
            assert err <= prev + 1e-12
            prev = err


def test_criterion_bound_trivial_cases():
    assert ge.criterion_error_bound(0.0, np.ones(5)) == 0.0
    assert ge.criterion_error_bound(0.3, np.zeros(5)) == 0.0


def test_criterion_bound_identity_weights():
    assert ge.criterion_error_bound(0.1, np.ones(4)) == pytest.approx(0.02, rel=1e-12)


def test_taylor_bound_bundle():
    bound = ge.taylor_bound(2, [0.5, 1.0, 1.5], np.ones(3))
    assert bound.order == 2 and bound.d_k > 0
    assert bound.d_km == pytest.approx(bound.d_k**2 * np.sqrt(3), rel=1e-12)
