import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st

from sparsephase.errors import DegenerateInput, RankDeficient, SingularMatrix
from sparsephase.numerics import (
    least_squares,
    polynomial_roots,
    smallest_right_singular_vectors,
    solve_square,
)


def _poly_from_roots(roots):
    # low-to-high coefficients
    return np.poly(roots)[::-1]


class TestSingularVectors:
    def test_diagonal(self):
        (v,) = smallest_right_singular_vectors(np.diag([3.0, 1.0]))
        assert abs(abs(v[1]) - 1) < 1e-15 and abs(v[0]) < 1e-15

    def test_identity(self):
        (v,) = smallest_right_singular_vectors(np.eye(3))
        assert np.linalg.norm(v) == pytest.approx(1)
        assert np.linalg.norm(np.eye(3) @ v) == pytest.approx(1)

    def test_hankel_of_exponential_sum(self):
        rng = np.random.default_rng(0)
        nodes = np.exp(-1j * rng.uniform(-3, 3, 4))
        coeffs = rng.normal(size=4) + 1j * rng.normal(size=4)
        samples = (nodes[None, :] ** np.arange(28)[:, None]) @ coeffs
        H = scipy.linalg.hankel(samples[:20], samples[19:28])
        v1, v2 = smallest_right_singular_vectors(H, 2)
        assert np.linalg.norm(H @ v1) <= 1e-8
        assert abs(np.vdot(v1, v2)) <= 1e-8

    def test_ordering_and_orthogonality(self):
        rng = np.random.default_rng(1)
        A = rng.normal(size=(12, 6))
        s = np.linalg.svd(A, compute_uv=False)
        v1, v2 = smallest_right_singular_vectors(A, 2)
        assert np.linalg.norm(A @ v1) == pytest.approx(s[-1])
        assert np.linalg.norm(A @ v2) == pytest.approx(s[-2])
        assert abs(np.vdot(v1, v2)) <= 1e-8

    def test_wide_matrix_has_null_vector(self):
        A = np.random.default_rng(2).normal(size=(3, 5))
        v1, v2 = smallest_right_singular_vectors(A, 2)
        assert np.linalg.norm(A @ v1) <= 1e-12 and np.linalg.norm(A @ v2) <= 1e-12


class TestRoots:
    def test_quadratic(self):
        np.testing.assert_allclose(np.sort(polynomial_roots([-1, 0, 1]).real), [-1, 1])

    def test_linear(self):
        np.testing.assert_allclose(polynomial_roots([-2.5 + 1j, 1]), [2.5 - 1j])

    def test_trailing_zeros_trimmed(self):
        np.testing.assert_allclose(polynomial_roots([-3, 1, 1e-20]), [3])

    def test_degenerate(self):
        with pytest.raises(DegenerateInput):
            polynomial_roots([0, 0, 0])
        with pytest.raises(DegenerateInput):
            polynomial_roots([4, 0])

    def test_unit_circle_degree_10(self):
        rng = np.random.default_rng(7)
        ang = np.sort(rng.uniform(-np.pi, np.pi, 10))
        roots = polynomial_roots(_poly_from_roots(np.exp(1j * ang)))
        np.testing.assert_allclose(np.sort(np.angle(roots)), ang, atol=1e-8)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(1, 30), st.integers(0, 2**32 - 1))
    def test_roundtrip_well_separated(self, deg, seed):
        rng = np.random.default_rng(seed)
        ang = np.sort(2 * np.pi * (np.arange(deg) + rng.uniform(0.2, 0.8, deg)) / deg - np.pi)
        true = np.exp(1j * ang)
        roots = polynomial_roots(_poly_from_roots(true))
        got = np.sort(np.angle(roots))
        assert np.max(np.abs(got - ang)) <= 1e-8
        coeffs = _poly_from_roots(true)
        residual = np.abs(np.polynomial.polynomial.polyval(roots, coeffs))
        assert np.all(residual <= 1e-8 * np.sum(np.abs(coeffs)))


class TestLeastSquares:
    def test_identity(self):
        b = np.array([1 + 2j, -3, 0.5j])
        x, r = least_squares(np.eye(3), b)
        np.testing.assert_allclose(x, b)
        assert r == pytest.approx(0, abs=1e-15)

    def test_mean(self):
        x, r = least_squares(np.array([[1.0], [1.0]]), np.array([1.0, 3.0]))
        assert x[0] == pytest.approx(2)
        assert r == pytest.approx(np.sqrt(2))

    def test_identity_preconditioner_is_exact(self):
        rng = np.random.default_rng(4)
        A = rng.normal(size=(9, 4)) + 1j * rng.normal(size=(9, 4))
        b = rng.normal(size=9) + 0j
        x1, r1 = least_squares(A, b)
        x2, r2 = least_squares(A, b, np.ones(9))
        np.testing.assert_array_equal(x1, x2)
        assert r1 == r2

    def test_weighted_matches_scaled_oracle(self):
        rng = np.random.default_rng(5)
        A, b, w = rng.normal(size=(10, 3)), rng.normal(size=10), rng.uniform(0.1, 1, 10)
        x, _ = least_squares(A, b, w)
        oracle = np.linalg.lstsq(w[:, None] * A, w * b, rcond=None)[0]
        np.testing.assert_allclose(x, oracle, atol=1e-12)

    def test_vandermonde_three_terms(self):
        h, taus = 0.3, np.array([-1.7, 0.0, 1.7])
        gammas = np.array([1 - 2j, 5.0, 1 + 2j])
        k = np.arange(30)
        V = np.exp(-1j * h * np.outer(k, taus))
        x, _ = least_squares(V, V @ gammas)
        np.testing.assert_allclose(x, gammas, atol=1e-9)

    def test_rank_deficient(self):
        with pytest.raises(RankDeficient):
            least_squares(np.array([[1.0, 1.0], [2.0, 2.0], [3.0, 3.0]]), np.ones(3))


class TestSolveSquare:
    def test_scalar(self):
        np.testing.assert_allclose(solve_square([[2.0]], [4.0]), [2.0])

    def test_identity(self):
        np.testing.assert_allclose(solve_square(np.eye(2), [1j, 1]), [1j, 1])

    def test_singular(self):
        with pytest.raises(SingularMatrix):
            solve_square([[1.0, 2.0], [2.0, 4.0]], [1.0, 1.0])

    def test_prony_hankel_annihilates_nodes(self):
        rng = np.random.default_rng(9)
        t = np.sort(rng.uniform(0, 5, 2))
        c = rng.normal(size=2) + 1j * rng.normal(size=2)
        h = 0.4
        omega = h * np.arange(6)
        P = np.abs(np.exp(-1j * np.outer(omega, t)) @ c) ** 2
        H = scipy.linalg.hankel(P[:3], P[2:5])
        lam = solve_square(H, -P[3:6])
        poly = np.append(lam, 1.0)
        tau = t[1] - t[0]
        for node in np.exp(-1j * h * np.array([-tau, 0, tau])):
            assert abs(np.polynomial.polynomial.polyval(node, poly)) <= 1e-8
        assert np.linalg.norm(H @ lam + P[3:6]) <= 1e-10 * (np.linalg.norm(H) * np.linalg.norm(lam) + np.linalg.norm(P[3:6]))
