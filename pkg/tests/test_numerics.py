"""Tests for the complex linear-algebra and Gaussian-message kernels."""

import numpy as np
import pytest

from epturbo.numerics import (GaussianMsg, NonPositiveVarianceError,
                              SingularMatrixError, extrinsic_divide_arrays,
                              gaussian_divide, gaussian_product,
                              hermitian_solve)


def _gauss_eliminate(A, b):
    """Naive complex Gaussian elimination with partial pivoting (oracle)."""
    A = A.astype(complex).copy()
    b = b.astype(complex).copy()
    n = A.shape[0]
    for j in range(n):
        p = j + np.argmax(np.abs(A[j:, j]))
        A[[j, p]], b[[j, p]] = A[[p, j]], b[[p, j]]
        for i in range(j + 1, n):
            f = A[i, j] / A[j, j]
            A[i, j:] -= f * A[j, j:]
            b[i] -= f * b[j]
    x = np.zeros(n, dtype=complex)
    for j in range(n - 1, -1, -1):
        x[j] = (b[j] - A[j, j + 1:] @ x[j + 1:]) / A[j, j]
    return x


class TestHermitianSolve:
    def test_against_gauss_elimination_oracle(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            G = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
            A = G.conj().T @ G + np.eye(8)
            b = rng.normal(size=8) + 1j * rng.normal(size=8)
            x = hermitian_solve(A, b)
            assert np.linalg.norm(A @ x - b) < 1e-9
            assert np.allclose(x, _gauss_eliminate(A, b), atol=1e-9)

    def test_matrix_rhs(self):
        rng = np.random.default_rng(1)
        G = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
        A = G.conj().T @ G + np.eye(5)
        B = rng.normal(size=(5, 3)) + 1j * rng.normal(size=(5, 3))
        X = hermitian_solve(A, B)
        assert np.allclose(A @ X, B, atol=1e-10)

    def test_rejects_non_hermitian(self):
        A = np.array([[1.0, 2.0], [0.0, 1.0]])
        with pytest.raises(ValueError, match="not Hermitian"):
            hermitian_solve(A, np.ones(2))

    def test_rejects_non_square(self):
        with pytest.raises(ValueError, match="square"):
            hermitian_solve(np.ones((2, 3)), np.ones(2))

    def test_indefinite_raises_with_pivot(self):
        A = np.diag([1.0, -1.0, 1.0])
        with pytest.raises(SingularMatrixError) as exc:
            hermitian_solve(A, np.ones(3))
        assert 1 <= exc.value.pivot <= 3


class TestGaussianMsg:
    def test_rejects_negative_variance(self):
        with pytest.raises(ValueError):
            GaussianMsg(0.0, -1.0)

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            GaussianMsg(np.nan, 1.0)
        with pytest.raises(ValueError):
            GaussianMsg(0.0, np.inf)


def _density(x, msg):
    return np.exp(-np.abs(x - msg.mean) ** 2 / msg.var) / (np.pi * msg.var)


class TestGaussianProduct:
    def test_against_quadrature_oracle(self):
        rng = np.random.default_rng(2)
        for _ in range(5):
            a = GaussianMsg(complex(rng.normal(), rng.normal()),
                            float(rng.uniform(0.3, 2.0)))
            b = GaussianMsg(complex(rng.normal(), rng.normal()),
                            float(rng.uniform(0.3, 2.0)))
            prod, log_scale = gaussian_product(a, b)
            # 2-D grid covering both components of the complex plane
            c, r = prod.mean, 7 * np.sqrt(max(a.var, b.var))
            t = np.linspace(-r, r, 801)
            dx = t[1] - t[0]
            X = c + t[:, None] + 1j * t[None, :]
            f = _density(X, a) * _density(X, b)
            Z = f.sum() * dx * dx
            mean = (X * f).sum() * dx * dx / Z
            var = (np.abs(X - mean) ** 2 * f).sum() * dx * dx / Z
            assert abs(np.log(Z) - log_scale) < 1e-6
            assert abs(prod.mean - mean) < 1e-6
            assert abs(prod.var - var) < 1e-6

    def test_requires_positive_variances(self):
        with pytest.raises(ValueError):
            gaussian_product(GaussianMsg(0, 0.0), GaussianMsg(0, 1.0))


class TestGaussianDivide:
    def test_hand_worked_example(self):
        # num=(1, 0.5), den=(1, 1.0): z = (1*1 - 1*0.5)/0.5 = 1, v2 = 0.5/0.5 = 1
        out = gaussian_divide(GaussianMsg(1.0, 0.5), GaussianMsg(1.0, 1.0))
        assert out.mean == pytest.approx(1.0, abs=1e-15)
        assert out.var == pytest.approx(1.0, abs=1e-15)

    def test_product_divide_round_trip(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            a = GaussianMsg(complex(rng.normal(), rng.normal()),
                            float(rng.uniform(0.1, 3.0)))
            b = GaussianMsg(complex(rng.normal(), rng.normal()),
                            float(rng.uniform(0.1, 3.0)))
            prod, _ = gaussian_product(a, b)
            back = gaussian_divide(prod, b)
            assert abs(back.mean - a.mean) <= 1e-12 * max(1.0, abs(a.mean))
            assert abs(back.var - a.var) <= 1e-12 * a.var

    def test_degenerate_division_raises(self):
        with pytest.raises(NonPositiveVarianceError):
            gaussian_divide(GaussianMsg(0.0, 1.0), GaussianMsg(0.0, 0.5))

    def test_vectorized_matches_scalar(self):
        rng = np.random.default_rng(4)
        mu = rng.normal(size=10) + 1j * rng.normal(size=10)
        s2 = rng.uniform(0.1, 1.0, size=10)
        m = rng.normal(size=10) + 1j * rng.normal(size=10)
        eta = s2 + rng.uniform(0.1, 1.0, size=10)
        eta[3] = s2[3] / 2  # one degenerate entry
        z, v2, ok = extrinsic_divide_arrays(mu, s2, m, eta)
        assert not ok[3] and ok.sum() == 9
        for i in np.nonzero(ok)[0]:
            ref = gaussian_divide(GaussianMsg(mu[i], s2[i]),
                                  GaussianMsg(m[i], eta[i]))
            assert z[i] == pytest.approx(ref.mean)
            assert v2[i] == pytest.approx(ref.var)
