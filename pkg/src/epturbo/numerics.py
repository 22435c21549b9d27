"""Complex linear-algebra kernels and scalar Gaussian-message algebra.

Only the pieces the equalizers actually need: a Hermitian
positive-definite solve and product/division of scalar complex
Gaussians (mean, variance) used for priors, posteriors and extrinsics.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

HERMITIAN_TOL = 1e-10


class SingularMatrixError(np.linalg.LinAlgError):
    """Raised when a matrix passed to hermitian_solve is not positive-definite."""

    def __init__(self, pivot: int):
        self.pivot = pivot
        super().__init__(
            f"matrix is not positive-definite: leading minor of order {pivot} "
            "is not positive"
        )


class NonPositiveVarianceError(ValueError):
    """Raised when a Gaussian division would produce a non-positive variance."""


@dataclass(frozen=True)
class GaussianMsg:
    """Scalar complex Gaussian message with mean and (real, >= 0) variance."""

    mean: complex
    var: float

    def __post_init__(self):
        if not np.isfinite(self.mean) or not np.isfinite(self.var):
            raise ValueError("GaussianMsg requires finite mean and variance")
        if self.var < 0:
            raise ValueError(f"GaussianMsg variance must be >= 0, got {self.var}")


def hermitian_solve(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Solve A X = B for Hermitian positive-definite A via Cholesky.

    Never forms an explicit inverse; raises SingularMatrixError naming
    the offending pivot when A is not positive-definite.
    """
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"A must be square, got shape {A.shape}")
    asym = np.max(np.abs(A - A.conj().T))
    scale = max(np.max(np.abs(A)), 1.0)
    if asym > HERMITIAN_TOL * scale:
        raise ValueError(f"A is not Hermitian: max asymmetry {asym:.3e}")
    try:
        c, low = cho_factor(A, lower=True)
    except np.linalg.LinAlgError as exc:
        # scipy reports "%d-th leading minor ... not positive definite"
        msg = str(exc)
        pivot = int(msg.split("-")[0]) if msg[:1].isdigit() else A.shape[0]
        raise SingularMatrixError(pivot) from exc
    return cho_solve((c, low), B)


def gaussian_product(a: GaussianMsg, b: GaussianMsg) -> tuple[GaussianMsg, float]:
    """Product of two scalar complex Gaussian densities.

    Returns the normalized Gaussian of the product plus the log of the
    scale factor (the product is an unnormalized Gaussian).
    """
    if a.var <= 0 or b.var <= 0:
        raise ValueError("gaussian_product requires strictly positive variances")
    prec = 1.0 / a.var + 1.0 / b.var
    var = 1.0 / prec
    mean = var * (a.mean / a.var + b.mean / b.var)
    # scale = CN(a.mean; b.mean, a.var + b.var)
    s = a.var + b.var
    log_scale = -(abs(a.mean - b.mean) ** 2) / s - np.log(np.pi * s)
    return GaussianMsg(mean, var), float(log_scale)


def gaussian_divide(num: GaussianMsg, den: GaussianMsg) -> GaussianMsg:
    """Divide two scalar Gaussians: posterior / prior -> extrinsic.

    With num = (mu, s2) and den = (m, eta) the result is
      z  = (mu*eta - m*s2) / (eta - s2)
      v2 = s2*eta / (eta - s2)
    which requires den.var > num.var.
    """
    mu, s2 = num.mean, num.var
    m, eta = den.mean, den.var
    if eta <= s2:
        raise NonPositiveVarianceError(
            f"denominator variance {eta} must exceed numerator variance {s2}"
        )
    z = (mu * eta - m * s2) / (eta - s2)
    v2 = s2 * eta / (eta - s2)
    return GaussianMsg(z, v2)


def extrinsic_divide_arrays(mu, s2, m, eta):
    """Vectorized gaussian_divide on arrays.

    Returns (z, v2, ok) where ok marks entries with eta > s2; entries
    with ok == False carry undefined values and must be handled by the
    caller (the equalizers skip/fallback per their degeneracy policy).
    """
    mu = np.asarray(mu)
    s2 = np.asarray(s2)
    m = np.asarray(m)
    eta = np.asarray(eta)
    d = eta - s2
    ok = d > 0
    safe = np.where(ok, d, 1.0)
    z = (mu * eta - m * s2) / safe
    v2 = s2 * eta / safe
    return z, v2, ok
