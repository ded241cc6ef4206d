"""Symmetric eigendecomposition, graph Fourier transform, and matrix square
roots (exact and series-truncated) with truncation error bounds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    EigenvalueOutOfRange,
    NotPSD,
    NotSymmetric,
    SpectralRadiusExceeded,
)

SYMMETRY_TOL = 1e-10
PSD_TOL = 1e-9


@dataclass(frozen=True)
class SpectralBasis:
    """Eigendecomposition of a symmetric matrix with a fixed sort and sign.

    Columns of ``eigenvectors`` are orthonormal. In each column the entry
    of largest absolute value is positive (first such entry on ties).
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sort_order: str  # "ascending" | "descending"


@dataclass(frozen=True)
class TaylorBound:
    order: int
    d_k: float
    d_km: float


def fix_signs(u: np.ndarray) -> np.ndarray:
    """Flip columns so the largest-magnitude entry of each is positive."""
    u = u.copy()
    idx = np.argmax(np.abs(u), axis=0)
    flip = u[idx, np.arange(u.shape[1])] < 0
    u[:, flip] *= -1.0
    return u


def eig_sym(matrix, sort: str = "ascending") -> SpectralBasis:
    """Full eigendecomposition of a symmetric matrix."""
    m = np.asarray(matrix, dtype=float)
    if np.max(np.abs(m - m.T)) > SYMMETRY_TOL:
        raise NotSymmetric("input matrix is not symmetric")
    if sort not in ("ascending", "descending"):
        raise ValueError(f"unknown sort order {sort!r}")
    vals, vecs = np.linalg.eigh((m + m.T) / 2.0)
    if sort == "descending":
        vals = vals[::-1]
        vecs = vecs[:, ::-1]
    vecs = fix_signs(vecs)
    vals.setflags(write=False)
    vecs.setflags(write=False)
    return SpectralBasis(eigenvalues=vals, eigenvectors=vecs, sort_order=sort)


def gft(u: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Forward transform: spectral coefficients of the signal x."""
    x = np.asarray(x, dtype=float)
    if x.shape[0] != u.shape[0]:
        raise DimensionMismatch(f"signal length {x.shape[0]} != basis size {u.shape[0]}")
    return u.T @ x


def igft(u: np.ndarray, xhat: np.ndarray) -> np.ndarray:
    """Inverse transform: signal from its spectral coefficients."""
    xhat = np.asarray(xhat, dtype=float)
    if xhat.shape[0] != u.shape[1]:
        raise DimensionMismatch(f"coefficient length {xhat.shape[0]} != basis size {u.shape[1]}")
    return u @ xhat


def sqrt_psd_exact(matrix) -> np.ndarray:
    """Symmetric PSD square root via eigendecomposition.

    Eigenvalues in [-1e-9, 0) are clamped to zero; below that raises NotPSD.
    """
    basis = eig_sym(matrix, "ascending")
    vals = basis.eigenvalues
    if vals[0] < -PSD_TOL:
        raise NotPSD(f"smallest eigenvalue {vals[0]} below -{PSD_TOL}")
    root = np.sqrt(np.clip(vals, 0.0, None))
    s = (basis.eigenvectors * root) @ basis.eigenvectors.T
    return (s + s.T) / 2.0


def taylor_coeff(k: int) -> float:
    """k-th series coefficient of sqrt(1 - a) = 1 - sum_k c_k a^k.

    Computed by the recurrence c_{k+1} = c_k (2k - 1) / (2k + 2); no raw
    factorials, stable for large k.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    c = 0.5
    for i in range(1, k):
        c *= (2 * i - 1) / (2 * i + 2)
    return c


def taylor_coeffs(kmax: int) -> np.ndarray:
    """Coefficients c_1..c_kmax as an array."""
    out = np.empty(kmax)
    c = 0.5
    for i in range(kmax):
        out[i] = c
        c *= (2 * (i + 1) - 1) / (2 * (i + 1) + 2)
    return out


def sqrt_taylor(a, order: int) -> np.ndarray:
    """Order-K truncation I - sum_{k<=K} c_k A^k of the Laplacian square root.

    A must be a symmetric normalized adjacency (spectral radius <= 1).
    """
    a = np.asarray(a, dtype=float)
    if order < 1:
        raise ValueError("order must be >= 1")
    radius = np.max(np.abs(np.linalg.eigvalsh((a + a.T) / 2.0)))
    if radius > 1.0 + PSD_TOL:
        raise SpectralRadiusExceeded(f"spectral radius {radius} exceeds 1")
    coeffs = taylor_coeffs(order)
    n = a.shape[0]
    power = np.eye(n)
    total = np.eye(n)
    for k in range(order):
        power = power @ a
        total -= coeffs[k] * power
    return (total + total.T) / 2.0


def _remainder_coeff(order: int) -> float:
    # |f^{(K+1)}(1)| / (K+1)! for f = sqrt equals c_{K+1}
    return taylor_coeff(order + 1)


def taylor_error_bound(order: int, laplacian_eigenvalues, zero_eps: float = 1e-6) -> float:
    """Frobenius bound on the order-K square-root truncation error.

    Sums the Lagrange remainder magnitude over the spectrum, with the
    (K+1)-th derivative of sqrt taken at its supremum over the closed
    interval between each eigenvalue and 1. The supremum is unbounded as
    eigenvalues approach 0, so any eigenvalue below ``zero_eps`` makes the
    bound +inf; connected graphs always hit this through their null
    eigenvalue, and only the empirical distance stays informative there.
    """
    lam = np.asarray(laplacian_eigenvalues, dtype=float)
    if np.any(lam < -PSD_TOL) or np.any(lam > 2.0 + PSD_TOL):
        raise EigenvalueOutOfRange("eigenvalues must lie in [0, 2]")
    if np.any(lam < zero_eps):
        return float("inf")
    coeff = _remainder_coeff(order)
    worst = np.minimum(lam, 1.0)  # |f^{(K+1)}| decreases with its argument
    with np.errstate(over="ignore"):
        terms = coeff * worst ** (-(order + 0.5)) * np.abs(lam - 1.0) ** (order + 1)
    return float(np.sum(terms))


def criterion_error_bound(d_k: float, m) -> float:
    """Bound d_K^2 ||M||_F on the criterion-matrix truncation error."""
    if d_k < 0:
        raise ValueError("d_k must be non-negative")
    m = np.asarray(m, dtype=float)
    return float(d_k * np.sqrt(np.sum(m**2)) * d_k)


def taylor_bound(order: int, laplacian_eigenvalues, m) -> TaylorBound:
    d_k = taylor_error_bound(order, laplacian_eigenvalues)
    return TaylorBound(order=order, d_k=d_k, d_km=criterion_error_bound(d_k, m))
