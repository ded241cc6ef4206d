"""Criterion matrices for guided spectral embedding.

Three designs are covered: energy concentration inside a node subset
(values mu, bandlimited), modified embedded distance (values xi,
bandlimited), and the combined weighted criterion diag(m) - L^{1/2}
diag(m) L^{1/2} (values zeta, full band). The combined criterion admits
exact evaluation through the PSD square root or series-truncated
evaluation through powers of the normalized adjacency.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import NonBinarySelection
from .spectral import SpectralBasis, eig_sym, fix_signs, sqrt_taylor

BINARY_TOL = 1e-12


@dataclass(frozen=True)
class CooperationWeights:
    """Per-node non-negative importance weights (diagonal of the weighting matrix)."""

    m: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.m, dtype=float)
        if m.ndim != 1:
            raise ValueError("weights must be a vector")
        if np.any(m < 0):
            raise ValueError("weights must be non-negative")
        m.setflags(write=False)
        object.__setattr__(self, "m", m)

    @property
    def n(self) -> int:
        return self.m.shape[0]

    @property
    def m_max(self) -> float:
        return float(np.max(self.m)) if self.n else 0.0

    def is_binary(self) -> bool:
        return bool(np.all((np.abs(self.m) < BINARY_TOL) | (np.abs(self.m - 1.0) < BINARY_TOL)))

    def num_zeros(self) -> int:
        return int(np.sum(np.abs(self.m) < BINARY_TOL))

    @classmethod
    def ones(cls, n: int) -> "CooperationWeights":
        return cls(np.ones(n))

    @classmethod
    def binary(cls, selected, n: int) -> "CooperationWeights":
        m = np.zeros(n)
        m[list(selected)] = 1.0
        return cls(m)


@dataclass(frozen=True)
class SlepianSet:
    """Eigenvectors of a criterion matrix with their criterion values.

    ``vectors`` columns live in the vertex domain and are orthonormal.
    For kind "zeta" the two companion arrays hold the back-evaluated
    quadratic forms of the other two criteria per vector.
    """

    vectors: np.ndarray
    values: np.ndarray
    kind: str  # "mu" | "xi" | "zeta"
    companion_mu: Optional[np.ndarray] = None
    companion_xi: Optional[np.ndarray] = None

    @property
    def r(self) -> int:
        return self.vectors.shape[1]


@dataclass(frozen=True)
class DegeneracyReport:
    n_ones: int
    n_zeros: int
    z_s: int
    consistent: bool


def _check_binary(selection: CooperationWeights):
    if not selection.is_binary():
        raise NonBinarySelection("selection weights must be 0 or 1")


def _check_bandwidth(w: int, n: int):
    if not 1 <= w <= n:
        raise ValueError(f"bandwidth {w} outside [1, {n}]")


def concentration_slepians(
    basis: SpectralBasis, selection: CooperationWeights, bandwidth: int
) -> SlepianSet:
    """Maximize energy inside the selected nodes within the given bandwidth.

    Diagonalizes the W x W concentration matrix built from the lowest W
    Laplacian eigenvectors; values sorted descending.
    """
    if basis.sort_order != "ascending":
        raise ValueError("concentration design needs an ascending Laplacian basis")
    _check_binary(selection)
    _check_bandwidth(bandwidth, basis.eigenvectors.shape[0])
    u_w = basis.eigenvectors[:, :bandwidth]
    conc = u_w.T @ (selection.m[:, None] * u_w)
    inner = eig_sym(conc, "descending")
    g = fix_signs(u_w @ inner.eigenvectors)
    return SlepianSet(vectors=g, values=inner.eigenvalues, kind="mu")


def embedded_distance_slepians(
    basis: SpectralBasis,
    lhalf: np.ndarray,
    selection: CooperationWeights,
    bandwidth: int,
) -> SlepianSet:
    """Minimize the selection-restricted embedded distance within the bandwidth.

    Diagonalizes the bandlimited restriction of L^{1/2} S L^{1/2}; values
    sorted ascending.
    """
    if basis.sort_order != "ascending":
        raise ValueError("embedded-distance design needs an ascending Laplacian basis")
    _check_binary(selection)
    _check_bandwidth(bandwidth, basis.eigenvectors.shape[0])
    u_w = basis.eigenvectors[:, :bandwidth]
    half_sel = lhalf @ (selection.m[:, None] * lhalf)
    emb = u_w.T @ half_sel @ u_w
    inner = eig_sym(emb, "ascending")
    g = fix_signs(u_w @ inner.eigenvectors)
    return SlepianSet(vectors=g, values=inner.eigenvalues, kind="xi")


def guided_matrix_exact(weights: CooperationWeights, lhalf: np.ndarray) -> np.ndarray:
    """Exact criterion matrix diag(m) - L^{1/2} diag(m) L^{1/2}."""
    m = weights.m
    x = np.diag(m) - lhalf @ (m[:, None] * lhalf)
    return (x + x.T) / 2.0


def guided_matrix_linear(weights: CooperationWeights, adjacency: np.ndarray) -> np.ndarray:
    """Closed-form linear approximation (M A + A M) / 2.

    Reweights each direct edge by the mean importance of its endpoints.
    """
    m = weights.m
    return (m[:, None] * adjacency + m[None, :] * adjacency) / 2.0


def guided_matrix_quadratic(weights: CooperationWeights, adjacency: np.ndarray) -> np.ndarray:
    """Closed-form quadratic approximation.

    Adds length-2 path terms: endpoints raise a path's weight, the
    intermediate node's importance is subtracted.
    """
    m = weights.m
    a2 = adjacency @ adjacency
    lin = guided_matrix_linear(weights, adjacency)
    quad = (m[:, None] * a2 + m[None, :] * a2) / 8.0
    cross = (adjacency * m[None, :]) @ adjacency / 4.0
    x = lin + quad - cross
    return (x + x.T) / 2.0


def guided_matrix_approx(
    weights: CooperationWeights, adjacency: np.ndarray, order: int
) -> np.ndarray:
    """Series-truncated criterion matrix at the given order.

    Orders 1 and 2 use the closed forms above (truncations of the double
    power series by total path length). Higher orders substitute the
    order-K truncated square root T_K into diag(m) - T_K diag(m) T_K,
    which retains some cross terms beyond total order K; the two routes
    agree only in the limit.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    if order == 1:
        return guided_matrix_linear(weights, adjacency)
    if order == 2:
        return guided_matrix_quadratic(weights, adjacency)
    t_k = sqrt_taylor(adjacency, order)
    m = weights.m
    x = np.diag(m) - t_k @ (m[:, None] * t_k)
    return (x + x.T) / 2.0


def guided_slepians(
    criterion: np.ndarray,
    weights: CooperationWeights,
    lhalf: Optional[np.ndarray] = None,
) -> SlepianSet:
    """Full eigendecomposition of a guided criterion matrix, values descending.

    When ``lhalf`` is given, each eigenvector's concentration and embedded
    distance are back-evaluated as quadratic forms and stored as companions.
    """
    basis = eig_sym(criterion, "descending")
    g = basis.eigenvectors
    m = weights.m
    companion_mu = companion_xi = None
    if lhalf is not None:
        companion_mu = np.einsum("ij,ij->j", g, m[:, None] * g)
        y = lhalf @ g
        companion_xi = np.einsum("ij,ij->j", y, m[:, None] * y)
        companion_mu.setflags(write=False)
        companion_xi.setflags(write=False)
    return SlepianSet(
        vectors=g,
        values=basis.eigenvalues,
        kind="zeta",
        companion_mu=companion_mu,
        companion_xi=companion_xi,
    )


def verify_degeneracy(
    sset: SlepianSet, selection: CooperationWeights, tol: float = 1e-8, connected: bool = True
) -> DegeneracyReport:
    """Check the full-bandwidth degeneracy structure of the mu/xi designs.

    For the concentration design the value multiset must equal the
    selection diagonal; for the embedded-distance design the number of
    zero values is at least the number of unselected nodes, with equality
    on connected graphs.
    """
    _check_binary(selection)
    z_s = selection.num_zeros()
    vals = sset.values
    n_ones = int(np.sum(np.abs(vals - 1.0) <= tol))
    n_zeros = int(np.sum(np.abs(vals) <= tol))
    if sset.kind == "mu":
        consistent = n_ones == selection.n - z_s and n_zeros == z_s
    elif sset.kind == "xi":
        consistent = n_zeros >= z_s and (not connected or n_zeros == z_s)
    else:
        raise ValueError("degeneracy check applies to the mu and xi designs only")
    return DegeneracyReport(n_ones=n_ones, n_zeros=n_zeros, z_s=z_s, consistent=consistent)
