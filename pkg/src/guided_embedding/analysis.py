"""Post-embedding statistics: seeded k-means with silhouette-based model
selection, Newman-Girvan modularity, and a permutation significance test.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyGraph, TooManyClusters

LLOYD_MAX_ITER = 300
LLOYD_SHIFT_TOL = 1e-10


@dataclass(frozen=True)
class ClusterAssignment:
    labels: np.ndarray
    k: int
    inertia: float


@dataclass(frozen=True)
class SilhouetteSelection:
    k: int
    assignment: ClusterAssignment
    silhouettes: np.ndarray
    per_k: dict[int, tuple[int, float]]  # k -> (negative count, mean silhouette)


@dataclass(frozen=True)
class ModularityTest:
    q_observed: float
    null_samples: np.ndarray
    p_value: float


def _plusplus_init(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = points.shape[0]
    centers = np.empty((k, points.shape[1]))
    centers[0] = points[rng.integers(n)]
    sq = np.sum((points - centers[0]) ** 2, axis=1)
    for c in range(1, k):
        total = sq.sum()
        if total <= 0:
            centers[c] = points[rng.integers(n)]
            continue
        centers[c] = points[rng.choice(n, p=sq / total)]
        sq = np.minimum(sq, np.sum((points - centers[c]) ** 2, axis=1))
    return centers


def _assign(points: np.ndarray, centers: np.ndarray) -> tuple[np.ndarray, float]:
    d2 = np.sum((points[:, None, :] - centers[None, :, :]) ** 2, axis=2)
    labels = np.argmin(d2, axis=1)
    return labels, float(d2[np.arange(len(points)), labels].sum())


def _lloyd(points: np.ndarray, centers: np.ndarray) -> tuple[np.ndarray, float]:
    prev_inertia = np.inf
    labels, inertia = _assign(points, centers)
    for _ in range(LLOYD_MAX_ITER):
        # monotonicity of the Lloyd objective; tiny slack for roundoff
        assert inertia <= prev_inertia + 1e-9
        prev_inertia = inertia
        new_centers = centers.copy()
        for c in range(centers.shape[0]):
            members = points[labels == c]
            if len(members):
                new_centers[c] = members.mean(axis=0)
            else:
                # revive an empty cluster with the worst-fit point
                d = np.sum((points - centers[labels]) ** 2, axis=1)
                new_centers[c] = points[np.argmax(d)]
        shift = np.max(np.abs(new_centers - centers))
        centers = new_centers
        labels, inertia = _assign(points, centers)
        if shift < LLOYD_SHIFT_TOL:
            break
    return labels, inertia


def kmeans(points, k: int, repetitions: int = 20, seed: int = 0) -> ClusterAssignment:
    """Best-inertia k-means over seeded restarts (k-means++ init, Lloyd)."""
    points = np.asarray(points, dtype=float)
    n = points.shape[0]
    if k > n:
        raise TooManyClusters(f"k={k} exceeds {n} points")
    if k < 1 or repetitions < 1:
        raise ValueError("k and repetitions must be >= 1")
    best_labels, best_inertia = None, np.inf
    for child in np.random.SeedSequence(seed).spawn(repetitions):
        rng = np.random.default_rng(child)
        labels, inertia = _lloyd(points, _plusplus_init(points, k, rng))
        if inertia < best_inertia:
            best_labels, best_inertia = labels, inertia
    # relabel so that non-empty cluster ids are contiguous
    _, labels = np.unique(best_labels, return_inverse=True)
    labels.setflags(write=False)
    return ClusterAssignment(labels=labels, k=int(labels.max()) + 1, inertia=best_inertia)


def silhouette_values(points, labels) -> np.ndarray:
    """Per-point silhouette scores.

    Convention for degenerate cases: singleton clusters score 0, as do
    points whose within- and between-cluster mean distances are both 0.
    """
    points = np.asarray(points, dtype=float)
    labels = np.asarray(labels)
    n = points.shape[0]
    dist = np.sqrt(np.maximum(np.sum((points[:, None] - points[None, :]) ** 2, axis=2), 0.0))
    clusters = np.unique(labels)
    scores = np.zeros(n)
    if len(clusters) < 2:
        return scores
    for i in range(n):
        own = labels[i]
        own_mask = labels == own
        own_size = own_mask.sum()
        if own_size == 1:
            continue
        a = dist[i, own_mask].sum() / (own_size - 1)
        b = min(dist[i, labels == c].mean() for c in clusters if c != own)
        denom = max(a, b)
        scores[i] = 0.0 if denom == 0 else (b - a) / denom
    return scores


def silhouette_select(
    points, k_range: tuple[int, int] = (2, 10), repetitions: int = 20, seed: int = 0
) -> SilhouetteSelection:
    """Pick the cluster count with the fewest negative silhouette values.

    Ties go to the higher mean silhouette, then to the smaller k.
    """
    points = np.asarray(points, dtype=float)
    n = points.shape[0]
    lo, hi = k_range
    hi = min(hi, n - 1)
    if lo < 2 or lo > hi:
        raise ValueError(f"k range [{lo}, {hi}] invalid for {n} points")
    best = None
    per_k = {}
    for k in range(lo, hi + 1):
        assignment = kmeans(points, k, repetitions=repetitions, seed=seed)
        sil = silhouette_values(points, assignment.labels)
        negatives = int(np.sum(sil < 0))
        mean_sil = float(sil.mean())
        per_k[k] = (negatives, mean_sil)
        key = (negatives, -mean_sil, k)
        if best is None or key < best[0]:
            best = (key, k, assignment, sil)
    _, k_star, assignment, sil = best
    return SilhouetteSelection(k=k_star, assignment=assignment, silhouettes=sil, per_k=per_k)


def modularity(a_bin, labels) -> float:
    """Newman-Girvan modularity of a cluster assignment on a binary graph."""
    a = np.asarray(a_bin, dtype=float)
    labels = np.asarray(labels)
    w = a.sum() / 2.0
    if w == 0:
        raise EmptyGraph("graph has no edges")
    d = a.sum(axis=1)
    q = 0.0
    for c in np.unique(labels):
        idx = np.nonzero(labels == c)[0]
        q += a[np.ix_(idx, idx)].sum() - d[idx].sum() ** 2 / (2.0 * w)
    return q / (2.0 * w)


def permutation_test(
    a_bin, labels, draws: int = 999, seed: int = 0, null: str = "permute"
) -> ModularityTest:
    """Null distribution of modularity under random cluster assignments.

    "permute" shuffles the observed label vector (preserves cluster
    sizes, the stricter null); "iid" draws labels uniformly from the
    observed label values.
    """
    if draws < 1:
        raise ValueError("draws must be >= 1")
    if null not in ("permute", "iid"):
        raise ValueError(f"unknown null model {null!r}")
    labels = np.asarray(labels)
    q_obs = modularity(a_bin, labels)
    rng = np.random.default_rng(seed)
    values = np.unique(labels)
    samples = np.empty(draws)
    for t in range(draws):
        if null == "permute":
            drawn = rng.permutation(labels)
        else:
            drawn = values[rng.integers(len(values), size=len(labels))]
        samples[t] = modularity(a_bin, drawn)
    p = (1 + int(np.sum(samples >= q_obs))) / (1 + draws)
    samples.setflags(write=False)
    return ModularityTest(q_observed=q_obs, null_samples=samples, p_value=p)
