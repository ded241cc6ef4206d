"""Two-dimensional embeddings across a cooperation-weight sweep.

A sweep fixes a focus set at weight 1 and drives the remaining weights
along a linear schedule. Each step yields a criterion eigendecomposition,
from which two eigenvectors give the frame coordinates; frames are
aligned by an orthogonal Procrustes transform (no scaling, no
translation) so that trajectories are not polluted by arbitrary
rotations/reflections of near-degenerate eigenpairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import orthogonal_procrustes

from .errors import DegenerateTarget, EmptyFocus, IndexOutOfRange
from .graph import NormalizedOperators
from .slepian import (
    CooperationWeights,
    SlepianSet,
    guided_matrix_approx,
    guided_matrix_exact,
    guided_slepians,
)
from .spectral import sqrt_psd_exact

GAP_WARN_TOL = 1e-6


@dataclass(frozen=True)
class WeightSchedule:
    """Ordered cooperation-weight settings with a pinned focus set."""

    steps: tuple[CooperationWeights, ...]
    focus: frozenset[int]
    start: float
    end: float

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class Embedding2D:
    coords: np.ndarray  # n x 2
    eigvec_indices: tuple[int, int]  # 1-based, into the descending value order
    zeta_values: tuple[float, float]


@dataclass(frozen=True)
class Trajectory:
    frames: tuple[Embedding2D, ...]  # frames[0] is the unaligned reference
    per_node_paths: np.ndarray  # n x steps x 2
    warnings: tuple[str, ...]


def make_schedule(
    n: int, focus, steps: int, start: float = 1.0, end: float = 0.0
) -> WeightSchedule:
    """Linear off-focus weight schedule from start to end inclusive."""
    focus = frozenset(int(i) for i in focus)
    if not focus:
        raise EmptyFocus("focus set must be non-empty")
    if any(i < 0 or i >= n for i in focus):
        raise IndexOutOfRange("focus index outside [0, n)")
    if steps < 2:
        raise ValueError("steps must be >= 2")
    if not 0.0 <= end <= start:
        raise ValueError("schedule requires 0 <= end <= start")
    focus_idx = sorted(focus)
    out = []
    for level in np.linspace(start, end, steps):
        m = np.full(n, level)
        m[focus_idx] = 1.0
        out.append(CooperationWeights(m))
    return WeightSchedule(steps=tuple(out), focus=focus, start=float(start), end=float(end))


def embed(sset: SlepianSet, indices: tuple[int, int] = (2, 3)) -> Embedding2D:
    """Project nodes on two criterion eigenvectors (1-based indices)."""
    i, j = indices
    for k in (i, j):
        if not 1 <= k <= sset.r:
            raise IndexOutOfRange(f"eigenvector index {k} outside [1, {sset.r}]")
    coords = sset.vectors[:, [i - 1, j - 1]].copy()
    return Embedding2D(
        coords=coords,
        eigvec_indices=(i, j),
        zeta_values=(float(sset.values[i - 1]), float(sset.values[j - 1])),
    )


def procrustes_align(reference: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Rotate/reflect target onto reference (orthogonal Procrustes, no scaling)."""
    reference = np.asarray(reference, dtype=float)
    target = np.asarray(target, dtype=float)
    if reference.shape != target.shape:
        raise ValueError("reference and target must have the same shape")
    if not np.any(target):
        raise DegenerateTarget("target configuration is identically zero")
    rot, _ = orthogonal_procrustes(target, reference)
    return target @ rot


def _frame_warnings(step: int, values: np.ndarray, indices: tuple[int, int]) -> list[str]:
    i, j = indices
    out = []
    if abs(values[i - 1] - values[j - 1]) < GAP_WARN_TOL:
        out.append(f"step {step}: eigengap {i}-{j} below {GAP_WARN_TOL}")
    if j < len(values) and abs(values[j - 1] - values[j]) < GAP_WARN_TOL:
        out.append(f"step {step}: eigengap {j}-{j + 1} below {GAP_WARN_TOL}")
    return out


def trajectory_sweep(
    ops: NormalizedOperators,
    schedule: WeightSchedule,
    indices: tuple[int, int] = (2, 3),
    approx_order: Optional[int] = None,
    alignment: str = "chained",
) -> Trajectory:
    """Embed every schedule step and align the frames into node trajectories.

    alignment "chained" aligns each frame to the previous aligned one
    (smoother under eigenvector rotation inside near-degenerate pairs);
    "first" anchors every frame to frame 0.
    """
    if alignment not in ("chained", "first"):
        raise ValueError(f"unknown alignment mode {alignment!r}")
    lhalf = sqrt_psd_exact(ops.laplacian)
    warnings: list[str] = []
    frames: list[Embedding2D] = []
    for step, cw in enumerate(schedule.steps):
        if approx_order is None:
            criterion = guided_matrix_exact(cw, lhalf)
        else:
            criterion = guided_matrix_approx(cw, ops.adjacency, approx_order)
        sset = guided_slepians(criterion, cw, lhalf)
        raw = embed(sset, indices)
        warnings.extend(_frame_warnings(step, sset.values, indices))
        if step == 0:
            frames.append(raw)
        else:
            ref = frames[-1] if alignment == "chained" else frames[0]
            aligned = procrustes_align(ref.coords, raw.coords)
            frames.append(
                Embedding2D(
                    coords=aligned,
                    eigvec_indices=raw.eigvec_indices,
                    zeta_values=raw.zeta_values,
                )
            )
    paths = np.stack([f.coords for f in frames], axis=1)
    return Trajectory(frames=tuple(frames), per_node_paths=paths, warnings=tuple(warnings))
