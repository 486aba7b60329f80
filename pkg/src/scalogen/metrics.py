"""Improved precision and recall over raw series vectors.

Each set's manifold is estimated by spheres of k-NN radius around its points.
Precision is the fraction of generated vectors covered by the real manifold
(fidelity); recall is the fraction of real vectors covered by the generated
manifold (diversity).  Distances are exact Euclidean, block-tiled so the
m x m matrix never has to be materialized at once.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

_BLOCK = 512


@dataclass
class FeatureSet:
    """Rows of raw feature vectors (series values) under one label."""

    vectors: np.ndarray
    label: str = ""

    def __post_init__(self):
        v = np.asarray(self.vectors, dtype=float)
        if v.ndim != 2:
            raise ValueError("vectors must be an (m, d) matrix")
        if not np.all(np.isfinite(v)):
            raise ValueError("vectors must be finite")
        self.vectors = v

    def __len__(self) -> int:
        return self.vectors.shape[0]


@dataclass
class EvalReport:
    precision: float
    recall: float
    k: int
    m_real: int
    m_fake: int
    config: str = ""

    def __post_init__(self):
        for name in ("precision", "recall"):
            v = getattr(self, name)
            if np.isfinite(v) and not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")


def knn_radii(fs: FeatureSet, k: int) -> np.ndarray:
    """Distance from each vector to its k-th nearest neighbor in the same set."""
    v = fs.vectors
    m = len(fs)
    if k < 1:
        raise ValueError("k must be >= 1")
    if m <= k:
        raise ValueError(f"need at least k+1 = {k + 1} vectors, got {m}")
    radii = np.empty(m)
    for start in range(0, m, _BLOCK):
        block = slice(start, min(start + _BLOCK, m))
        d = cdist(v[block], v)
        d[np.arange(start, block.stop) - start, np.arange(start, block.stop)] = np.inf
        radii[block] = np.partition(d, k - 1, axis=1)[:, k - 1]
    return radii


def _covered(points: np.ndarray, manifold: np.ndarray, radii: np.ndarray) -> float:
    """Fraction of points within distance radii[i] of manifold point i (inclusive)."""
    hits = 0
    for start in range(0, points.shape[0], _BLOCK):
        d = cdist(points[start : start + _BLOCK], manifold)
        hits += int(np.any(d <= radii, axis=1).sum())
    return hits / points.shape[0]


def precision_recall(real: FeatureSet, fake: FeatureSet, k: int = 3) -> EvalReport:
    """Manifold precision/recall between two feature sets.

    Boundary is inclusive (distance equal to the radius counts as inside) so
    ties are deterministic.
    """
    if real.vectors.shape[1] != fake.vectors.shape[1]:
        raise ValueError("feature dimensions differ")
    precision = _covered(fake.vectors, real.vectors, knn_radii(real, k))
    recall = _covered(real.vectors, fake.vectors, knn_radii(fake, k))
    return EvalReport(
        precision=precision,
        recall=recall,
        k=k,
        m_real=len(real),
        m_fake=len(fake),
    )
