"""K-means clustering and elbow-based k selection."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["ClusterResult", "ElbowResult", "kmeans", "select_k_elbow"]


@dataclass
class ClusterResult:
    k: int
    assignments: np.ndarray
    centroids: np.ndarray
    inertia: float
    inertia_history: list[float] = field(default_factory=list)
    n_iter: int = 0


@dataclass
class ElbowResult:
    k: int
    ks: list[int]
    inertias: list[float]
    warning: str = ""


def _squared_distances(points: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    # (n, k) matrix of squared euclidean distances.
    diff = points[:, None, :] - centroids[None, :, :]
    return np.einsum("nkd,nkd->nk", diff, diff)


def _kmeans_plus_plus(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = points.shape[0]
    chosen = [int(rng.integers(n))]
    while len(chosen) < k:
        d2 = _squared_distances(points, points[chosen]).min(axis=1)
        total = d2.sum()
        if total <= 0:
            remaining = [i for i in range(n) if i not in set(chosen)]
            chosen.append(int(rng.choice(remaining)))
            continue
        chosen.append(int(rng.choice(n, p=d2 / total)))
    return points[chosen].copy()


def _single_run(points: np.ndarray, k: int, rng: np.random.Generator, max_iter: int):
    centroids = _kmeans_plus_plus(points, k, rng)
    assignments = np.full(points.shape[0], -1, dtype=np.int64)
    history: list[float] = []
    for iteration in range(max_iter):
        d2 = _squared_distances(points, centroids)
        new_assignments = d2.argmin(axis=1)
        inertia = float(d2[np.arange(points.shape[0]), new_assignments].sum())
        # Reseed empty clusters to the farthest point from its centroid.
        empty = [c for c in range(k) if not np.any(new_assignments == c)]
        if empty:
            current = d2[np.arange(points.shape[0]), new_assignments].copy()
            for c in empty:
                far = int(current.argmax())
                inertia -= float(current[far])
                centroids[c] = points[far]
                new_assignments[far] = c
                current[far] = 0.0
        history.append(inertia)
        if np.array_equal(new_assignments, assignments):
            break
        assignments = new_assignments
        for c in range(k):
            members = points[assignments == c]
            if members.size:
                centroids[c] = members.mean(axis=0)
    return ClusterResult(
        k=k,
        assignments=assignments,
        centroids=centroids,
        inertia=history[-1],
        inertia_history=history,
        n_iter=len(history),
    )


def kmeans(
    points,
    k: int,
    seed: int = 0,
    restarts: int = 1,
    *,
    max_iter: int = 300,
) -> ClusterResult:
    """Lloyd iterations from k-means++ starts; best of `restarts` runs by
    final inertia. Within a run the recorded inertia history never
    increases. Deterministic for fixed seed."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise ValueError("points must be a non-empty 2-D array")
    if not 1 <= k <= pts.shape[0]:
        raise ValueError(f"k must be in [1, {pts.shape[0]}]")
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    best: ClusterResult | None = None
    for r in range(restarts):
        rng = np.random.default_rng((seed, r))
        result = _single_run(pts, k, rng, max_iter)
        if best is None or result.inertia < best.inertia:
            best = result
    return best


def select_k_elbow(
    points,
    k_range: tuple[int, int],
    seed: int = 0,
    *,
    restarts: int = 4,
    max_iter: int = 300,
) -> ElbowResult:
    """Pick k maximizing the discrete second difference of the inertia
    curve over [k_min, k_max]; a flat curve falls back to k_min with a
    warning."""
    k_min, k_max = k_range
    if k_max - k_min < 2:
        raise ValueError("k_range must span at least 3 values")
    ks = list(range(k_min, k_max + 1))
    inertias = [
        kmeans(points, k, seed=seed, restarts=restarts, max_iter=max_iter).inertia
        for k in ks
    ]
    spread = max(inertias) - min(inertias)
    if spread <= 1e-12 * max(1.0, abs(max(inertias))):
        return ElbowResult(k=k_min, ks=ks, inertias=inertias, warning="constant inertia curve")
    best_k = None
    best_curvature = -np.inf
    for i in range(1, len(ks) - 1):
        curvature = inertias[i - 1] - 2 * inertias[i] + inertias[i + 1]
        if curvature > best_curvature:
            best_curvature = curvature
            best_k = ks[i]
    return ElbowResult(k=best_k, ks=ks, inertias=inertias)
