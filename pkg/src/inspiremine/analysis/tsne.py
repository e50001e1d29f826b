"""Exact 2-D t-SNE for small point sets (hundreds of points).

Pairwise affinities use per-point bandwidths binary-searched to match the
target perplexity; the embedding is optimized by gradient descent with
momentum (0.5 then 0.8) and early exaggeration (factor 12 for the first
250 iterations). O(n^2) memory and time; deterministic under a fixed
seed.
"""

from __future__ import annotations

import numpy as np

__all__ = ["tsne_2d"]

_EXAGGERATION = 12.0
_EXAGGERATION_ITERS = 250
_MOMENTUM_SWITCH = 250
_EPS = 1e-12


def _squared_distance_matrix(x: np.ndarray) -> np.ndarray:
    squared_norms = np.einsum("ij,ij->i", x, x)
    d2 = squared_norms[:, None] + squared_norms[None, :] - 2.0 * (x @ x.T)
    np.maximum(d2, 0.0, out=d2)
    np.fill_diagonal(d2, 0.0)
    return d2


def _conditional_probabilities(d2: np.ndarray, perplexity: float) -> np.ndarray:
    n = d2.shape[0]
    target_entropy = np.log(perplexity)
    p = np.zeros((n, n), dtype=np.float64)
    for i in range(n):
        beta, beta_min, beta_max = 1.0, -np.inf, np.inf
        row = np.delete(d2[i], i)
        for _ in range(50):
            weights = np.exp(-row * beta)
            total = weights.sum()
            if total <= 0:
                entropy = 0.0
                probs = np.zeros_like(row)
            else:
                probs = weights / total
                entropy = float(beta * (row * probs).sum() + np.log(total))
            diff = entropy - target_entropy
            if abs(diff) < 1e-5:
                break
            if diff > 0:
                beta_min = beta
                beta = beta * 2.0 if beta_max == np.inf else (beta + beta_max) / 2.0
            else:
                beta_max = beta
                beta = beta / 2.0 if beta_min == -np.inf else (beta + beta_min) / 2.0
        p[i, np.arange(n) != i] = probs
    return p


def tsne_2d(
    points,
    perplexity: float = 30.0,
    iterations: int = 1000,
    seed: int = 0,
    *,
    learning_rate: float = 200.0,
) -> np.ndarray:
    """Embed points into 2-D. Requires >= 4 points and perplexity < n;
    the effective perplexity is additionally capped at (n - 1) / 3."""
    x = np.asarray(points, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] < 4:
        raise ValueError("tsne_2d needs at least 4 points")
    n = x.shape[0]
    if perplexity >= n:
        raise ValueError(f"perplexity {perplexity} infeasible for {n} points")
    if perplexity < 1:
        raise ValueError("perplexity must be >= 1")
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    effective_perplexity = min(perplexity, (n - 1) / 3.0)
    effective_perplexity = max(effective_perplexity, 1.0)

    conditional = _conditional_probabilities(_squared_distance_matrix(x), effective_perplexity)
    p = (conditional + conditional.T) / (2.0 * n)
    np.maximum(p, _EPS, out=p)
    np.fill_diagonal(p, 0.0)

    rng = np.random.default_rng(seed)
    y = rng.standard_normal((n, 2)) * 1e-4
    update = np.zeros_like(y)

    for t in range(iterations):
        d2_y = _squared_distance_matrix(y)
        num = 1.0 / (1.0 + d2_y)
        np.fill_diagonal(num, 0.0)
        q = num / max(num.sum(), _EPS)
        np.maximum(q, _EPS, out=q)
        p_eff = p * _EXAGGERATION if t < _EXAGGERATION_ITERS else p
        pq = (p_eff - q) * num
        grad = 4.0 * ((np.diag(pq.sum(axis=1)) - pq) @ y)
        momentum = 0.5 if t < _MOMENTUM_SWITCH else 0.8
        update = momentum * update - learning_rate * grad
        y = y + update
        y = y - y.mean(axis=0)

    if not np.all(np.isfinite(y)):
        raise ValueError("embedding diverged to non-finite coordinates")
    return y
