"""Deterministic Lloyd k-means with k-means++ seeding and restarts."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cooccur import Embedding
from .errors import ParameterError
from .metrics import Clustering

__all__ = ["KMeansParams", "kmeans"]


@dataclass(frozen=True)
class KMeansParams:
    k: int
    restarts: int = 10
    max_iters: int = 300
    tol: float = 1e-7
    seed: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise ParameterError(f"k must be >= 1, got {self.k}")
        if self.restarts < 1:
            raise ParameterError(f"restarts must be >= 1, got {self.restarts}")
        if self.max_iters < 1:
            raise ParameterError(f"max_iters must be >= 1, got {self.max_iters}")
        if self.tol < 0:
            raise ParameterError(f"tol must be >= 0, got {self.tol}")


def _restart_rng(seed: int, restart: int) -> np.random.Generator:
    ss = np.random.SeedSequence([int(seed), int(restart)])
    return np.random.Generator(np.random.PCG64(ss))


def _sq_dists(x: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """Squared Euclidean distances, shape (len(x), len(centers))."""
    cross = x @ centers.T
    sq = (x * x).sum(axis=1)[:, None] - 2.0 * cross + (centers * centers).sum(axis=1)
    np.maximum(sq, 0.0, out=sq)
    return sq

def _plus_plus_init(x: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = x.shape[0]
    centers = np.empty((k, x.shape[1]))
    centers[0] = x[rng.integers(n)]
    d2 = _sq_dists(x, centers[:1]).ravel()
    for j in range(1, k):
        total = d2.sum()
        if total > 0:
            choice = rng.choice(n, p=d2 / total)
        else:
            choice = rng.integers(n)
        centers[j] = x[choice]
        d2 = np.minimum(d2, _sq_dists(x, centers[j : j + 1]).ravel())
    return centers


def _lloyd(
    x: np.ndarray, centers: np.ndarray, max_iters: int, tol: float
) -> tuple[np.ndarray, np.ndarray, list[float]]:
    """Lloyd iterations; returns (labels, centers, per-iteration costs).

    Assignment ties break toward the lowest cluster index; an emptied
    cluster is reseeded from the point farthest from its current center.
    """
    k = centers.shape[0]
    costs: list[float] = []
    labels = np.zeros(len(x), dtype=np.int64)
    for _ in range(max_iters):
        d2 = _sq_dists(x, centers)
        labels = np.argmin(d2, axis=1)
        point_d2 = d2[np.arange(len(x)), labels]
        for c in range(k):
            if not np.any(labels == c):
                far = int(np.argmax(point_d2))
                centers[c] = x[far]
                labels[far] = c
                point_d2[far] = 0.0
        costs.append(float(point_d2.sum()))
        new_centers = centers.copy()
        for c in range(k):
            members = labels == c
            if np.any(members):
                new_centers[c] = x[members].mean(axis=0)
        shift = float(np.max(np.linalg.norm(new_centers - centers, axis=1)))
        centers = new_centers
        if shift <= tol:
            break
    d2 = _sq_dists(x, centers)
    labels = np.argmin(d2, axis=1)
    costs.append(float(d2[np.arange(len(x)), labels].sum()))
    return labels, centers, costs


def kmeans(e: Embedding, params: KMeansParams) -> Clustering:
    """Cluster embedding rows into k groups; best of `restarts` runs by
    within-cluster sum of squares, deterministic given the seed."""
    x = np.asarray(e.values, dtype=np.float64)
    n = x.shape[0]
    if params.k > n:
        raise ParameterError(f"k={params.k} exceeds the {n} points available")

    best_labels = None
    best_cost = np.inf
    for restart in range(params.restarts):
        rng = _restart_rng(params.seed, restart)
        centers = _plus_plus_init(x, params.k, rng)
        labels, _, costs = _lloyd(x, centers, params.max_iters, params.tol)
        if costs[-1] < best_cost:
            best_cost = costs[-1]
            best_labels = labels
    return Clustering.from_labels(best_labels, universe_n=n)
