"""Link-prediction evaluation: edge holdout, Hadamard features, logistic
regression, and AUC scoring."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .cooccur import Embedding
from .errors import ParameterError
from .graph import Graph, from_edges

__all__ = [
    "LinkSplit",
    "LogisticModel",
    "LogRegConfig",
    "split_edges",
    "hadamard_features",
    "train_logreg",
    "predict_scores",
    "auc",
]


@dataclass(frozen=True)
class LinkSplit:
    """Edge holdout: train graph, held-out positives and sampled negatives.

    Train negatives are non-edges of the train graph, so they may collide
    with held-out test edges; test negatives are non-edges of the original
    graph and disjoint from the train negatives.
    """

    train_graph: Graph
    train_pos: list[tuple[int, int]]
    test_pos: list[tuple[int, int]]
    train_neg: list[tuple[int, int]]
    test_neg: list[tuple[int, int]]
    seed: int


@dataclass(frozen=True)
class LogisticModel:
    weights: np.ndarray
    bias: float
    iterations_run: int
    final_loss: float


@dataclass(frozen=True)
class LogRegConfig:
    iterations: int = 500
    step_size: float = 0.1
    l2: float = 1e-4


def split_edges(g: Graph, holdout: float, seed: int) -> LinkSplit:
    """Uniformly hold out round(holdout * |E|) edges as test positives.

    Negative pairs are sampled uniformly without replacement: train
    negatives from the non-edges of the train graph (possibly test
    positives), test negatives from the non-edges of the full graph,
    disjoint from the train negatives.
    """
    if not 0.0 < holdout < 1.0:
        raise ParameterError(f"holdout must be in (0, 1), got {holdout}")
    if g.total_edges < 20:
        raise ParameterError(
            f"graph has {g.total_edges} edges; at least 20 needed for a split"
        )
    edges = [(u, v) for u, v, _ in g.edges()]
    weights = {(u, v): w for u, v, w in g.edges()}
    n_test = int(holdout * len(edges) + 0.5)
    if n_test < 1:
        raise ParameterError(
            f"holdout {holdout} of {len(edges)} edges keeps no test edge"
        )
    n_train = len(edges) - n_test

    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed)])))
    order = rng.permutation(len(edges))
    test_pos = [edges[i] for i in order[:n_test]]
    train_pos = [edges[i] for i in order[n_test:]]

    max_pairs = g.n * (g.n - 1) // 2
    non_edges_full = max_pairs - len(edges)
    # worst case every train negative is a true non-edge and uses one up
    if non_edges_full < n_train + n_test:
        raise ParameterError(
            f"graph too dense: {non_edges_full} non-edges cannot supply "
            f"{n_train} train and {n_test} test negatives"
        )

    train_edge_set = set(train_pos)
    train_neg = _sample_non_edges(g.n, n_train, train_edge_set, set(), rng)
    full_edge_set = set(edges)
    test_neg = _sample_non_edges(g.n, n_test, full_edge_set, set(train_neg), rng)

    train_graph = from_edges(
        {e: weights[e] for e in sorted(train_pos)}, list(g.labels)
    )
    return LinkSplit(
        train_graph=train_graph,
        train_pos=train_pos,
        test_pos=test_pos,
        train_neg=train_neg,
        test_neg=test_neg,
        seed=seed,
    )


def _sample_non_edges(
    n: int,
    count: int,
    forbidden_edges: set[tuple[int, int]],
    already_taken: set[tuple[int, int]],
    rng: np.random.Generator,
) -> list[tuple[int, int]]:
    """Rejection-sample `count` distinct node pairs avoiding the given sets."""
    out: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    attempts = 0
    budget = 200 * count + 10000
    while len(out) < count and attempts <= budget:
        attempts += 1
        u = int(rng.integers(n))
        v = int(rng.integers(n))
        if u == v:
            continue
        pair = (u, v) if u < v else (v, u)
        if pair in forbidden_edges or pair in already_taken or pair in seen:
            continue
        seen.add(pair)
        out.append(pair)
    if len(out) < count:
        # rejection keeps missing: dense graph, enumerate the candidates
        if n > 10000:
            raise ParameterError(
                f"could not sample {count} non-edges within {budget} attempts"
            )
        candidates = [
            (u, v)
            for u in range(n)
            for v in range(u + 1, n)
            if (u, v) not in forbidden_edges
            and (u, v) not in already_taken
            and (u, v) not in seen
        ]
        still = count - len(out)
        if len(candidates) < still:
            raise ParameterError(
                f"only {len(candidates)} non-edges left, {still} more needed"
            )
        picked = rng.choice(len(candidates), size=still, replace=False)
        out.extend(candidates[i] for i in picked)
    return out


def hadamard_features(e: Embedding, pairs: list[tuple[int, int]]) -> np.ndarray:
    """Row per pair: elementwise product of the two endpoint vectors."""
    n = e.n
    for u, v in pairs:
        if not (0 <= u < n and 0 <= v < n):
            raise ParameterError(f"pair ({u}, {v}) references an unembedded node")
    us = np.fromiter((p[0] for p in pairs), dtype=np.int64, count=len(pairs))
    vs = np.fromiter((p[1] for p in pairs), dtype=np.int64, count=len(pairs))
    return e.values[us] * e.values[vs]


def _loss_and_grad(
    w: np.ndarray, b: float, x: np.ndarray, y: np.ndarray, l2: float
) -> tuple[float, np.ndarray, float]:
    """Mean log-loss with L2 penalty on the weights (not the bias)."""
    z = x @ w + b
    # log(1 + exp(-y z)) computed stably
    m = np.maximum(0.0, -y * z)
    loss = float(np.mean(m + np.log(np.exp(-m) + np.exp(-y * z - m))))
    loss += 0.5 * l2 * float(w @ w)
    sig = 1.0 / (1.0 + np.exp(np.clip(-z, -500, 500)))
    resid = sig - (y > 0)
    grad_w = x.T @ resid / len(y) + l2 * w
    grad_b = float(resid.mean())
    return loss, grad_w, grad_b


def train_logreg(
    features: np.ndarray, labels: np.ndarray, config: LogRegConfig | None = None
) -> LogisticModel:
    """Full-batch gradient descent on L2-regularized logistic loss.

    Starts from zero parameters; any step that increases the loss is
    rolled back and the step size halved, so the recorded loss sequence is
    non-increasing.  Deterministic.
    """
    if config is None:
        config = LogRegConfig()
    y = np.where(np.asarray(labels) > 0, 1.0, -1.0)
    if len(np.unique(y)) < 2:
        raise ParameterError("training data must contain both classes")
    x = np.asarray(features, dtype=np.float64)

    w = np.zeros(x.shape[1])
    b = 0.0
    step = config.step_size
    loss, grad_w, grad_b = _loss_and_grad(w, b, x, y, config.l2)
    iterations = 0
    for _ in range(config.iterations):
        if step < 1e-14:
            break
        w_new = w - step * grad_w
        b_new = b - step * grad_b
        new_loss, new_gw, new_gb = _loss_and_grad(w_new, b_new, x, y, config.l2)
        if new_loss > loss:
            step *= 0.5
            continue
        w, b, loss, grad_w, grad_b = w_new, b_new, new_loss, new_gw, new_gb
        iterations += 1
    return LogisticModel(weights=w, bias=b, iterations_run=iterations, final_loss=loss)


def predict_scores(model: LogisticModel, features: np.ndarray) -> np.ndarray:
    """Raw linear scores; monotone in the predicted edge probability."""
    return features @ model.weights + model.bias


def auc(scores_pos: np.ndarray, scores_neg: np.ndarray) -> float:
    """Mann-Whitney AUC: fraction of (pos, neg) pairs ranked correctly,
    ties counting one half."""
    pos = np.asarray(scores_pos, dtype=np.float64)
    neg = np.asarray(scores_neg, dtype=np.float64)
    if len(pos) == 0 or len(neg) == 0:
        raise ParameterError("auc needs at least one score on each side")
    ranks = rankdata(np.concatenate([pos, neg]))
    rank_sum = float(ranks[: len(pos)].sum())
    u = rank_sum - len(pos) * (len(pos) + 1) / 2.0
    return u / (len(pos) * len(neg))
