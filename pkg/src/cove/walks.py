"""Random-walk corpus generation: standard first-order and biased second-order walks."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TextIO

import numpy as np

from .errors import ParameterError
from .graph import Graph

__all__ = [
    "WalkParams",
    "WalkCorpus",
    "sample_standard_walk",
    "sample_biased_walk",
    "build_corpus",
    "write_corpus",
]


@dataclass(frozen=True)
class WalkParams:
    """Corpus parameters: walks per node, walk length (in nodes), bias and seed.

    p is the return weight (1/p to step back to the previous node), q the
    in-out weight (1/q to step to a node not adjacent to the previous one).
    p = q = 1 reduces the biased walk to the standard one.
    """

    gamma: int = 10
    length: int = 40
    p: float = 1.0
    q: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.gamma < 1:
            raise ParameterError(f"gamma must be >= 1, got {self.gamma}")
        if self.length < 1:
            raise ParameterError(f"length must be >= 1, got {self.length}")
        if not self.p > 0 or not self.q > 0:
            raise ParameterError(f"p and q must be > 0, got p={self.p} q={self.q}")


@dataclass(frozen=True)
class WalkCorpus:
    walks: list[np.ndarray]
    params: WalkParams
    graph_n: int


def walk_rng(seed: int, node: int, walk_index: int) -> np.random.Generator:
    """Independent random stream for walk `walk_index` started at `node`.

    Counter-based derivation makes corpus generation independent of
    scheduling: any worker can regenerate exactly the stream for its walk.
    """
    ss = np.random.SeedSequence([int(seed), int(node), int(walk_index)])
    return np.random.Generator(np.random.PCG64(ss))


class _WalkTables:
    """Per-row cumulative transition probabilities in CSR layout.

    `aug[k] = row(k) + cumprob[k]` is globally nondecreasing, so a single
    searchsorted against `cur + r` resolves one weight-proportional step for
    a whole batch of walkers at once.
    """

    def __init__(self, g: Graph):
        self.g = g
        cumprob = np.empty(len(g.weights))
        for v in range(g.n):
            lo, hi = int(g.indptr[v]), int(g.indptr[v + 1])
            if hi > lo:
                c = np.cumsum(g.weights[lo:hi])
                cumprob[lo:hi] = c / c[-1]
        self.cumprob = cumprob
        self.aug = np.repeat(np.arange(g.n, dtype=np.float64), g.degrees) + cumprob
        self.degrees = g.degrees

    def step(self, v: int, r: float) -> int:
        lo, hi = int(self.g.indptr[v]), int(self.g.indptr[v + 1])
        k = np.searchsorted(self.cumprob[lo:hi], r, side="right")
        return int(self.g.indices[lo + k])

    def step_batch(self, cur: np.ndarray, r: np.ndarray) -> np.ndarray:
        k = np.searchsorted(self.aug, cur.astype(np.float64) + r, side="right")
        # cur + r can round up onto the next row boundary when r ~ 1
        k = np.minimum(k, self.g.indptr[cur + 1] - 1)
        return self.g.indices[k]


def _standard_walk(tables: _WalkTables, start: int, steps: int, rng) -> np.ndarray:
    walk = np.empty(steps, dtype=np.int64)
    walk[0] = start
    cur = start
    for t in range(1, steps):
        if tables.degrees[cur] == 0:
            return walk[:t]
        cur = tables.step(cur, rng.random())
        walk[t] = cur
    return walk


def _biased_walk(
    tables: _WalkTables, start: int, steps: int, p: float, q: float, rng
) -> np.ndarray:
    g = tables.g
    walk = np.empty(steps, dtype=np.int64)
    walk[0] = start
    if steps == 1 or tables.degrees[start] == 0:
        return walk[:1]
    cur = tables.step(start, rng.random())
    walk[1] = cur
    prev = start
    for t in range(2, steps):
        lo, hi = int(g.indptr[cur]), int(g.indptr[cur + 1])
        nbrs = g.indices[lo:hi]
        prev_nbrs = g.neighbors(prev)
        factors = np.where(_sorted_member(nbrs, prev_nbrs), 1.0, 1.0 / q)
        factors[nbrs == prev] = 1.0 / p
        c = np.cumsum(g.weights[lo:hi] * factors)
        c /= c[-1]
        k = np.searchsorted(c, rng.random(), side="right")
        prev, cur = cur, int(nbrs[k])
        walk[t] = cur
    return walk


def _sorted_member(values: np.ndarray, sorted_ref: np.ndarray) -> np.ndarray:
    if len(sorted_ref) == 0:
        return np.zeros(len(values), dtype=bool)
    pos = np.searchsorted(sorted_ref, values)
    hit = np.zeros(len(values), dtype=bool)
    in_range = pos < len(sorted_ref)
    hit[in_range] = sorted_ref[pos[in_range]] == values[in_range]
    return hit


def sample_standard_walk(
    g: Graph, start: int, steps: int, rng: np.random.Generator
) -> np.ndarray:
    """Walk `steps` nodes from `start`, each transition weight-proportional.

    Terminates early only at an isolated node (which can only be the start
    in a simple undirected graph).
    """
    return _standard_walk(_WalkTables(g), start, steps, rng)


def sample_biased_walk(
    g: Graph, start: int, steps: int, p: float, q: float, rng: np.random.Generator
) -> np.ndarray:
    """Second-order walk: after a standard first step, the edge weight toward
    neighbor u of the current node is multiplied by 1/p if u is the previous
    node, 1 if u is adjacent to it, and 1/q otherwise."""
    if not p > 0 or not q > 0:
        raise ParameterError(f"p and q must be > 0, got p={p} q={q}")
    return _biased_walk(_WalkTables(g), start, steps, p, q, rng)


def build_corpus(g: Graph, params: WalkParams) -> WalkCorpus:
    """Sample gamma walks of the configured length from every node.

    Walk (v, j) consumes only its own stream `walk_rng(seed, v, j)`, so the
    corpus is byte-identical however the work is scheduled.  Walks are
    ordered by (start node, walk index).
    """
    tables = _WalkTables(g)
    if params.p == 1.0 and params.q == 1.0:
        walks = _batch_standard_corpus(tables, params)
    else:
        walks = [
            _biased_walk(
                tables, v, params.length, params.p, params.q,
                walk_rng(params.seed, v, j),
            )
            for v in range(g.n)
            for j in range(params.gamma)
        ]
    return WalkCorpus(walks=walks, params=params, graph_n=g.n)


def _batch_standard_corpus(tables: _WalkTables, params: WalkParams) -> list[np.ndarray]:
    g = tables.g
    gamma, length = params.gamma, params.length
    starts = np.repeat(np.arange(g.n, dtype=np.int64), gamma)
    num = len(starts)
    if length == 1:
        return [starts[w : w + 1].copy() for w in range(num)]

    uniforms = np.empty((num, length - 1))
    for w in range(num):
        v = int(starts[w])
        if tables.degrees[v] > 0:
            uniforms[w] = walk_rng(params.seed, v, w % gamma).random(length - 1)

    seq = np.empty((num, length), dtype=np.int64)
    seq[:, 0] = starts
    moving = np.flatnonzero(tables.degrees[starts] > 0)
    cur = starts[moving]
    for t in range(1, length):
        cur = tables.step_batch(cur, uniforms[moving, t - 1])
        seq[moving, t] = cur

    alive = tables.degrees[starts] > 0
    return [seq[w] if alive[w] else seq[w, :1] for w in range(num)]


def write_corpus(corpus: WalkCorpus, labels: tuple[str, ...], sink: TextIO) -> None:
    """One walk per line, space-separated original node labels."""
    for walk in corpus.walks:
        sink.write(" ".join(labels[v] for v in walk))
        sink.write("\n")
