"""Undirected weighted graphs, edge-list ingestion and the walk transition matrix."""

from __future__ import annotations

import io
import warnings
from dataclasses import dataclass, field
from typing import Iterable, TextIO

import numpy as np
import scipy.sparse as sp

from .errors import ParseError

__all__ = [
    "Graph",
    "parse_edge_list",
    "write_edge_list",
    "row_normalized_adjacency",
    "connected_components",
]


@dataclass(frozen=True)
class Graph:
    """Simple undirected weighted graph in CSR form.

    Nodes are dense ids 0..n-1; ``labels[v]`` keeps the original label from
    the input file.  ``indices``/``weights`` hold, per node, the sorted
    neighbor ids and strictly positive edge weights; the structure is
    symmetric and immutable after construction.
    """

    n: int
    indptr: np.ndarray
    indices: np.ndarray
    weights: np.ndarray
    labels: tuple[str, ...]
    total_edges: int

    def __post_init__(self):
        self.indptr.flags.writeable = False
        self.indices.flags.writeable = False
        self.weights.flags.writeable = False

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def neighbor_weights(self, v: int) -> np.ndarray:
        return self.weights[self.indptr[v] : self.indptr[v + 1]]

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    @property
    def weighted_degrees(self) -> np.ndarray:
        out = np.zeros(self.n)
        np.add.at(out, np.repeat(np.arange(self.n), np.diff(self.indptr)), self.weights)
        return out

    def has_edge(self, u: int, v: int) -> bool:
        nbrs = self.neighbors(u)
        i = np.searchsorted(nbrs, v)
        return bool(i < len(nbrs) and nbrs[i] == v)

    def adjacency_matrix(self) -> sp.csr_matrix:
        return sp.csr_matrix(
            (self.weights, self.indices, self.indptr), shape=(self.n, self.n)
        )

    def edges(self) -> Iterable[tuple[int, int, float]]:
        """Yield each undirected edge once as (u, v, w) with u < v."""
        for u in range(self.n):
            for v, w in zip(self.neighbors(u), self.neighbor_weights(u)):
                if u < v:
                    yield u, int(v), float(w)


def from_edges(
    edge_weights: dict[tuple[int, int], float], labels: list[str]
) -> Graph:
    """Build a Graph from a dict of (u, v) -> weight with u < v and dense ids."""
    n = len(labels)
    rows: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    for (u, v), w in edge_weights.items():
        rows[u].append((v, w))
        rows[v].append((u, w))
    indptr = np.zeros(n + 1, dtype=np.int64)
    indices = np.empty(sum(len(r) for r in rows), dtype=np.int64)
    weights = np.empty(len(indices), dtype=np.float64)
    pos = 0
    for u, row in enumerate(rows):
        row.sort()
        for v, w in row:
            indices[pos] = v
            weights[pos] = w
            pos += 1
        indptr[u + 1] = pos
    return Graph(
        n=n,
        indptr=indptr,
        indices=indices,
        weights=weights,
        labels=tuple(labels),
        total_edges=len(edge_weights),
    )


def parse_edge_list(source: str | TextIO) -> Graph:
    """Parse an edge-list text stream into a Graph.

    Lines are ``u v`` or ``u v w`` (w > 0, default 1); ``#`` starts a
    comment and blank lines are skipped.  Node labels may be arbitrary
    whitespace-free strings and are remapped to dense ids in sorted label
    order, so the same edge set parses to the same Graph regardless of
    line order.  Repeated edges sum their weights; self-loops are dropped
    (a warning reports how many).

    Raises ParseError (with the offending line number) on malformed lines.
    """
    if isinstance(source, str):
        source = io.StringIO(source)

    label_to_id: dict[str, int] = {}
    labels: list[str] = []
    edge_weights: dict[tuple[int, int], float] = {}
    dropped_self_loops = 0

    def intern(label: str) -> int:
        node = label_to_id.get(label)
        if node is None:
            node = len(labels)
            label_to_id[label] = node
            labels.append(label)
        return node

    for line_no, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) not in (2, 3):
            raise ParseError(line_no, f"expected 2 or 3 tokens, got {len(tokens)}")
        if len(tokens) == 3:
            try:
                w = float(tokens[2])
            except ValueError:
                raise ParseError(line_no, f"non-numeric weight {tokens[2]!r}") from None
            if not np.isfinite(w) or w <= 0:
                raise ParseError(line_no, f"weight must be > 0, got {tokens[2]}")
        else:
            w = 1.0
        u = intern(tokens[0])
        v = intern(tokens[1])
        if u == v:
            dropped_self_loops += 1
            continue
        key = (u, v) if u < v else (v, u)
        edge_weights[key] = edge_weights.get(key, 0.0) + w

    if dropped_self_loops:
        warnings.warn(f"dropped {dropped_self_loops} self-loop(s)", stacklevel=2)

    order = sorted(range(len(labels)), key=labels.__getitem__)
    remap = {old: new for new, old in enumerate(order)}
    canonical = {}
    for (u, v), w in edge_weights.items():
        a, b = remap[u], remap[v]
        canonical[(a, b) if a < b else (b, a)] = w
    return from_edges(canonical, [labels[old] for old in order])


def write_edge_list(g: Graph, sink: TextIO) -> None:
    """Write the graph back out, one edge per line using original labels.

    Unit weights are written as two tokens so parse/write round-trips an
    unweighted file byte for byte.
    """
    for u, v, w in g.edges():
        if w == 1.0:
            sink.write(f"{g.labels[u]} {g.labels[v]}\n")
        else:
            sink.write(f"{g.labels[u]} {g.labels[v]} {w!r}\n")


def row_normalized_adjacency(g: Graph) -> sp.csr_matrix:
    """Transition matrix of the standard random walk on g.

    Entry (v, u) is w(v, u) / sum of v's edge weights.  Rows of isolated
    nodes are all zero.  Row sparsity equals the neighbor set of the node.
    """
    norm = np.empty(len(g.weights))
    deg = g.weighted_degrees
    for v in range(g.n):
        lo, hi = g.indptr[v], g.indptr[v + 1]
        if hi > lo:
            norm[lo:hi] = g.weights[lo:hi] / deg[v]
    return sp.csr_matrix((norm, g.indices, g.indptr), shape=(g.n, g.n))


def connected_components(g: Graph) -> np.ndarray:
    """Label nodes by connected component; labels are contiguous from 0."""
    labels = np.full(g.n, -1, dtype=np.int64)
    current = 0
    for start in range(g.n):
        if labels[start] != -1:
            continue
        stack = [start]
        labels[start] = current
        while stack:
            v = stack.pop()
            for u in g.neighbors(v):
                if labels[u] == -1:
                    labels[u] = current
                    stack.append(int(u))
        current += 1
    return labels
