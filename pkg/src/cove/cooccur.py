"""Co-occurrence embeddings: exact matrix-power form and walk-sampled counts.

The exact route accumulates powers of the walk transition matrix out to a
context radius, symmetrizes, and row-normalizes; the sampled route counts
windowed co-occurrences over a walk corpus and row-normalizes those.  Either
row family can then be mapped through the entrywise square root so Euclidean
distance between rows equals Hellinger distance between the distributions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .errors import ParameterError
from .graph import Graph, row_normalized_adjacency
from .walks import WalkCorpus

__all__ = [
    "CooccurrenceMatrix",
    "Embedding",
    "exact_cove",
    "count_cooccurrences",
    "sampled_cove",
    "hellinger_transform",
    "distribution_embedding",
]

# kinds: T (summed transition powers), psi (symmetrized), psi_hat (row-normalized
# psi), counts (raw sampled co-occurrence counts), psi_tilde (row-normalized counts)
_COOC_KINDS = ("T", "psi", "psi_hat", "counts", "psi_tilde")
_EMB_KINDS = ("distribution", "hellinger", "euclidean")


@dataclass(frozen=True)
class CooccurrenceMatrix:
    """Sparse nonnegative n x n matrix tagged with what it holds."""

    matrix: sp.csr_matrix
    kind: str

    def __post_init__(self):
        if self.kind not in _COOC_KINDS:
            raise ParameterError(f"unknown co-occurrence kind {self.kind!r}")

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class Embedding:
    """Dense n x d matrix of node vectors with original labels and a kind tag.

    distribution rows are probability vectors; hellinger rows are their
    entrywise square roots scaled by 1/sqrt(2); euclidean rows carry no
    constraint.
    """

    values: np.ndarray
    labels: tuple[str, ...]
    kind: str

    def __post_init__(self):
        if self.kind not in _EMB_KINDS:
            raise ParameterError(f"unknown embedding kind {self.kind!r}")
        if self.values.ndim != 2 or len(self.labels) != self.values.shape[0]:
            raise ParameterError(
                f"embedding needs one label per row: {self.values.shape} rows, "
                f"{len(self.labels)} labels"
            )

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def d(self) -> int:
        return self.values.shape[1]

    def row(self, v: int) -> np.ndarray:
        return self.values[v]


def _default_labels(n: int) -> tuple[str, ...]:
    return tuple(str(i) for i in range(n))


def _row_normalize_with_indicators(m: sp.csr_matrix) -> sp.csr_matrix:
    """Divide each row by its sum; all-zero rows become unit self-indicators."""
    m = m.tocsr()
    sums = np.asarray(m.sum(axis=1)).ravel()
    zero_rows = np.flatnonzero(sums == 0)
    inv = np.ones_like(sums)
    nz = sums != 0
    inv[nz] = 1.0 / sums[nz]
    out = sp.diags(inv) @ m
    if len(zero_rows):
        ind = sp.csr_matrix(
            (np.ones(len(zero_rows)), (zero_rows, zero_rows)), shape=m.shape
        )
        out = out + ind
    return out.tocsr()


def exact_cove(
    g: Graph, radius: int, theta: Sequence[float] | None = None
) -> CooccurrenceMatrix:
    """Exact co-occurrence distribution rows by iterated sparse multiply.

    Accumulates theta_i-weighted i-step transition matrices for i up to
    `radius`, adds the transpose so co-occurrence counts both directions,
    and row-normalizes.  theta defaults to all ones (uniform window); other
    choices express general truncated diffusion weightings.  Isolated nodes
    get a unit self-indicator row.
    """
    if radius < 1:
        raise ParameterError(f"context radius must be >= 1, got {radius}")
    if theta is None:
        theta_arr = np.ones(radius)
    else:
        theta_arr = np.asarray(list(theta), dtype=np.float64)
        if theta_arr.shape != (radius,):
            raise ParameterError(
                f"theta must have length {radius}, got {theta_arr.shape}"
            )
        if np.any(theta_arr < 0) or not np.any(theta_arr > 0):
            raise ParameterError("theta entries must be nonnegative, not all zero")

    a_hat = row_normalized_adjacency(g)
    power = sp.identity(g.n, format="csr")
    total = sp.csr_matrix((g.n, g.n))
    for i in range(radius):
        power = (power @ a_hat).tocsr()
        if theta_arr[i] != 0:
            total = total + theta_arr[i] * power
    sym = total + total.T
    return CooccurrenceMatrix(_row_normalize_with_indicators(sym), kind="psi_hat")


def count_cooccurrences(corpus: WalkCorpus, radius: int) -> CooccurrenceMatrix:
    """Windowed co-occurrence counts over a corpus.

    Entry (u, v) counts ordered position pairs (s, t) within a walk where
    node u sits at s, node v at t and 1 <= |s - t| <= radius; windows
    truncate at walk boundaries.  The result is exactly symmetric.
    """
    if radius < 1:
        raise ParameterError(f"context radius must be >= 1, got {radius}")
    if not corpus.walks:
        raise ParameterError("corpus is empty")
    n = corpus.graph_n

    by_length: dict[int, list[np.ndarray]] = {}
    for walk in corpus.walks:
        by_length.setdefault(len(walk), []).append(walk)

    use_dense = n <= 4096
    dense = np.zeros((n, n), dtype=np.float64) if use_dense else None
    acc = sp.csr_matrix((n, n), dtype=np.float64)
    chunk_rows = max(1, 4_000_000 // max(by_length))
    for length, group in by_length.items():
        if length < 2:
            continue
        for lo in range(0, len(group), chunk_rows):
            block = np.vstack(group[lo : lo + chunk_rows])
            rows, cols = [], []
            for delta in range(1, min(radius, length - 1) + 1):
                a = block[:, :-delta].ravel()
                b = block[:, delta:].ravel()
                if use_dense:
                    np.add.at(dense, (a, b), 1.0)
                    np.add.at(dense, (b, a), 1.0)
                else:
                    rows += [a, b]
                    cols += [b, a]
            if not use_dense:
                r = np.concatenate(rows)
                c = np.concatenate(cols)
                acc = acc + sp.csr_matrix(
                    (np.ones(len(r)), (r, c)), shape=(n, n)
                )
    if use_dense:
        return CooccurrenceMatrix(sp.csr_matrix(dense), kind="counts")
    return CooccurrenceMatrix(acc, kind="counts")


def sampled_cove(counts: CooccurrenceMatrix) -> CooccurrenceMatrix:
    """Row-normalize a count matrix into sampled co-occurrence distributions.

    Rows of nodes that never co-occur (isolated nodes, length-1 walks)
    become unit self-indicators.
    """
    if counts.kind != "counts":
        raise ParameterError(f"expected a counts matrix, got kind {counts.kind!r}")
    return CooccurrenceMatrix(
        _row_normalize_with_indicators(counts.matrix), kind="psi_tilde"
    )


def hellinger_transform(
    m: CooccurrenceMatrix, labels: tuple[str, ...] | None = None
) -> Embedding:
    """Entrywise sqrt scaled by 1/sqrt(2), densified.

    Euclidean distance between output rows equals the Hellinger distance
    between the corresponding input distributions, and every output row has
    norm exactly 1/sqrt(2).
    """
    if m.kind not in ("psi_hat", "psi_tilde"):
        raise ParameterError(
            f"hellinger transform needs row distributions, got kind {m.kind!r}"
        )
    values = np.sqrt(m.matrix.toarray()) / np.sqrt(2.0)
    return Embedding(
        values=values,
        labels=labels if labels is not None else _default_labels(m.n),
        kind="hellinger",
    )


def distribution_embedding(
    m: CooccurrenceMatrix, labels: tuple[str, ...] | None = None
) -> Embedding:
    """Densify distribution rows into an Embedding without transforming them."""
    if m.kind not in ("psi_hat", "psi_tilde"):
        raise ParameterError(
            f"expected row distributions, got kind {m.kind!r}"
        )
    return Embedding(
        values=m.matrix.toarray(),
        labels=labels if labels is not None else _default_labels(m.n),
        kind="distribution",
    )
