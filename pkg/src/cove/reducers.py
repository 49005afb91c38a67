"""Dimension reducers and the embedding interchange format.

Truncated SVD projects any embedding to its best rank-d approximation;
the spectral embedder produces normalized-Laplacian eigenvectors of the
graph itself, used to initialize external nonlinear reducers.  The text
interchange format is the boundary through which external tools consume
and produce embeddings.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path
from typing import TextIO

import numpy as np
import scipy.sparse as sp
from scipy.linalg import eigh as scipy_eigh

from .cooccur import Embedding
from .errors import FormatError, NumericError, ParameterError
from .graph import Graph, connected_components

__all__ = [
    "ReducerSpec",
    "svd_reduce",
    "spectral_embedding",
    "write_embedding",
    "read_embedding",
]

_DENSE_SVD_LIMIT = 3000
_POWER_ITER_BUDGET = 12


@dataclass(frozen=True)
class ReducerSpec:
    method: str
    dim: int
    seed: int = 0

    def __post_init__(self):
        if self.method not in ("svd", "spectral"):
            raise ParameterError(f"unknown reducer method {self.method!r}")
        if self.dim < 1:
            raise ParameterError(f"target dim must be >= 1, got {self.dim}")


def svd_reduce(e: Embedding, dim: int, seed: int = 0) -> Embedding:
    """Project rows onto the top-`dim` right singular directions.

    Returns U_d @ diag(s_d): columns ordered by descending singular value,
    with each right singular vector flipped so its largest-magnitude entry
    is positive.  Dense LAPACK is used up to moderate sizes; above that a
    seeded randomized range finder with a bounded power-iteration budget.
    """
    x = e.values
    limit = min(x.shape)
    if not 1 <= dim <= limit:
        raise ParameterError(f"svd dim must be in [1, {limit}], got {dim}")
    if limit <= _DENSE_SVD_LIMIT:
        u, s, vt = np.linalg.svd(x, full_matrices=False)
        u, s, vt = u[:, :dim], s[:dim], vt[:dim]
    else:
        u, s, vt = _randomized_svd(x, dim, seed)
    signs = np.sign(vt[np.arange(dim), np.argmax(np.abs(vt), axis=1)])
    signs[signs == 0] = 1.0
    return Embedding(values=u * (signs * s), labels=e.labels, kind="euclidean")


def _randomized_svd(x: np.ndarray, dim: int, seed: int):
    """Range-finder SVD with power iterations until singular values settle."""
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed)])))
    oversample = min(10, min(x.shape) - dim)
    k = dim + oversample
    q = x @ rng.standard_normal((x.shape[1], k))
    q, _ = np.linalg.qr(q)
    prev = None
    for _ in range(_POWER_ITER_BUDGET):
        q, _ = np.linalg.qr(x @ (x.T @ q))
        b = q.T @ x
        s = np.linalg.svd(b, compute_uv=False)[:dim]
        if prev is not None and np.allclose(s, prev, rtol=1e-10, atol=1e-12):
            break
        prev = s
    else:
        raise NumericError(
            f"randomized svd did not stabilize within {_POWER_ITER_BUDGET} "
            "power iterations"
        )
    b = q.T @ x
    ub, s, vt = np.linalg.svd(b, full_matrices=False)
    return (q @ ub)[:, :dim], s[:dim], vt[:dim]


def spectral_embedding(g: Graph, dim: int) -> Embedding:
    """Eigenvectors of the symmetric normalized Laplacian for the `dim`
    smallest nonzero eigenvalues, ascending, unit norm.

    The trivial zero-eigenvalue direction (sqrt-degree vector) is excluded.
    The graph must be connected; embed components separately otherwise.
    """
    if g.n < 2:
        raise ParameterError("spectral embedding needs at least 2 nodes")
    if not 1 <= dim <= g.n - 1:
        raise ParameterError(f"spectral dim must be in [1, {g.n - 1}], got {dim}")
    n_comp = int(connected_components(g).max()) + 1
    if n_comp != 1:
        raise ParameterError(
            f"graph has {n_comp} connected components; spectral embedding "
            "requires a connected graph, embed each component separately"
        )
    adj = g.adjacency_matrix()
    deg = np.asarray(adj.sum(axis=1)).ravel()
    d_inv_sqrt = 1.0 / np.sqrt(deg)
    lap = sp.identity(g.n) - sp.diags(d_inv_sqrt) @ adj @ sp.diags(d_inv_sqrt)

    if g.n <= 2000:
        dense = lap.toarray()
        dense = 0.5 * (dense + dense.T)
        eigvals, eigvecs = scipy_eigh(dense, subset_by_index=(0, dim))
    else:
        # smallest of L == largest of 2I - L; avoids shift-invert at the
        # singular zero eigenvalue
        flipped = (2.0 * sp.identity(g.n) - lap).tocsr()
        try:
            mu, eigvecs = sp.linalg.eigsh(flipped, k=dim + 1, which="LM", maxiter=5000)
        except sp.linalg.ArpackNoConvergence as exc:
            raise NumericError(
                "eigensolver did not converge within 5000 iterations"
            ) from exc
        eigvals = 2.0 - mu
        order = np.argsort(eigvals)
        eigvals, eigvecs = eigvals[order], eigvecs[:, order]
    # index 0 is the trivial eigenvalue-zero direction of the connected graph
    values = np.ascontiguousarray(eigvecs[:, 1 : dim + 1])
    return Embedding(values=values, labels=g.labels, kind="euclidean")


_HEADER_MAGIC = "COVE-EMB"


def write_embedding(e: Embedding, sink: TextIO | str | Path) -> None:
    """Text interchange format: header `COVE-EMB n d kind`, then one line
    per node, `label v1 ... vd`, values at 17 significant digits."""
    if isinstance(sink, (str, Path)):
        with open(sink, "w", encoding="utf-8") as fh:
            write_embedding(e, fh)
        return
    sink.write(f"{_HEADER_MAGIC} {e.n} {e.d} {e.kind}\n")
    for label, row in zip(e.labels, e.values):
        sink.write(label)
        for v in row:
            sink.write(f" {v:.17g}")
        sink.write("\n")


def read_embedding(source: TextIO | str | Path) -> Embedding:
    """Parse the interchange format, validating shape and kind invariants."""
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            return read_embedding(fh)
    header = source.readline()
    parts = header.split()
    if len(parts) != 4 or parts[0] != _HEADER_MAGIC:
        raise FormatError(f"line 1: expected '{_HEADER_MAGIC} <n> <d> <kind>' header")
    try:
        n, d = int(parts[1]), int(parts[2])
    except ValueError:
        raise FormatError("line 1: non-integer dimensions in header") from None
    kind = parts[3]
    if kind not in ("distribution", "hellinger", "euclidean"):
        raise FormatError(f"line 1: unknown embedding kind {kind!r}")
    if n < 0 or d < 1:
        raise FormatError(f"line 1: bad dimensions n={n} d={d}")

    values = np.empty((n, d))
    labels = []
    for i in range(n):
        line = source.readline()
        if not line:
            raise FormatError(f"line {i + 2}: expected {n} rows, file ended early")
        tokens = line.split()
        if len(tokens) != d + 1:
            raise FormatError(
                f"line {i + 2}: expected label plus {d} values, got "
                f"{len(tokens)} tokens"
            )
        labels.append(tokens[0])
        try:
            values[i] = [float(t) for t in tokens[1:]]
        except ValueError:
            raise FormatError(f"line {i + 2}: non-numeric entry") from None
    for extra_no, extra in enumerate(source, start=n + 2):
        if extra.strip():
            raise FormatError(f"line {extra_no}: expected {n} rows, found more")

    _check_kind_invariants(values, kind)
    return Embedding(values=values, labels=tuple(labels), kind=kind)


def _check_kind_invariants(values: np.ndarray, kind: str) -> None:
    if kind == "distribution":
        if values.size and np.any(values < 0):
            raise FormatError("distribution rows must be nonnegative")
        sums = values.sum(axis=1)
        bad = np.flatnonzero(np.abs(sums - 1.0) > 1e-9)
        if len(bad):
            raise FormatError(
                f"distribution row {bad[0]} sums to {float(sums[bad[0]])}, expected 1"
            )
    elif kind == "hellinger":
        norms = np.linalg.norm(values, axis=1)
        bad = np.flatnonzero(np.abs(norms - 1.0 / np.sqrt(2.0)) > 1e-9)
        if len(bad):
            raise FormatError(
                f"hellinger row {bad[0]} has norm {float(norms[bad[0]])}, "
                "expected 1/sqrt(2)"
            )
