"""Clustering comparison scores and the clustering file format.

The best-match Jaccard family handles outliers and overlapping clusters:
a one-sided size-weighted best-match score, its outlier-aware extension,
and the symmetric average of both directions.  Adjusted mutual information
is provided for plain partitions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, TextIO

import numpy as np
from scipy.special import gammaln

from .errors import FormatError, ParameterError

__all__ = [
    "Clustering",
    "jaccard",
    "one_sided_weighted",
    "outlier_aware_one_sided",
    "f_star_wo",
    "ami",
    "write_clustering",
    "read_clustering",
]


@dataclass(frozen=True)
class Clustering:
    """A family of non-empty node sets plus an outlier set over 0..n-1.

    Clusters may overlap; a clustering whose clusters are pairwise disjoint
    (and whose outlier set absorbs everything else) is a partition.
    """

    clusters: tuple[frozenset[int], ...]
    outliers: frozenset[int]
    universe_n: int

    def __post_init__(self):
        covered = set(self.outliers)
        for c in self.clusters:
            if not c:
                raise ParameterError("clusters must be non-empty")
            if c & self.outliers:
                raise ParameterError("outliers must be disjoint from every cluster")
            covered |= c
        if covered and (min(covered) < 0 or max(covered) >= self.universe_n):
            raise ParameterError("node ids must lie in [0, universe_n)")
        if len(covered) != self.universe_n:
            raise ParameterError("every node must be in a cluster or an outlier")

    def is_partition(self) -> bool:
        if self.outliers:
            return False
        total = sum(len(c) for c in self.clusters)
        return total == self.universe_n

    @classmethod
    def from_labels(cls, labels: Iterable[int], universe_n: int | None = None):
        """Build from per-node integer labels; label -1 marks an outlier."""
        labels = list(labels)
        n = universe_n if universe_n is not None else len(labels)
        groups: dict[int, set[int]] = {}
        outliers = set()
        for v, lab in enumerate(labels):
            if lab == -1:
                outliers.add(v)
            else:
                groups.setdefault(lab, set()).add(v)
        clusters = tuple(frozenset(groups[k]) for k in sorted(groups))
        return cls(clusters=clusters, outliers=frozenset(outliers), universe_n=n)


def jaccard(a: frozenset[int] | set[int], b: frozenset[int] | set[int]) -> float:
    """|a & b| / |a | b|; two empty sets count as identical (1)."""
    if not a and not b:
        return 1.0
    return len(a & b) / len(a | b)


def _check_same_universe(c1: Clustering, c2: Clustering) -> None:
    if c1.universe_n != c2.universe_n:
        raise ParameterError(
            f"clusterings compare different universes: {c1.universe_n} vs "
            f"{c2.universe_n} nodes"
        )


def one_sided_weighted(c1: Clustering, c2: Clustering) -> float:
    """Size-weighted average over c1's clusters of the best Jaccard match in c2.

    The max over an empty cluster family is 0; a clustering with no
    clusters at all (everything outlier) scores 0 on this term.
    """
    _check_same_universe(c1, c2)
    total = sum(len(c) for c in c1.clusters)
    if total == 0:
        return 0.0
    acc = 0.0
    for c in c1.clusters:
        best = max((jaccard(c, other) for other in c2.clusters), default=0.0)
        acc += len(c) * best
    return acc / total


def outlier_aware_one_sided(c1: Clustering, c2: Clustering) -> float:
    """Outlier-fraction-weighted blend of outlier agreement and cluster match."""
    _check_same_universe(c1, c2)
    n = c1.universe_n
    if n == 0:
        return 1.0
    w_out = len(c1.outliers) / n
    out_term = jaccard(c1.outliers, c2.outliers) if w_out else 0.0
    return w_out * out_term + (1.0 - w_out) * one_sided_weighted(c1, c2)


def f_star_wo(c1: Clustering, c2: Clustering) -> float:
    """Symmetric outlier-aware score: mean of both one-sided directions."""
    return 0.5 * outlier_aware_one_sided(c1, c2) + 0.5 * outlier_aware_one_sided(
        c2, c1
    )


def _partition_labels(c: Clustering) -> np.ndarray:
    labels = np.full(c.universe_n, -1, dtype=np.int64)
    for idx, cluster in enumerate(c.clusters):
        for v in cluster:
            if labels[v] != -1:
                raise ParameterError(
                    "overlapping clusters are not a partition; use f_star_wo"
                )
            labels[v] = idx
    if np.any(labels == -1):
        raise ParameterError("outliers are not allowed in a partition; use f_star_wo")
    return labels


def ami(p1: Clustering, p2: Clustering) -> float:
    """Adjusted mutual information between two partitions.

    Chance correction uses the permutation (hypergeometric) model; the
    normalizer is the arithmetic mean of the two entropies.  Identical
    partitions score exactly 1.  When the normalizer degenerates to the
    expected MI the score is 1 for identical partitions and 0 otherwise.
    """
    _check_same_universe(p1, p2)
    l1 = _partition_labels(p1)
    l2 = _partition_labels(p2)
    if set(p1.clusters) == set(p2.clusters):
        return 1.0
    n = p1.universe_n
    if n == 0:
        return 1.0

    k1 = len(p1.clusters)
    k2 = len(p2.clusters)
    contingency = np.zeros((k1, k2), dtype=np.int64)
    np.add.at(contingency, (l1, l2), 1)
    a = contingency.sum(axis=1)
    b = contingency.sum(axis=0)

    nz = contingency > 0
    nij = contingency[nz].astype(np.float64)
    outer = np.outer(a, b)[nz].astype(np.float64)
    mi = float(np.sum(nij / n * (np.log(n * nij) - np.log(outer))))

    h1 = float(-np.sum((a / n) * np.log(a / n)))
    h2 = float(-np.sum((b / n) * np.log(b / n)))

    emi = _expected_mi(a, b, n)
    denom = 0.5 * (h1 + h2) - emi
    if abs(denom) < 1e-12:
        return 0.0
    return (mi - emi) / denom


def _expected_mi(a: np.ndarray, b: np.ndarray, n: int) -> float:
    """Expected MI of two partitions with fixed marginals under random
    permutation of the labels (hypergeometric cell counts)."""
    log_fact = gammaln(np.arange(n + 2) + 1.0)
    emi = 0.0
    for ai in a:
        for bj in b:
            lo = max(1, ai + bj - n)
            hi = min(ai, bj)
            for nij in range(lo, hi + 1):
                log_p = (
                    log_fact[ai]
                    + log_fact[bj]
                    + log_fact[n - ai]
                    + log_fact[n - bj]
                    - log_fact[n]
                    - log_fact[nij]
                    - log_fact[ai - nij]
                    - log_fact[bj - nij]
                    - log_fact[n - ai - bj + nij]
                )
                emi += (nij / n) * (math.log(n * nij) - math.log(ai * bj)) * math.exp(
                    log_p
                )
    return emi


def write_clustering(
    c: Clustering, labels: tuple[str, ...], sink: TextIO | str | Path
) -> None:
    """Lines of `node_label cluster_id`; -1 marks an outlier.  A node in
    several clusters appears on several lines."""
    if isinstance(sink, (str, Path)):
        with open(sink, "w", encoding="utf-8") as fh:
            write_clustering(c, labels, fh)
        return
    for idx, cluster in enumerate(c.clusters):
        for v in sorted(cluster):
            sink.write(f"{labels[v]} {idx}\n")
    for v in sorted(c.outliers):
        sink.write(f"{labels[v]} -1\n")


def read_membership(source: TextIO | str | Path) -> dict[str, set[int]]:
    """Raw clustering file contents: node label -> set of cluster ids."""
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            return read_membership(fh)
    membership: dict[str, set[int]] = {}
    for line_no, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise FormatError(
                f"line {line_no}: expected 'node_label cluster_id', got "
                f"{len(tokens)} tokens"
            )
        try:
            cid = int(tokens[1])
        except ValueError:
            raise FormatError(f"line {line_no}: non-integer cluster id") from None
        if cid < -1:
            raise FormatError(f"line {line_no}: cluster id must be >= -1")
        membership.setdefault(tokens[0], set()).add(cid)
    return membership


def read_clustering(
    source: TextIO | str | Path, label_order: tuple[str, ...] | None = None
) -> tuple[Clustering, tuple[str, ...]]:
    """Parse a clustering file into a Clustering plus its node label order.

    With `label_order` given, node ids follow it and the file must cover
    exactly those labels; otherwise labels are sorted to fix the universe.
    """
    membership = read_membership(source)
    if label_order is None:
        label_order = tuple(sorted(membership))
    else:
        file_labels = set(membership)
        expected = set(label_order)
        if file_labels != expected:
            missing = sorted(expected - file_labels)[:3]
            extra = sorted(file_labels - expected)[:3]
            raise FormatError(
                f"clustering file covers different nodes (missing {missing}, "
                f"unexpected {extra})"
            )
    index = {lab: i for i, lab in enumerate(label_order)}
    groups: dict[int, set[int]] = {}
    outliers: set[int] = set()
    for lab, cids in membership.items():
        v = index[lab]
        for cid in cids:
            if cid == -1:
                outliers.add(v)
            else:
                groups.setdefault(cid, set()).add(v)
    clustering = Clustering(
        clusters=tuple(frozenset(groups[k]) for k in sorted(groups)),
        outliers=frozenset(outliers),
        universe_n=len(label_order),
    )
    return clustering, label_order
