"""Readers and writers for the text formats shared with the primary CLI.

The harness never imports the primary package; these parsers are its own,
so the file formats stay the only coupling between the components.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

_HEADER = "COVE-EMB"
_KINDS = ("distribution", "hellinger", "euclidean")


@dataclass
class EmbeddingFile:
    labels: list[str]
    values: np.ndarray
    kind: str


def read_embedding(path: str | Path) -> EmbeddingFile:
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 4 or header[0] != _HEADER:
            raise ValueError(f"{path}: expected '{_HEADER} <n> <d> <kind>' header")
        n, d, kind = int(header[1]), int(header[2]), header[3]
        if kind not in _KINDS:
            raise ValueError(f"{path}: unknown embedding kind {kind!r}")
        labels: list[str] = []
        values = np.empty((n, d))
        for i in range(n):
            tokens = fh.readline().split()
            if len(tokens) != d + 1:
                raise ValueError(f"{path}: line {i + 2} malformed")
            labels.append(tokens[0])
            values[i] = [float(t) for t in tokens[1:]]
    return EmbeddingFile(labels=labels, values=values, kind=kind)


def write_embedding(path: str | Path, emb: EmbeddingFile) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{_HEADER} {len(emb.labels)} {emb.values.shape[1]} {emb.kind}\n")
        for label, row in zip(emb.labels, emb.values):
            fh.write(label)
            for v in row:
                fh.write(f" {v:.17g}")
            fh.write("\n")


def write_clustering(path: str | Path, labels: list[str], assignment) -> None:
    """One `label cluster_id` line per node; -1 marks an outlier."""
    if len(labels) != len(assignment):
        raise ValueError("need one cluster id per node label")
    with open(path, "w", encoding="utf-8") as fh:
        for label, cid in zip(labels, assignment):
            fh.write(f"{label} {int(cid)}\n")


def read_clustering(path: str | Path) -> dict[str, list[int]]:
    membership: dict[str, list[int]] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            tokens = line.split()
            if len(tokens) != 2:
                raise ValueError(f"{path}: line {line_no} needs 'label cluster_id'")
            membership.setdefault(tokens[0], []).append(int(tokens[1]))
    return membership
