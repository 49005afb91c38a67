"""External UMAP/HDBSCAN plugged into the primary CLI's file formats.

Reduction runs the vendored Node UMAP tool; the umaple variant first asks
the primary CLI for a graph spectral embedding and hands it over as the
initialization.  Clustering runs HDBSCAN and writes the clustering format.
Every quality score is obtained by shelling out to `cove eval-cluster`,
never computed here, so the two components cannot drift.
"""

from __future__ import annotations

import math
import multiprocessing
import os
import subprocess
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

from .interchange import read_embedding, write_clustering

_JS_TOOL = Path(__file__).resolve().parents[2] / "js" / "umap_tool.js"


class PipelineError(Exception):
    pass


@dataclass
class PipelineSpec:
    reducer: str = "umap"
    dim: int = 16
    input_path: str = ""
    graph_path: str | None = None
    seed: int = 0
    min_cluster_size: int = 15
    n_neighbors: int = 15
    min_dist: float = 0.1

    def __post_init__(self):
        if self.reducer not in ("umap", "umaple"):
            raise PipelineError(f"reducer must be umap or umaple, got {self.reducer!r}")
        if self.dim < 1:
            raise PipelineError(f"dim must be >= 1, got {self.dim}")


def cove_binary() -> str:
    return os.environ.get("COVE_BIN", "cove")


def run_cove(args: list[str]) -> str:
    """Primary CLI call; raises with the tool's stderr on failure."""
    bin_ = cove_binary()
    try:
        proc = subprocess.run(
            [bin_, *args], capture_output=True, text=True, check=False
        )
    except FileNotFoundError:
        raise PipelineError(
            f"primary CLI {bin_!r} not found on PATH; install it with "
            "'pip install -e .' in the repository root (or set COVE_BIN)"
        ) from None
    if proc.returncode != 0:
        raise PipelineError(
            f"'{bin_} {' '.join(args)}' exited {proc.returncode}: "
            f"{proc.stderr.strip()}"
        )
    return proc.stdout


def reduce_external(spec: PipelineSpec, out_path: str | Path) -> None:
    """Run the external UMAP over an interchange file.

    For umaple, the primary CLI's spectral embedding of the graph seeds the
    layout; its node set must cover the embedding's nodes exactly, so a
    disconnected graph surfaces here as a missing-node error.
    """
    if not _JS_TOOL.exists():
        raise PipelineError(f"UMAP tool missing at {_JS_TOOL}")
    if not (_JS_TOOL.parent / "node_modules" / "umap-js").exists():
        raise PipelineError(
            "external reducer unavailable: run 'npm install' in pipeline/js"
        )
    emb = read_embedding(spec.input_path)
    if emb.kind == "distribution":
        raise PipelineError(
            "reducer input must be hellinger or euclidean rows; re-export "
            "with 'cove embed ... --hellinger'"
        )

    args = [
        "node", str(_JS_TOOL),
        "--in", str(spec.input_path), "--out", str(out_path),
        "--dim", str(spec.dim), "--seed", str(spec.seed),
        "--n-neighbors", str(spec.n_neighbors), "--min-dist", str(spec.min_dist),
    ]
    with tempfile.TemporaryDirectory(prefix="cove-umaple-") as tmp:
        if spec.reducer == "umaple":
            if not spec.graph_path:
                raise PipelineError("umaple needs the graph edge list for its start")
            init_path = os.path.join(tmp, "spectral.tsv")
            run_cove([
                "reduce", "--method", "spectral", "--dim", str(spec.dim),
                "--in", str(spec.graph_path), "--out", init_path,
            ])
            args += ["--init", init_path]
        print(
            f"reduce config: reducer={spec.reducer} dim={spec.dim} "
            f"nNeighbors={spec.n_neighbors} minDist={spec.min_dist} "
            f"seed={spec.seed}",
            file=sys.stderr,
        )
        proc = subprocess.run(args, capture_output=True, text=True)
    if proc.returncode != 0:
        raise PipelineError(f"UMAP tool failed: {proc.stderr.strip()}")


def cluster_external(
    embedding_path: str | Path, min_cluster_size: int, out_path: str | Path
) -> dict:
    """HDBSCAN labels written in the clustering format; -1 stays an outlier."""
    if min_cluster_size < 2:
        raise PipelineError(
            f"minimum cluster size must be >= 2, got {min_cluster_size}"
        )
    try:
        from sklearn.cluster import HDBSCAN
    except ImportError:
        raise PipelineError(
            "external clusterer unavailable: pip install scikit-learn>=1.3"
        ) from None
    emb = read_embedding(embedding_path)
    print(
        f"cluster config: algorithm=hdbscan min_cluster_size={min_cluster_size}",
        file=sys.stderr,
    )
    # the tool couples min_samples to min_cluster_size; cap it at n-1 so
    # sweep candidates larger than the data simply find no clusters
    n_samples = emb.values.shape[0]
    clusterer = HDBSCAN(
        min_cluster_size=int(min(min_cluster_size, max(2, n_samples))),
        min_samples=int(min(min_cluster_size, max(1, n_samples - 1))),
    )
    labels = clusterer.fit_predict(emb.values)
    write_clustering(out_path, emb.labels, labels)
    n_clusters = len({c for c in labels if c >= 0})
    return {
        "n_clusters": n_clusters,
        "n_outliers": int((labels < 0).sum()),
        "min_cluster_size": min_cluster_size,
    }


def score_fstar(pred_path: str | Path, truth_path: str | Path) -> float:
    out = run_cove([
        "eval-cluster", "--pred", str(pred_path), "--truth", str(truth_path),
        "--metric", "fstar",
    ])
    return float(out.strip().split("\t")[-1])


def sweep_ceiling(n: int) -> int:
    """Largest minimum-cluster-size candidate: floor(15 * log2 n)."""
    if n < 2:
        raise PipelineError(f"sweep needs at least 2 nodes, got {n}")
    return math.floor(15 * math.log2(n))


def _sweep_worker(task: tuple[str, int, str, str]) -> tuple[int, float]:
    embedding_path, size, out_path, truth_path = task
    cluster_external(embedding_path, size, out_path)
    return size, score_fstar(out_path, truth_path)


def sweep_min_cluster_size(
    embedding_path: str | Path,
    truth_path: str | Path,
    workers: int | None = None,
    prediction_bypass: str | Path | None = None,
) -> dict:
    """Score every candidate minimum cluster size from 2 to the ceiling.

    Candidates cluster in independent worker subprocesses and merge in
    candidate order.  `prediction_bypass` scores a fixed clustering file
    for every candidate instead of running the clusterer (a testing hook).
    Returns the full curve and its argmax (smallest size on ties).
    """
    emb = read_embedding(embedding_path)
    candidates = list(range(2, sweep_ceiling(len(emb.labels)) + 1))
    if not candidates:
        raise PipelineError("sweep range is empty")

    with tempfile.TemporaryDirectory(prefix="cove-sweep-") as tmp:
        if prediction_bypass is not None:
            curve = [
                (size, score_fstar(prediction_bypass, truth_path))
                for size in candidates
            ]
        else:
            tasks = [
                (
                    str(embedding_path),
                    size,
                    os.path.join(tmp, f"pred_{size}.txt"),
                    str(truth_path),
                )
                for size in candidates
            ]
            n_workers = workers or min(len(tasks), os.cpu_count() or 1)
            ctx = multiprocessing.get_context("spawn")
            with ctx.Pool(n_workers) as pool:
                curve = pool.map(_sweep_worker, tasks)
    best = max(curve, key=lambda point: point[1])
    return {"best": best, "curve": curve}
