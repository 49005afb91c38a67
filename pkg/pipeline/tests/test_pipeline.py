"""Harness tests plus the external-pipeline acceptance checks.

The slow acceptance test drives the full comparison (UMAP + HDBSCAN sweep
versus SVD + k-means) through the primary CLI on synthetic graphs; expect
several minutes of runtime.
"""

import os
import subprocess

import numpy as np
import pytest

from cove_pipeline.cli import main as pipeline_main
from cove_pipeline.harness import (
    PipelineError,
    PipelineSpec,
    cluster_external,
    reduce_external,
    score_fstar,
    sweep_ceiling,
    sweep_min_cluster_size,
)
from cove_pipeline.interchange import (
    EmbeddingFile,
    read_clustering,
    read_embedding,
    write_clustering,
    write_embedding,
)


def cove(*args: str) -> str:
    proc = subprocess.run(
        ["cove", *args], capture_output=True, text=True, check=True
    )
    return proc.stdout


def blob_embedding(path, per_blob=40, dim=4, gap=9.0, seed=3):
    rng = np.random.default_rng(seed)
    values = np.vstack(
        [rng.normal(0, 0.4, (per_blob, dim)), rng.normal(gap, 0.4, (per_blob, dim))]
    )
    labels = [f"n{i}" for i in range(2 * per_blob)]
    write_embedding(path, EmbeddingFile(labels=labels, values=values, kind="euclidean"))
    return labels


def test_sweep_ceiling_matches_published_bounds():
    ok = sweep_ceiling(115) == 102
    print(f"[{'PASS' if ok else 'FAIL'}] sweep bound: ceiling(115) = "
          f"{sweep_ceiling(115)} (expected 102)")
    assert ok
    assert sweep_ceiling(236) == 118
    assert sweep_ceiling(1005) == 149
    assert sweep_ceiling(23752) == 218


def test_interchange_round_trip(tmp_path):
    path = tmp_path / "emb.tsv"
    values = np.array([[1 / 3, 1e-300], [np.pi, -2.5]])
    write_embedding(path, EmbeddingFile(["a", "b"], values, "euclidean"))
    back = read_embedding(path)
    np.testing.assert_array_equal(back.values, values)
    assert back.labels == ["a", "b"]
    assert back.kind == "euclidean"


def test_reduce_external_shape_and_determinism(tmp_path):
    src = tmp_path / "blobs.tsv"
    labels = blob_embedding(src)
    out_a = tmp_path / "a.tsv"
    out_b = tmp_path / "b.tsv"
    spec = PipelineSpec(reducer="umap", dim=2, input_path=str(src), seed=11)
    reduce_external(spec, out_a)
    reduce_external(spec, out_b)
    emb = read_embedding(out_a)
    assert emb.labels == labels
    assert emb.values.shape == (len(labels), 2)
    assert emb.kind == "euclidean"
    assert out_a.read_bytes() == out_b.read_bytes()


def test_reduce_external_rejects_distribution_rows(tmp_path):
    src = tmp_path / "dist.tsv"
    src.write_text("COVE-EMB 2 2 distribution\na 1 0\nb 0 1\n")
    with pytest.raises(PipelineError, match="hellinger"):
        reduce_external(PipelineSpec(reducer="umap", dim=2, input_path=str(src)), tmp_path / "x.tsv")


def test_umaple_uses_spectral_start(tmp_path):
    edges = tmp_path / "ring.edges"
    edges.write_text("".join(f"{i} {(i + 1) % 40}\n" for i in range(40)))
    emb = tmp_path / "hell.tsv"
    cove("embed", "--input", str(edges), "--exact", "--window", "3",
         "--hellinger", "--out", str(emb))
    out = tmp_path / "umaple.tsv"
    spec = PipelineSpec(
        reducer="umaple", dim=2, input_path=str(emb), graph_path=str(edges), seed=5
    )
    reduce_external(spec, out)
    reduced = read_embedding(out)
    assert reduced.values.shape == (40, 2)


def test_umaple_surfaces_disconnected_graph_error(tmp_path):
    edges = tmp_path / "two.edges"
    lines = [f"a{i} a{(i + 1) % 21}" for i in range(20)] + ["b0 b1", "b1 b2", "b0 b2"]
    edges.write_text("\n".join(lines) + "\n")
    emb = tmp_path / "hell.tsv"
    cove("embed", "--input", str(edges), "--exact", "--window", "2",
         "--hellinger", "--out", str(emb))
    spec = PipelineSpec(
        reducer="umaple", dim=2, input_path=str(emb), graph_path=str(edges), seed=0
    )
    with pytest.raises(PipelineError, match="missing node"):
        reduce_external(spec, tmp_path / "x.tsv")


def test_cluster_external_separates_blobs(tmp_path):
    src = tmp_path / "blobs.tsv"
    labels = blob_embedding(src, per_blob=50, dim=2)
    out = tmp_path / "pred.txt"
    info = cluster_external(src, 15, out)
    assert info["n_clusters"] == 2
    membership = read_clustering(out)
    assert len(membership) == len(labels)
    assert membership["n0"] == membership["n1"]
    assert membership["n0"] != membership[labels[-1]]


def test_cluster_external_handles_identical_points(tmp_path):
    src = tmp_path / "same.tsv"
    labels = [f"p{i}" for i in range(30)]
    write_embedding(
        src, EmbeddingFile(labels, np.ones((30, 2)), "euclidean")
    )
    info = cluster_external(src, 5, tmp_path / "pred.txt")
    assert info["n_clusters"] >= 0  # no crash; single cluster or all-outlier


def test_cluster_cli_echoes_default_min_size(tmp_path, capsys):
    src = tmp_path / "blobs.tsv"
    blob_embedding(src)
    code = pipeline_main(
        ["cluster", "--in", str(src), "--out", str(tmp_path / "pred.txt")]
    )
    captured = capsys.readouterr()
    assert code == 0
    assert "min_cluster_size=15" in captured.err


def test_sweep_prediction_bypass_scores_one(tmp_path):
    src = tmp_path / "blobs.tsv"
    labels = blob_embedding(src, per_blob=20)
    truth = tmp_path / "truth.txt"
    write_clustering(truth, labels, [0] * 20 + [1] * 20)
    result = sweep_min_cluster_size(src, truth, prediction_bypass=truth)
    assert result["best"][1] == 1.0
    assert all(score == 1.0 for _, score in result["curve"])


def test_sweep_reports_max_of_curve(tmp_path):
    src = tmp_path / "blobs.tsv"
    labels = blob_embedding(src, per_blob=12, dim=2)
    truth = tmp_path / "truth.txt"
    write_clustering(truth, labels, [0] * 12 + [1] * 12)
    result = sweep_min_cluster_size(src, truth, workers=2)
    scores = [score for _, score in result["curve"]]
    assert result["best"][1] == max(scores)
    assert len(result["curve"]) == sweep_ceiling(24) - 1


def test_missing_primary_binary_is_actionable(tmp_path, monkeypatch):
    monkeypatch.setenv("COVE_BIN", "/nonexistent/cove")
    src = tmp_path / "blobs.tsv"
    labels = blob_embedding(src, per_blob=20)
    truth = tmp_path / "truth.txt"
    write_clustering(truth, labels, [0] * 40)
    with pytest.raises(PipelineError, match="pip install"):
        sweep_min_cluster_size(src, truth, prediction_bypass=truth)


def test_spec_validation():
    with pytest.raises(PipelineError):
        PipelineSpec(reducer="tsne", dim=2)
    with pytest.raises(PipelineError):
        PipelineSpec(reducer="umap", dim=0)


def test_cli_exit_codes(tmp_path, capsys):
    assert pipeline_main(["bogus"]) == 1
    capsys.readouterr()
    assert pipeline_main(
        ["cluster", "--in", str(tmp_path / "missing.tsv"), "--out", str(tmp_path / "o")]
    ) == 2


@pytest.mark.slow
def test_acceptance_pipeline_parity(tmp_path):
    """UMAP + HDBSCAN sweep vs SVD + k-means on the same synthetic instances.

    Needs enough ground-truth communities to exceed the 16 retained
    dimensions, hence the instance size; several minutes of runtime.
    """
    km_scores = []
    umap_scores = []
    for seed in range(3):
        work = tmp_path / f"seed{seed}"
        work.mkdir()
        edges = work / "g.edges"
        truth = work / "g.truth"
        cove("generate", "--n", "2000", "--xi", "0.3", "--seed", str(seed),
             "--out-edges", str(edges), "--out-truth", str(truth))
        hell = work / "hell.tsv"
        cove("embed", "--input", str(edges), "--exact", "--window", "6",
             "--hellinger", "--out", str(hell))

        svd = work / "svd.tsv"
        cove("reduce", "--method", "svd", "--dim", "16", "--in", str(hell),
             "--out", str(svd), "--seed", str(seed))
        k = len({c for ids in read_clustering(truth).values() for c in ids if c >= 0})
        pred_km = work / "kmeans.txt"
        cove("kmeans", "--in", str(svd), "--k", str(k), "--seed", str(seed),
             "--out", str(pred_km))
        km_scores.append(score_fstar(pred_km, truth))

        umap_out = work / "umap.tsv"
        reduce_external(
            PipelineSpec(reducer="umap", dim=16, input_path=str(hell), seed=seed),
            umap_out,
        )
        result = sweep_min_cluster_size(umap_out, truth, workers=2)
        umap_scores.append(result["best"][1])

    km_mean = float(np.mean(km_scores))
    umap_mean = float(np.mean(umap_scores))
    ok = umap_mean >= km_mean
    print(
        f"[{'PASS' if ok else 'FAIL'}] pipeline parity (xi=0.3, n=2000): "
        f"umap+hdbscan-sweep mean {umap_mean:.4f} vs svd+kmeans mean "
        f"{km_mean:.4f} over 3 seeds; "
        f"umap {[round(s, 3) for s in umap_scores]}, "
        f"kmeans {[round(s, 3) for s in km_scores]}"
    )
    assert ok
