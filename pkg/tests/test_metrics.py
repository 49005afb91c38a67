import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cove.errors import FormatError, ParameterError
from cove.metrics import (
    Clustering,
    ami,
    f_star_wo,
    jaccard,
    one_sided_weighted,
    outlier_aware_one_sided,
    read_clustering,
    write_clustering,
)


def clustering(clusters, outliers=(), n=None):
    sets = tuple(frozenset(c) for c in clusters)
    if n is None:
        n = max((max(c) for c in sets if c), default=-1) + 1
        if outliers:
            n = max(n, max(outliers) + 1)
    return Clustering(clusters=sets, outliers=frozenset(outliers), universe_n=n)


# brute-force re-evaluation of the three scoring formulas, kept deliberately
# naive so it cannot share bugs with the implementation
def brute_jaccard(a, b):
    a, b = set(a), set(b)
    if not a and not b:
        return 1.0
    inter = len([x for x in a if x in b])
    union = len(a) + len(b) - inter
    return inter / union


def brute_one_sided(c1, c2):
    total = sum(len(c) for c in c1.clusters)
    if total == 0:
        return 0.0
    acc = 0.0
    for c in c1.clusters:
        best = 0.0
        for other in c2.clusters:
            best = max(best, brute_jaccard(c, other))
        acc += len(c) * best
    return acc / total


def brute_outlier_aware(c1, c2):
    n = c1.universe_n
    w = len(c1.outliers) / n
    return w * brute_jaccard(c1.outliers, c2.outliers) + (1 - w) * brute_one_sided(
        c1, c2
    )


def brute_f_star_wo(c1, c2):
    return 0.5 * brute_outlier_aware(c1, c2) + 0.5 * brute_outlier_aware(c2, c1)


def random_clustering(n, rng):
    """Random clustering with outliers and occasional overlaps."""
    labels = rng.integers(0, rng.integers(1, 6), size=n)
    outlier_mask = rng.random(n) < 0.2
    clusters = {}
    for v in range(n):
        if outlier_mask[v]:
            continue
        clusters.setdefault(int(labels[v]), set()).add(v)
    # sprinkle overlap
    cluster_list = [set(c) for c in clusters.values()]
    if cluster_list:
        for v in range(n):
            if not outlier_mask[v] and rng.random() < 0.15:
                cluster_list[rng.integers(len(cluster_list))].add(v)
    cluster_list = [c for c in cluster_list if c]
    if not cluster_list:
        outlier_mask[:] = True
    return Clustering(
        clusters=tuple(frozenset(c) for c in cluster_list),
        outliers=frozenset(int(v) for v in np.flatnonzero(outlier_mask)),
        universe_n=n,
    )


def test_jaccard_fixtures():
    assert jaccard({1, 2}, {2, 3}) == pytest.approx(1 / 3)
    assert jaccard({1, 2}, {1, 2}) == 1.0
    assert jaccard({1}, {2}) == 0.0
    assert jaccard(set(), set()) == 1.0
    assert jaccard(set(), {1}) == 0.0


def test_one_sided_split_vs_merged():
    c1 = clustering([{0, 1}, {2, 3}])
    c2 = clustering([{0, 1, 2, 3}])
    assert one_sided_weighted(c1, c2) == pytest.approx(0.5, abs=1e-12)
    assert one_sided_weighted(c2, c1) == pytest.approx(0.5, abs=1e-12)
    assert one_sided_weighted(c1, c1) == 1.0


def test_outlier_aware_fixture():
    c1 = clustering([{0, 1, 2}], outliers={3})
    c2 = clustering([{0, 1, 2, 3}])
    assert outlier_aware_one_sided(c1, c2) == pytest.approx(0.5625, abs=1e-12)
    assert outlier_aware_one_sided(c2, c1) == pytest.approx(0.75, abs=1e-12)


def test_outlier_aware_degenerate_cases():
    a = clustering([{0, 1}], outliers=set(), n=2)
    b = clustering([{0}, {1}], outliers=set(), n=2)
    assert outlier_aware_one_sided(a, b) == one_sided_weighted(a, b)
    all_out_1 = clustering([], outliers={0, 1}, n=2)
    all_out_2 = clustering([], outliers={0, 1}, n=2)
    assert outlier_aware_one_sided(all_out_1, all_out_2) == 1.0


def test_f_star_wo_fixture():
    c1 = clustering([{0, 1, 2}], outliers={3})
    c2 = clustering([{0, 1, 2, 3}])
    assert f_star_wo(c1, c2) == pytest.approx(0.65625, abs=1e-12)
    assert f_star_wo(c1, c1) == 1.0


def test_f_star_wo_symmetric_and_bounded():
    rng = np.random.default_rng(5)
    for _ in range(50):
        n = int(rng.integers(2, 20))
        a = random_clustering(n, rng)
        b = random_clustering(n, rng)
        s = f_star_wo(a, b)
        assert 0.0 <= s <= 1.0
        assert s == f_star_wo(b, a)


def test_f_star_wo_matches_brute_force_on_200_random_pairs():
    rng = np.random.default_rng(123)
    for _ in range(200):
        n = int(rng.integers(2, 21))
        a = random_clustering(n, rng)
        b = random_clustering(n, rng)
        assert f_star_wo(a, b) == pytest.approx(brute_f_star_wo(a, b), abs=1e-12)


def test_universe_mismatch_rejected():
    a = clustering([{0, 1}], n=2)
    b = clustering([{0, 1, 2}], n=3)
    with pytest.raises(ParameterError, match="universe"):
        f_star_wo(a, b)


def test_clustering_validation():
    with pytest.raises(ParameterError, match="non-empty"):
        clustering([set()], n=1)
    with pytest.raises(ParameterError, match="disjoint"):
        Clustering(
            clusters=(frozenset({0}),), outliers=frozenset({0}), universe_n=1
        )
    with pytest.raises(ParameterError, match="every node"):
        clustering([{0}], n=2)


def test_ami_identical_and_relabeled():
    p = Clustering.from_labels([0, 0, 1, 1, 2, 2])
    q = Clustering.from_labels([5, 5, 9, 9, 7, 7])
    assert ami(p, p) == 1.0
    assert ami(p, q) == 1.0


def test_ami_every_partition_scores_one_against_itself():
    rng = np.random.default_rng(3)
    for _ in range(20):
        n = int(rng.integers(1, 30))
        p = Clustering.from_labels(rng.integers(0, 5, size=n))
        assert ami(p, p) == 1.0
    singletons = Clustering.from_labels(list(range(8)))
    assert ami(singletons, singletons) == 1.0
    lump = Clustering.from_labels([0] * 8)
    assert ami(lump, lump) == 1.0


def test_ami_independent_partitions_score_near_zero():
    vals = []
    for seed in range(20):
        rng = np.random.default_rng(seed)
        a = Clustering.from_labels(rng.integers(0, 4, size=200))
        b = Clustering.from_labels(rng.integers(0, 4, size=200))
        vals.append(ami(a, b))
    assert np.mean(np.abs(vals)) < 0.05


def test_ami_invariant_under_relabeling():
    rng = np.random.default_rng(11)
    base = rng.integers(0, 5, size=60)
    other = rng.integers(0, 3, size=60)
    p = Clustering.from_labels(base)
    q = Clustering.from_labels(other)
    perm = rng.permutation(7)
    p_relab = Clustering.from_labels([int(perm[x]) for x in base])
    assert ami(p, q) == pytest.approx(ami(p_relab, q), abs=1e-12)


def test_ami_degenerate_mismatch_is_zero():
    lump = Clustering.from_labels([0, 0, 0, 0])
    split = Clustering.from_labels([0, 0, 1, 1])
    assert ami(lump, split) == 0.0


def test_ami_agreement_beats_disagreement():
    truth = Clustering.from_labels([0] * 10 + [1] * 10)
    close = Clustering.from_labels([0] * 9 + [1] * 11)
    far = Clustering.from_labels(list(np.arange(20) % 2))
    assert ami(truth, close) > ami(truth, far)


def test_ami_rejects_non_partitions():
    with_outlier = clustering([{0, 1}], outliers={2})
    proper = clustering([{0, 1, 2}])
    with pytest.raises(ParameterError, match="f_star_wo"):
        ami(with_outlier, proper)
    overlapping = clustering([{0, 1}, {1, 2}], n=3)
    with pytest.raises(ParameterError, match="f_star_wo"):
        ami(overlapping, proper)


def test_clustering_file_round_trip():
    c = clustering([{0, 2}, {1, 2}], outliers={3})
    labels = ("a", "b", "c", "d")
    buf = io.StringIO()
    write_clustering(c, labels, buf)
    buf.seek(0)
    back, order = read_clustering(buf, labels)
    assert set(back.clusters) == set(c.clusters)
    assert back.outliers == c.outliers
    assert order == labels


def test_clustering_file_errors():
    with pytest.raises(FormatError, match="tokens"):
        read_clustering(io.StringIO("a 1 2\n"))
    with pytest.raises(FormatError, match="integer"):
        read_clustering(io.StringIO("a x\n"))
    with pytest.raises(FormatError, match="different nodes"):
        read_clustering(io.StringIO("a 0\n"), label_order=("a", "b"))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(0, 4), min_size=1, max_size=30), st.randoms())
def test_ami_self_is_always_one(labels, _):
    p = Clustering.from_labels(labels)
    assert ami(p, p) == 1.0
