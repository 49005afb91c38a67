"""Batch command-line interface.

Subcommands cover the full pipeline: generate a synthetic benchmark graph,
sample walk corpora, build exact or sampled co-occurrence embeddings,
reduce them, cluster, score clusterings, and run the link-prediction
protocol.  Machine-readable results go to stdout as one TSV line;
diagnostics and the resolved configuration go to stderr.  Exit codes:
0 success, 1 usage error, 2 data or numeric error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import abcd, cooccur, linkpred as lp, metrics, reducers, walks
from .errors import CoveError, ParameterError
from .kmeans import KMeansParams, kmeans as run_kmeans
from .graph import Graph, connected_components, parse_edge_list, write_edge_list


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _echo_config(args: argparse.Namespace) -> None:
    resolved = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    print(f"config: {resolved}", file=sys.stderr)


def _require_file(path: str) -> Path:
    p = Path(path)
    if not p.is_file():
        raise CoveError(f"input file not found: {path}")
    return p


def _load_graph(path: str) -> Graph:
    with open(_require_file(path), "r", encoding="utf-8") as fh:
        return parse_edge_list(fh)


def _thread_cap(args: argparse.Namespace) -> None:
    cap = args.threads or os.environ.get("COVE_THREADS")
    if cap is None:
        return
    cap = int(cap)
    if cap < 1:
        raise ParameterError(f"--threads must be >= 1, got {cap}")
    try:
        from threadpoolctl import threadpool_limits

        threadpool_limits(limits=cap)
    except ImportError:
        pass  # single-process numpy; results do not depend on the cap


def _add_walk_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--walks", type=int, default=10, help="walks per node")
    p.add_argument("--length", type=int, default=40, help="walk length in nodes")
    p.add_argument("--p", type=float, default=1.0, help="return weight")
    p.add_argument("--q", type=float, default=1.0, help="in-out weight")


def _cmd_generate(args) -> int:
    params = abcd.AbcdParams(n=args.n, xi=args.xi, seed=args.seed)
    result = abcd.generate(params)
    with open(args.out_edges, "w", encoding="utf-8") as fh:
        write_edge_list(result.graph, fh)
    metrics.write_clustering(
        result.ground_truth, result.graph.labels, args.out_truth
    )
    print(
        f"{result.graph.n}\t{result.graph.total_edges}\t"
        f"{len(result.ground_truth.clusters)}"
    )
    return 0


def _cmd_walk(args) -> int:
    g = _load_graph(args.input)
    params = walks.WalkParams(
        gamma=args.walks, length=args.length, p=args.p, q=args.q, seed=args.seed
    )
    corpus = walks.build_corpus(g, params)
    with open(args.out, "w", encoding="utf-8") as fh:
        walks.write_corpus(corpus, g.labels, fh)
    total = sum(len(w) for w in corpus.walks)
    print(f"{len(corpus.walks)}\t{total}")
    return 0


def _build_embedding(g: Graph, args) -> cooccur.Embedding:
    if args.exact:
        mat = cooccur.exact_cove(g, args.window)
    else:
        params = walks.WalkParams(
            gamma=args.walks, length=args.length, p=args.p, q=args.q, seed=args.seed
        )
        corpus = walks.build_corpus(g, params)
        counts = cooccur.count_cooccurrences(corpus, args.window)
        mat = cooccur.sampled_cove(counts)
    if args.hellinger:
        return cooccur.hellinger_transform(mat, g.labels)
    return cooccur.distribution_embedding(mat, g.labels)


def _cmd_embed(args) -> int:
    g = _load_graph(args.input)
    emb = _build_embedding(g, args)
    reducers.write_embedding(emb, args.out)
    print(f"{emb.n}\t{emb.d}\t{emb.kind}")
    return 0


def _cmd_reduce(args) -> int:
    spec = reducers.ReducerSpec(method=args.method, dim=args.dim, seed=args.seed)
    if spec.method == "svd":
        emb = reducers.read_embedding(_require_file(args.infile))
        out = reducers.svd_reduce(emb, spec.dim, spec.seed)
    else:
        g = _load_graph(args.infile)
        comp = connected_components(g)
        n_comp = int(comp.max()) + 1 if g.n else 0
        if n_comp > 1:
            g, dropped = _largest_component(g, comp)
            print(
                f"graph has {n_comp} components; embedding the largest, "
                f"dropping {dropped} node(s)",
                file=sys.stderr,
            )
        out = reducers.spectral_embedding(g, spec.dim)
    reducers.write_embedding(out, args.out)
    print(f"{out.n}\t{out.d}\t{out.kind}")
    return 0


def _largest_component(g: Graph, comp: np.ndarray) -> tuple[Graph, int]:
    counts = np.bincount(comp)
    keep = int(np.argmax(counts))
    members = np.flatnonzero(comp == keep)
    remap = {int(v): i for i, v in enumerate(members)}
    edge_weights = {}
    for u, v, w in g.edges():
        if comp[u] == keep and comp[v] == keep:
            edge_weights[(remap[u], remap[v])] = w
    labels = [g.labels[int(v)] for v in members]
    from .graph import from_edges

    return from_edges(edge_weights, labels), g.n - len(members)


def _cmd_kmeans(args) -> int:
    emb = reducers.read_embedding(_require_file(args.infile))
    params = KMeansParams(k=args.k, restarts=args.restarts, seed=args.seed)
    clustering = run_kmeans(emb, params)
    metrics.write_clustering(clustering, emb.labels, args.out)
    print(f"{len(clustering.clusters)}\t{clustering.universe_n}")
    return 0


def _cmd_eval_cluster(args) -> int:
    truth_membership = metrics.read_membership(_require_file(args.truth))
    label_order = tuple(sorted(truth_membership))
    truth, _ = metrics.read_clustering(_require_file(args.truth), label_order)
    pred, _ = metrics.read_clustering(_require_file(args.pred), label_order)
    if args.metric == "fstar":
        value = metrics.f_star_wo(pred, truth)
    else:
        value = metrics.ami(pred, truth)
    print(f"{args.metric}\t{value:.17g}")
    return 0


def _cmd_linkpred(args) -> int:
    g = _load_graph(args.input)
    split = lp.split_edges(g, args.holdout, args.seed)
    emb = _build_embedding(split.train_graph, args)

    feat_train = lp.hadamard_features(
        emb, split.train_pos + split.train_neg
    )
    y_train = np.concatenate(
        [np.ones(len(split.train_pos)), np.zeros(len(split.train_neg))]
    )
    model = lp.train_logreg(feat_train, y_train)
    pos_scores = lp.predict_scores(model, lp.hadamard_features(emb, split.test_pos))
    neg_scores = lp.predict_scores(model, lp.hadamard_features(emb, split.test_neg))
    value = lp.auc(pos_scores, neg_scores)
    print(f"{args.seed}\t{value:.17g}\t{len(split.test_pos)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cove", description=__doc__)
    parser.add_argument("--threads", type=int, default=None, help="cap worker threads")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="synthetic community graph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--xi", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-edges", required=True)
    p.add_argument("--out-truth", required=True)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("walk", help="sample a walk corpus")
    p.add_argument("--input", required=True)
    _add_walk_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_walk)

    p = sub.add_parser("embed", help="co-occurrence embedding")
    p.add_argument("--input", required=True)
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--exact", action="store_true")
    mode.add_argument("--sampled", action="store_true")
    p.add_argument("--window", type=int, default=6, help="context radius")
    _add_walk_flags(p)
    p.add_argument("--hellinger", action="store_true", help="emit sqrt-transformed rows")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_embed)

    p = sub.add_parser("reduce", help="dimension reduction")
    p.add_argument("--method", choices=["svd", "spectral"], required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--in", dest="infile", required=True,
                   help="embedding file (svd) or edge list (spectral)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("kmeans", help="k-means clustering of an embedding")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--restarts", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_kmeans)

    p = sub.add_parser("eval-cluster", help="score a clustering against truth")
    p.add_argument("--pred", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--metric", choices=["fstar", "ami"], required=True)
    p.set_defaults(func=_cmd_eval_cluster)

    p = sub.add_parser("linkpred", help="edge holdout evaluation")
    p.add_argument("--input", required=True)
    p.add_argument("--holdout", type=float, default=0.05)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true")
    mode.add_argument("--sampled", action="store_true", default=True)
    p.add_argument("--window", type=int, default=6)
    _add_walk_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_linkpred, hellinger=True)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _thread_cap(args)
        _echo_config(args)
        return args.func(args)
    except CoveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
