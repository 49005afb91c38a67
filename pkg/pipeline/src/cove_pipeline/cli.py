"""Driver for the external-tool pipeline.

Subcommands mirror the harness operations; results are TSV on stdout, and
every run echoes its configuration on stderr.  Exit codes: 0 success, 1
usage error, 2 pipeline/tool error.
"""

from __future__ import annotations

import argparse
import sys

from .harness import (
    PipelineError,
    PipelineSpec,
    cluster_external,
    reduce_external,
    sweep_min_cluster_size,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cove-pipeline", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", help="external UMAP (optionally spectral-initialized)")
    p.add_argument("--method", choices=["umap", "umaple"], required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--graph", help="edge list, required for umaple")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-neighbors", type=int, default=15)
    p.add_argument("--min-dist", type=float, default=0.1)
    p.add_argument("--out", required=True)

    p = sub.add_parser("cluster", help="external HDBSCAN")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--min-size", type=int, default=15)
    p.add_argument("--out", required=True)

    p = sub.add_parser("sweep", help="minimum-cluster-size sweep scored against truth")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--out-curve", help="write the full size/score curve as TSV")
    p.add_argument("--workers", type=int, default=None)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "reduce":
            spec = PipelineSpec(
                reducer=args.method,
                dim=args.dim,
                input_path=args.infile,
                graph_path=args.graph,
                seed=args.seed,
                n_neighbors=args.n_neighbors,
                min_dist=args.min_dist,
            )
            reduce_external(spec, args.out)
            print(f"{args.dim}\teuclidean\t{args.out}")
        elif args.command == "cluster":
            info = cluster_external(args.infile, args.min_size, args.out)
            print(f"{info['n_clusters']}\t{info['n_outliers']}")
        else:
            result = sweep_min_cluster_size(
                args.infile, args.truth, workers=args.workers
            )
            if args.out_curve:
                with open(args.out_curve, "w", encoding="utf-8") as fh:
                    for size, score in result["curve"]:
                        fh.write(f"{size}\t{score:.17g}\n")
            best_size, best_score = result["best"]
            print(f"{best_size}\t{best_score:.17g}")
        return 0
    except (PipelineError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
