"""Reference pipeline over external UMAP and HDBSCAN tools."""

from .harness import (
    PipelineError,
    PipelineSpec,
    cluster_external,
    reduce_external,
    score_fstar,
    sweep_ceiling,
    sweep_min_cluster_size,
)

__version__ = "0.1.0"
