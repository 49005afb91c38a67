"""Co-occurrence node embeddings (COVE) with evaluation tooling.

Node vectors are rows of the normalized, symmetrized, truncated diffusion
matrix of the walk transition matrix, computed exactly by matrix powers or
approximated from sampled random-walk corpora.  The package also carries
the surrounding experiment machinery: dimension reducers, clustering and
link-prediction evaluation, and a synthetic community-graph generator.
"""

from .abcd import AbcdGraph, AbcdParams, PowerLaw, generate, sample_truncated_powerlaw
from .cooccur import (
    CooccurrenceMatrix,
    Embedding,
    count_cooccurrences,
    distribution_embedding,
    exact_cove,
    hellinger_transform,
    sampled_cove,
)
from .errors import (
    CoveError,
    FormatError,
    GenerationError,
    NumericError,
    ParameterError,
    ParseError,
)
from .graph import (
    Graph,
    connected_components,
    parse_edge_list,
    row_normalized_adjacency,
    write_edge_list,
)
from .kmeans import KMeansParams, kmeans
from .linkpred import (
    LinkSplit,
    LogisticModel,
    LogRegConfig,
    auc,
    hadamard_features,
    split_edges,
    train_logreg,
)
from .metrics import (
    Clustering,
    ami,
    f_star_wo,
    jaccard,
    one_sided_weighted,
    outlier_aware_one_sided,
    read_clustering,
    write_clustering,
)
from .reducers import (
    ReducerSpec,
    read_embedding,
    spectral_embedding,
    svd_reduce,
    write_embedding,
)
from .walks import (
    WalkCorpus,
    WalkParams,
    build_corpus,
    sample_biased_walk,
    sample_standard_walk,
)

__version__ = "0.1.0"
