"""Monte Carlo workbench for correlation-distance clustering of small samples.

Clusters the columns of small data matrices with single-linkage, DIANA,
and PAM over the Pearson correlation distance; measures each method's
error rate on synthetic linked-column data as noise grows; and compares
two discordant clustering results through an a-posteriori Bayes criterion.
"""
from .algorithms import (
    ALGORITHMS,
    Dendrogram,
    PamState,
    cluster_columns,
    cut,
    diana,
    pam,
    single_linkage,
)
from .bayes import (
    AlgorithmPosterior,
    ClusteringResult,
    ConditionalEstimate,
    Hypothesis,
    PosteriorReport,
    UndefinedPosteriorError,
    combine_posteriors,
    conditional,
    pooled_noise_sd,
    posterior,
)
from .core import (
    AllocationCount,
    DataMatrix,
    LinearLink,
    Partition,
    PartitionError,
    Pattern,
    PATTERN_IDS,
    canonicalize,
    cluster_leaders,
    count_assignments,
    format_partition,
    parse_partition,
    partitions_equal,
    pattern,
)
from .distance import (
    DegenerateColumnError,
    DistanceMatrix,
    corr_distance,
    distance_matrix,
    pearson,
)
from .harness import (
    SweepConfig,
    SweepPoint,
    SweepResult,
    default_sigma_grid,
    estimate_noise_sd,
    run_iteration,
    sweep,
)
from .synthesis import (
    FAMILIES,
    NoiseSpec,
    Seed,
    generate,
    generate_general,
    sample_standardized,
    substream,
)

__version__ = "0.1.0"
