"""stress-gauge: quality metrics for dimensionality-reduction embeddings.

Implements five stress measures over pairwise distances (raw, normalized,
Shepard goodness, non-metric, and scale-normalized stress), reference
embedders (classical MDS, SMACOF, exact t-SNE, random baseline), and an
experiment harness that tallies how the metrics rank the techniques at
different embedding scales.
"""

from .core import (
    CondensedDistances,
    DataMatrix,
    EmbeddingMatrix,
    ShepardPairs,
    condensed_index,
    pairwise_distances,
    scale_embedding,
    shepard_pairs,
)
from .embedders import (
    EmbedderConfig,
    Technique,
    classical_mds,
    random_embedding,
    run_embedder,
    smacof_mds,
    tsne,
)
from .errors import (
    DegenerateEmbedding,
    DegenerateHighSpace,
    EmptyInput,
    EmptyTally,
    InvalidData,
    InvalidRequest,
    InvalidScale,
    InvalidWeight,
    NumericalFailure,
    ParseError,
    ShapeMismatch,
    StressGaugeError,
    UndefinedCorrelation,
)
from .experiments import (
    AgreementMatrix,
    ExperimentAResult,
    OrderingTally,
    RankTable,
    expected_order_rate,
    metric_agreement,
    rerank_embeddings,
    run_experiment_a,
)
from .io_reports import (
    DatasetSpec,
    MetricRecord,
    Provenance,
    ReportDocument,
    TallyRecord,
    generate_synthetic,
    load_csv_matrix,
    load_dataset,
    load_embedding_csv,
    normalize_columns,
    read_report,
    write_embedding_csv,
    write_report,
)
from .metrics import (
    CurveSample,
    MetricKind,
    OptimalScale,
    compute_metric,
    non_metric_stress,
    normalized_stress,
    optimal_scale,
    raw_stress,
    scale_normalized_stress,
    shepard_goodness,
    stress_scale_curve,
)
from .monotone import (
    IsotonicFit,
    isotonic_fit,
    rank_average_ties,
    sort_for_isotonic,
    spearman_rho,
)

__version__ = "0.1.0"
