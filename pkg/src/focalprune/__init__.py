"""focalprune: prune large model ensembles with focal diversity metrics.

Operates purely on recorded per-model prediction logs: load (or generate) a
prediction matrix, score candidate sub-ensembles with baseline or focal
diversity metrics, prune hierarchically to a desired team size, and evaluate
the selections against an exhaustive accuracy oracle.
"""

from .dataset import (
    DataFormatError,
    NegativeSampleSet,
    PredictionDataset,
    Team,
    canonical_csv,
    count_teams,
    enumerate_teams,
    load_predictions,
    make_team,
    member_accuracies,
    negative_sample_set,
    negative_sample_sets,
    team_label,
    write_confidences,
    write_predictions,
)
from .diversity import (
    BASELINE_METRICS,
    PairwiseCounts,
    baseline_score_table,
    binary_disagreement,
    cohens_kappa_diversity,
    generalized_diversity,
    kw_variance,
    pairwise_counts,
    team_diversity,
)
from .evaluation import (
    OracleTable,
    PruneQuality,
    VOTING_METHODS,
    brute_force_oracle,
    cost_reduction,
    ensemble_accuracy,
    ensemble_predict,
    ensemble_predictions,
    prune_quality,
)
from .focal import (
    FOCAL_METRICS,
    FocalGroup,
    FocalScoreTable,
    accuracy_rank_weights,
    compute_focal_table,
    focal_negative_correlation,
    scale_group,
)
from .pruning import (
    DEFAULT_PRUNE_FRACTION,
    MeanThresholdResult,
    PruneSet,
    SelectionResult,
    consensus_vote,
    contains_pruned_subset,
    default_target_size,
    hq_prune,
    mean_threshold_prune,
)
from .simulation import (
    CorrelatedErrorSpec,
    SimulationResult,
    SyntheticSpec,
    generate_clustered,
    generate_synthetic,
    predicted_error_ratio,
    simulate_correlated_errors,
)

__version__ = "0.1.0"
