"""Analysis toolkit for two-layer (rewarding/punitive) trust networks.

Signed, timestamped peer ratings are modeled as a directed weighted
temporal multigraph; the package measures its static structure (degree,
weight and reputation distributions, clustering against degree-preserving
nulls, neighbor-degree mixing, rank correlations), categorizes users by
received reputation, and follows the system through time (daily activity,
interevent statistics and burstiness, circadian/weekly profiles, Gini
concentration, top-k ranking stability, per-user trajectories).
"""

__version__ = "0.1.0"

from .categories import (
    CategoryLabel,
    CategoryStats,
    CategoryThresholds,
    categorize,
    category_summary,
    negative_fraction,
    reputation_vs_indegree_scatter,
)
from .distributions import Distribution, from_values, log_binned_ccdf
from .dynamics import (
    GiniPoint,
    Snapshot,
    StabilityPoint,
    Trajectory,
    TrajectorySelection,
    extended_jaccard,
    gini,
    gini_point,
    gini_series,
    plain_jaccard,
    snapshot_series,
    stability_step,
    top_k_lists,
    topk_stability_series,
    trajectories,
)
from .model import (
    EventLog,
    IngestError,
    IngestReport,
    Layer,
    LayerView,
    NodeMetrics,
    RatingEvent,
    SynthConfig,
    gettrust,
    ingest,
    latest_ratings,
    node_metrics,
    split_layers,
    synth_log,
    write_log_csv,
)
from .static import (
    DegreeSpectrum,
    NullModelResult,
    RankingReport,
    avg_neighbor_degree_spectrum,
    clustering_spectrum,
    configuration_null,
    kendall_tau,
    local_clustering,
    mean_clustering,
    ranked_users,
    ranking_report,
    reputation_by_indegree,
    reputation_distributions,
    undirected_projection,
    weight_distribution,
)
from .temporal import (
    AnnotationWindow,
    DailyCount,
    YearlyBurstiness,
    activity_calendar,
    annotations_for,
    burstiness,
    circadian_profile,
    daily_series,
    day_of,
    interevent_distribution,
    interevent_times,
    interevent_times_by_user,
    load_annotations,
    weekly_profile,
    yearly_burstiness,
)

__all__ = [
    "AnnotationWindow",
    "CategoryLabel",
    "CategoryStats",
    "CategoryThresholds",
    "DailyCount",
    "DegreeSpectrum",
    "Distribution",
    "EventLog",
    "GiniPoint",
    "IngestError",
    "IngestReport",
    "Layer",
    "LayerView",
    "NodeMetrics",
    "NullModelResult",
    "RankingReport",
    "RatingEvent",
    "Snapshot",
    "StabilityPoint",
    "SynthConfig",
    "Trajectory",
    "TrajectorySelection",
    "YearlyBurstiness",
    "activity_calendar",
    "annotations_for",
    "avg_neighbor_degree_spectrum",
    "burstiness",
    "categorize",
    "category_summary",
    "circadian_profile",
    "clustering_spectrum",
    "configuration_null",
    "daily_series",
    "day_of",
    "extended_jaccard",
    "from_values",
    "gettrust",
    "gini",
    "gini_point",
    "gini_series",
    "ingest",
    "interevent_distribution",
    "interevent_times",
    "interevent_times_by_user",
    "kendall_tau",
    "latest_ratings",
    "load_annotations",
    "local_clustering",
    "log_binned_ccdf",
    "mean_clustering",
    "negative_fraction",
    "node_metrics",
    "plain_jaccard",
    "ranked_users",
    "ranking_report",
    "reputation_by_indegree",
    "reputation_distributions",
    "reputation_vs_indegree_scatter",
    "snapshot_series",
    "split_layers",
    "stability_step",
    "synth_log",
    "top_k_lists",
    "topk_stability_series",
    "trajectories",
    "undirected_projection",
    "weekly_profile",
    "weight_distribution",
    "write_log_csv",
]
