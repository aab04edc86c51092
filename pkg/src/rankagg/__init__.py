"""Copula-based rank aggregation toolkit.

Core pipeline: represent (possibly partial) ranked lists as normalized
fractional ranks, extend them to a common domain, measure agreement with
multivariate Spearman correlation, aggregate by (weighted) geometric mean,
and learn expert weights by closed-form least squares on log-ranks.
"""
from .aggregation import (
    AggregateResult,
    borda_aggregate,
    geometric_mean_aggregate,
    min_aggregate,
    weighted_aggregate,
)
from .correlation import (
    CorrelationReport,
    ReferenceConcordance,
    TopKBounds,
    UndefinedCorrelationError,
    kendall_tau,
    normalization_h,
    reference_concordance,
    rho_of_values,
    spearman_bivariate,
    spearman_multivariate,
    spearman_topk_bounds,
)
from .evaluation import (
    FoldMetrics,
    MetricsTable,
    cross_validate,
    evaluate_method,
    ndcg_at_k,
    query_metrics,
)
from .imputation import (
    ExtensionResult,
    OptimizerConfig,
    RelaxedAssignment,
    extend_all,
    extend_bottom,
    extend_noninformative,
    impute_optimal,
)
from .ingest import (
    Dataset,
    FoldSplit,
    QueryInstance,
    load_letor_dataset,
    load_weights,
    parse_letor_file,
    parse_ranking_csv,
    read_rank_table,
    save_weights,
    write_letor_file,
)
from .learning import (
    ExpertWeights,
    TrainingSet,
    fit_weights,
    label_to_ranking,
    predict,
)
from .ranks import (
    ObjectId,
    PartialRanking,
    Ranking,
    RankMatrix,
    fractional_rank,
    normalize_integer_ranks,
    reverse,
)

__version__ = "0.1.0"
