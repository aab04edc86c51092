"""NDCG and rank-correlation evaluation over LETOR-style datasets.

Per query: partial expert lists are extended to the query's documents
(top- or bottom-oriented per method), aggregated into a consensus, and the
consensus order is scored against the graded labels (NDCG@1..10) and the
label ranking (Spearman rho, Kendall tau-a).  Folds follow the dataset's
predefined splits: fit on train, score on test, validation unused.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .aggregation import AggregateResult, borda_aggregate, geometric_mean_aggregate
from .correlation import UndefinedCorrelationError, kendall_tau, spearman_bivariate
from .imputation import extend_all
from .ingest import Dataset, QueryInstance
from .learning import ExpertWeights, TrainingSet, fit_weights, label_to_ranking, predict
from .ranks import ObjectId

METHODS = ("rags_top", "rags_bottom", "geomean", "borda")
NDCG_CUTOFFS = tuple(range(1, 11))


@dataclass(frozen=True)
class FoldMetrics:
    fold: int
    n_queries: int
    ndcg: tuple[float, ...]
    rho: float
    tau: float


@dataclass(frozen=True)
class MetricsTable:
    method: str
    direction: str
    folds: tuple[FoldMetrics, ...]
    mean_ndcg: tuple[float, ...]
    mean_rho: float
    mean_tau: float

    def to_rows(self) -> list[dict[str, object]]:
        rows: list[dict[str, object]] = []
        for fm in self.folds:
            row: dict[str, object] = {"fold": fm.fold, "queries": fm.n_queries}
            for k, v in zip(NDCG_CUTOFFS, fm.ndcg):
                row[f"ndcg@{k}"] = v
            row["rho"] = fm.rho
            row["tau"] = fm.tau
            rows.append(row)
        mean_row: dict[str, object] = {"fold": "mean", "queries": sum(f.n_queries for f in self.folds)}
        for k, v in zip(NDCG_CUTOFFS, self.mean_ndcg):
            mean_row[f"ndcg@{k}"] = v
        mean_row["rho"] = self.mean_rho
        mean_row["tau"] = self.mean_tau
        rows.append(mean_row)
        return rows

    def format(self) -> str:
        header = ["fold", "queries"] + [f"@{k}" for k in NDCG_CUTOFFS] + ["rho", "tau"]
        lines = ["  ".join(f"{h:>8}" for h in header)]
        for row in self.to_rows():
            cells = [str(row["fold"]), str(row["queries"])]
            cells += [f"{row[f'ndcg@{k}']:.5f}" for k in NDCG_CUTOFFS]
            cells += [f"{row['rho']:.4f}", f"{row['tau']:.4f}"]
            lines.append("  ".join(f"{c:>8}" for c in cells))
        return "\n".join(lines)


def ndcg_at_k(
    predicted_order: Sequence[ObjectId], relevance: Mapping[ObjectId, int], k: int
) -> float:
    """NDCG@k with gain 2^grade - 1 and discount log2(i+1); 0 if IDCG is 0."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if set(predicted_order) != set(relevance) or len(predicted_order) != len(relevance):
        raise ValueError("predicted_order must be a permutation of the relevance keys")

    def dcg(grades: Sequence[int]) -> float:
        return sum(
            (2.0**g - 1.0) / math.log2(i + 2) for i, g in enumerate(grades[:k])
        )

    ideal = sorted(relevance.values(), reverse=True)
    idcg = dcg(ideal)
    if idcg == 0.0:
        return 0.0
    return dcg([relevance[doc] for doc in predicted_order]) / idcg


def _direction_for(method: str) -> str:
    return "bottom" if method == "rags_bottom" else "top"


def _aggregate_query(
    query: QueryInstance,
    method: str,
    expert_names: Sequence[str],
    weights: ExpertWeights | None,
) -> AggregateResult:
    matrix = extend_all(
        query.expert_lists,
        list(query.docs),
        names=expert_names,
        direction=_direction_for(method),
    )
    if method in ("rags_top", "rags_bottom"):
        if weights is None:
            raise ValueError(f"method {method} requires weights")
        return predict(matrix, weights)
    if method == "geomean":
        return geometric_mean_aggregate(matrix)
    if method == "borda":
        return borda_aggregate(matrix)
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")


def query_metrics(
    query: QueryInstance,
    method: str,
    expert_names: Sequence[str],
    weights: ExpertWeights | None = None,
) -> dict[str, object]:
    result = _aggregate_query(query, method, expert_names, weights)
    order = result.order()
    ndcg = tuple(ndcg_at_k(order, query.grades, k) for k in NDCG_CUTOFFS)
    rho = tau = None
    if len(query.docs) >= 2:
        label = label_to_ranking(query.grades)
        try:
            rho = spearman_bivariate(result.ranking, label)
        except UndefinedCorrelationError:
            rho = None
        tau = kendall_tau(result.ranking, label)
    return {"ndcg": ndcg, "rho": rho, "tau": tau, "order": order}


def _mean_or_nan(values: list[float]) -> float:
    return float(np.mean(values)) if values else float("nan")


def _fold_metrics(
    fold: int,
    queries: Sequence[QueryInstance],
    method: str,
    expert_names: Sequence[str],
    weights: ExpertWeights | None,
) -> FoldMetrics:
    ndcgs = []
    rhos = []
    taus = []
    for q in queries:
        metrics = query_metrics(q, method, expert_names, weights)
        ndcgs.append(metrics["ndcg"])
        if metrics["rho"] is not None:
            rhos.append(metrics["rho"])
        if metrics["tau"] is not None:
            taus.append(metrics["tau"])
    mean_ndcg = tuple(float(v) for v in np.mean(np.array(ndcgs), axis=0)) if ndcgs else (float("nan"),) * 10
    return FoldMetrics(
        fold=fold,
        n_queries=len(queries),
        ndcg=mean_ndcg,
        rho=_mean_or_nan(rhos),
        tau=_mean_or_nan(taus),
    )


def _table(method: str, folds: list[FoldMetrics]) -> MetricsTable:
    populated = [f for f in folds if f.n_queries > 0]
    mean_ndcg = tuple(
        float(v) for v in np.mean(np.array([f.ndcg for f in populated]), axis=0)
    )
    return MetricsTable(
        method=method,
        direction=_direction_for(method),
        folds=tuple(folds),
        mean_ndcg=mean_ndcg,
        mean_rho=_mean_or_nan([f.rho for f in populated if not math.isnan(f.rho)]),
        mean_tau=_mean_or_nan([f.tau for f in populated if not math.isnan(f.tau)]),
    )


def training_set_from_queries(
    queries: Sequence[QueryInstance],
    expert_names: Sequence[str],
    direction: str,
) -> TrainingSet:
    pairs = []
    for q in queries:
        matrix = extend_all(
            q.expert_lists, list(q.docs), names=expert_names, direction=direction
        )
        pairs.append((matrix, label_to_ranking(q.grades)))
    return TrainingSet(pairs=tuple(pairs))


def fit_fold(
    dataset: Dataset, fold_index: int, method: str, ridge: float = 1e-8
) -> ExpertWeights:
    """Fit weights on one fold's training split."""
    split = dataset.folds[fold_index]
    train = [q for q in dataset.queries if q.qid in split.train]
    if not train:
        raise ValueError(f"fold {fold_index + 1} has no training queries")
    ts = training_set_from_queries(train, dataset.expert_names, _direction_for(method))
    return fit_weights(ts, ridge=ridge)


def evaluate_method(
    dataset: Dataset, method: str, weights: ExpertWeights | None = None
) -> MetricsTable:
    """Score every fold's test queries with one fixed weight vector."""
    folds = []
    for i, split in enumerate(dataset.folds):
        test = [q for q in dataset.queries if q.qid in split.test]
        folds.append(_fold_metrics(i + 1, test, method, dataset.expert_names, weights))
    return _table(method, folds)


def evaluate_with_fold_weights(
    dataset: Dataset, method: str, fold_weights: Sequence[ExpertWeights | None]
) -> MetricsTable:
    """Score each fold's test queries with that fold's own weights."""
    if len(fold_weights) != len(dataset.folds):
        raise ValueError("need one weight vector per fold")
    folds = []
    for i, (split, weights) in enumerate(zip(dataset.folds, fold_weights)):
        test = [q for q in dataset.queries if q.qid in split.test]
        folds.append(_fold_metrics(i + 1, test, method, dataset.expert_names, weights))
    return _table(method, folds)


def cross_validate(
    dataset: Dataset, method: str, ridge: float = 1e-8
) -> tuple[MetricsTable, list[ExpertWeights | None]]:
    """Per fold: fit on the train split (rags methods), score the test split."""
    folds = []
    fold_weights: list[ExpertWeights | None] = []
    for i, split in enumerate(dataset.folds):
        weights = None
        if method in ("rags_top", "rags_bottom"):
            weights = fit_fold(dataset, i, method, ridge)
        fold_weights.append(weights)
        test = [q for q in dataset.queries if q.qid in split.test]
        folds.append(_fold_metrics(i + 1, test, method, dataset.expert_names, weights))
    return _table(method, folds), fold_weights
