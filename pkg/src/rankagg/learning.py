"""Closed-form learning of expert weights on log-ranks.

Training minimizes sum_x (log L(x) - bias - sum_j w_j log R'_j(x))^2 over
all stacked query rows; the normal equations give the solution directly.
Prediction scores an item by bias + sum_j w_j log R'_j(x) and ranks
ascending, so the weighted geometric mean of ranks orders the output.
"""
from __future__ import annotations

from dataclasses import dataclass
import numpy as np

from .aggregation import AggregateResult, weighted_aggregate
from .ranks import Ranking, RankMatrix, fractional_rank


@dataclass(frozen=True)
class ExpertWeights:
    weights: tuple[float, ...]
    bias: float
    expert_names: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.weights) != len(self.expert_names):
            raise ValueError("weights and expert_names must have equal length")
        if not all(np.isfinite(self.weights)) or not np.isfinite(self.bias):
            raise ValueError("weights and bias must be finite")

    @property
    def d(self) -> int:
        return len(self.weights)


@dataclass(frozen=True)
class TrainingSet:
    """(RankMatrix, label Ranking) pairs sharing the same expert names."""

    pairs: tuple[tuple[RankMatrix, Ranking], ...]

    def __post_init__(self) -> None:
        if not self.pairs:
            raise ValueError("training set is empty")
        names = self.pairs[0][0].experts
        for matrix, label in self.pairs:
            if matrix.experts != names:
                raise ValueError("all matrices must share the same expert names")
            if label.domain() != frozenset(matrix.objects):
                raise ValueError("label domain must equal the matrix object list")

    @property
    def expert_names(self) -> tuple[str, ...]:
        return self.pairs[0][0].experts


def fit_weights(t: TrainingSet, ridge: float = 1e-8) -> ExpertWeights:
    """Least squares on log-ranks with a bias column.

    The ridge term (excluded from the bias) regularizes rank-deficient
    designs, e.g. constant expert columns collinear with the bias.
    """
    if ridge < 0:
        raise ValueError("ridge must be >= 0")
    rows = []
    targets = []
    for matrix, label in t.pairs:
        rows.append(np.log(matrix.values))
        targets.append(np.log(label.values_for(list(matrix.objects))))
    x = np.vstack(rows)
    y = np.concatenate(targets)
    design = np.column_stack([x, np.ones(len(x))])
    gram = design.T @ design
    d = x.shape[1]
    gram[np.arange(d), np.arange(d)] += ridge
    solution = np.linalg.solve(gram, design.T @ y)
    return ExpertWeights(
        weights=tuple(float(v) for v in solution[:d]),
        bias=float(solution[d]),
        expert_names=t.expert_names,
    )


def predict(m: RankMatrix, w: ExpertWeights) -> AggregateResult:
    """Rank items by bias + sum_j w_j log(value_j), ascending."""
    if m.experts != w.expert_names:
        if m.d != w.d:
            raise ValueError(f"matrix has {m.d} experts but weights have {w.d}")
    base = weighted_aggregate(m, w)
    shifted = {obj: score + w.bias for obj, score in base.raw_scores.items()}
    return AggregateResult(ranking=base.ranking, raw_scores=shifted, method="weighted")


def label_to_ranking(relevance):
    """Graded relevance labels to a ranking: higher grade, better rank."""
    return fractional_rank(relevance, "descending")
