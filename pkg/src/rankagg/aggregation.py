"""Consensus rankings from a rank matrix.

The geometric mean of normalized ranks (equivalently, ranking the per-item
products) maximizes multivariate Spearman correlation against the columns;
the anti-ordering of the same products minimizes it.  Borda (arithmetic
mean) is the classical baseline.
"""
from __future__ import annotations

from dataclasses import dataclass
import numpy as np

from .ranks import ObjectId, Ranking, RankMatrix, fractional_rank


@dataclass(frozen=True)
class AggregateResult:
    """A consensus ranking plus the raw scores it was ranked from.

    Smaller raw score means better (smaller) rank value; the ranking is
    always fractional_rank(raw_scores, ascending).
    """

    ranking: Ranking
    raw_scores: dict[ObjectId, float]
    method: str

    def order(self) -> list[ObjectId]:
        return self.ranking.order()


def _result(m: RankMatrix, scores: np.ndarray, method: str) -> AggregateResult:
    raw = dict(zip(m.objects, (float(s) for s in scores)))
    return AggregateResult(
        ranking=fractional_rank(raw, "ascending"), raw_scores=raw, method=method
    )


def geometric_mean_aggregate(m: RankMatrix) -> AggregateResult:
    """Rank items by the product of their rank values (ascending).

    This is the correlation-maximizing consensus: no ranking in the rank
    generator's codomain has higher rho_n against the columns.
    """
    return _result(m, np.prod(m.values, axis=1), "geomean")


def min_aggregate(m: RankMatrix) -> AggregateResult:
    """The correlation-minimizing consensus: anti-ordering of the products.

    Raw scores are the negated rank products, so ascending fractional ranks
    place the item with the largest product first.  (Ranking the products of
    (1 - value) does not attain the minimum for d >= 2; see the brute-force
    minimality tests.)
    """
    return _result(m, -np.prod(m.values, axis=1), "min")


def weighted_aggregate(m: RankMatrix, w) -> AggregateResult:
    """Weighted geometric mean, computed in log space.

    `w` is an ExpertWeights or a plain weight sequence; any bias only shifts
    scores uniformly and never changes the ordering.  A weight of 2 reads as
    "this list appeared twice"; weight 0 removes the expert; negative
    weights invert its influence.
    """
    weights = np.asarray(getattr(w, "weights", w), dtype=float)
    if weights.shape != (m.d,):
        raise ValueError(f"expected {m.d} weights, got {weights.shape}")
    scores = np.log(m.values) @ weights
    return _result(m, scores, "weighted")


def borda_aggregate(m: RankMatrix) -> AggregateResult:
    """Arithmetic mean of rank values per item, ranked ascending."""
    return _result(m, np.mean(m.values, axis=1), "borda")
