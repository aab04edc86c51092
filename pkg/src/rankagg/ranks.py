"""Rank representations and the fractional rank generator.

Ranks are stored as mappings from object identifiers to values in the open
interval (0, 1): a full tie-free ranking over n objects takes the values
{1/(n+1), ..., n/(n+1)}, with 1/(n+1) denoting the best item.  Ties receive
the average of the positions they span (fractional ranking), which keeps the
mean of every full ranking at exactly 1/2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Literal, Mapping, Sequence, Union

import numpy as np
from scipy.stats import rankdata

ObjectId = Union[str, int]
Order = Literal["ascending", "descending"]


def _check_unit_interval(entries: Mapping[ObjectId, float], what: str) -> None:
    for obj, value in entries.items():
        if not (0.0 < value < 1.0):
            raise ValueError(f"{what} value for {obj!r} is {value}, outside (0, 1)")


@dataclass(frozen=True)
class Ranking:
    """A ranking over a fixed domain: object id -> rank value in (0, 1)."""

    entries: dict[ObjectId, float]

    def __post_init__(self) -> None:
        if not self.entries:
            raise ValueError("ranking must contain at least one object")
        _check_unit_interval(self.entries, "rank")

    @property
    def n(self) -> int:
        return len(self.entries)

    def domain(self) -> frozenset[ObjectId]:
        return frozenset(self.entries)

    def value(self, obj: ObjectId) -> float:
        return self.entries[obj]

    def values_for(self, objects: Sequence[ObjectId]) -> np.ndarray:
        """Rank values aligned to the given object order."""
        return np.array([self.entries[obj] for obj in objects], dtype=float)

    def order(self) -> list[ObjectId]:
        """Objects best-first (ties broken by object id for determinism)."""
        return sorted(self.entries, key=lambda o: (self.entries[o], str(o)))


@dataclass(frozen=True)
class PartialRanking:
    """A top-k or bottom-k list over a subset of some larger domain.

    Values are the fractional ranks of the ranked subset alone, i.e. in
    (0, 1) normalized by (k+1) where k is the subset size.
    """

    entries: dict[ObjectId, float]
    direction: Literal["top", "bottom"] = "top"
    domain_size_hint: int | None = None

    def __post_init__(self) -> None:
        _check_unit_interval(self.entries, "partial rank")
        if self.direction not in ("top", "bottom"):
            raise ValueError(f"direction must be 'top' or 'bottom', got {self.direction!r}")

    @property
    def k(self) -> int:
        return len(self.entries)

    def domain(self) -> frozenset[ObjectId]:
        return frozenset(self.entries)

    def with_direction(self, direction: Literal["top", "bottom"]) -> "PartialRanking":
        return replace(self, direction=direction)

    def flipped(self) -> "PartialRanking":
        """Value-reversed copy: v -> 1 - v within the ranked subset."""
        return replace(self, entries={o: 1.0 - v for o, v in self.entries.items()})


@dataclass(frozen=True)
class RankMatrix:
    """n objects x d experts table of rank values in (0, 1)."""

    objects: tuple[ObjectId, ...]
    experts: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        if values.shape != (len(self.objects), len(self.experts)):
            raise ValueError(
                f"values shape {values.shape} does not match "
                f"{len(self.objects)} objects x {len(self.experts)} experts"
            )
        if len(set(self.objects)) != len(self.objects):
            raise ValueError("duplicate object ids")
        if values.size and (values.min() <= 0.0 or values.max() >= 1.0):
            raise ValueError("all rank values must lie in the open interval (0, 1)")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return len(self.objects)

    @property
    def d(self) -> int:
        return len(self.experts)

    def column(self, j: int) -> Ranking:
        return Ranking(dict(zip(self.objects, self.values[:, j])))

    @classmethod
    def from_columns(cls, columns: Sequence[Ranking], experts: Sequence[str] | None = None) -> "RankMatrix":
        if not columns:
            raise ValueError("need at least one column")
        objects = tuple(columns[0].entries)
        for col in columns[1:]:
            if col.domain() != frozenset(objects):
                raise ValueError("all columns must share the same object domain")
        if experts is None:
            experts = tuple(f"expert_{j + 1}" for j in range(len(columns)))
        values = np.column_stack([col.values_for(objects) for col in columns])
        return cls(objects=objects, experts=tuple(experts), values=values)


def _fractional_values(scores: np.ndarray) -> np.ndarray:
    # average-rank positions divided by n+1
    return rankdata(scores, method="average") / (len(scores) + 1.0)


def fractional_rank(scores: Mapping[ObjectId, float], order: Order = "ascending") -> Ranking:
    """Fractional (average-tie) ranks of the given scores, normalized by n+1.

    Ascending means a smaller score earns a smaller (better) rank value;
    descending reverses that.  The result depends only on the ordering of
    the scores, so it is invariant to strictly monotone transforms.
    """
    if not scores:
        raise ValueError("scores must be non-empty")
    objects = list(scores)
    raw = np.array([scores[obj] for obj in objects], dtype=float)
    if not np.all(np.isfinite(raw)):
        raise ValueError("scores must all be finite")
    if order == "descending":
        raw = -raw
    elif order != "ascending":
        raise ValueError(f"order must be 'ascending' or 'descending', got {order!r}")
    return Ranking(dict(zip(objects, _fractional_values(raw))))


def normalize_integer_ranks(ranks: Mapping[ObjectId, float]) -> Ranking:
    """Divide 1-based ranks by n+1.

    Ranks must lie in [1, n]; non-integer values are accepted only as
    pre-averaged fractional ties (e.g. 1.5 for a two-way tie).
    """
    if not ranks:
        raise ValueError("ranks must be non-empty")
    n = len(ranks)
    for obj, rank in ranks.items():
        if not math.isfinite(rank) or rank < 1 or rank > n:
            raise ValueError(f"rank for {obj!r} is {rank}, outside [1, {n}]")
    return Ranking({obj: rank / (n + 1.0) for obj, rank in ranks.items()})


def reverse(ranking: Ranking) -> Ranking:
    """Invert the order: each value v becomes 1 - v."""
    return Ranking({obj: 1.0 - v for obj, v in ranking.entries.items()})
