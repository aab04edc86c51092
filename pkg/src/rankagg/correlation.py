"""Bivariate and multivariate Spearman correlation over normalized ranks.

The multivariate estimator is

    rho_n(R_1, ..., R_d) = h(d) [ (2^d / n) sum_x prod_j R_j(x) - 1 ]

with h(d) = (d+1) / (2^d - (d+1)) chosen so that the maximum correlation is
1.  For d = 2 it relates to the classical (Pearson-on-ranks) estimator by
rho_multi = ((n-1)/(n+1)) * rho_bivariate on tie-free rankings.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ranks import Ranking, RankMatrix


class UndefinedCorrelationError(ValueError):
    """Raised when a correlation is undefined (zero rank variance)."""


@dataclass(frozen=True)
class CorrelationReport:
    rho: float
    d: int
    n: int


@dataclass(frozen=True)
class TopKBounds:
    """rho_k plus the interval [c_lower, c_upper] bounding rho_n - rho_k."""

    rho_k: float
    c_lower: float
    c_upper: float


@dataclass(frozen=True)
class ReferenceConcordance:
    q_mm: float
    q_mpi: float
    q_pipi: float
    rho_floor: float


def _aligned(r: Ranking, s: Ranking) -> tuple[np.ndarray, np.ndarray]:
    if r.domain() != s.domain():
        raise ValueError("rankings must share the same domain")
    objects = list(r.entries)
    return r.values_for(objects), s.values_for(objects)


def spearman_bivariate(r: Ranking, s: Ranking) -> float:
    """Pearson correlation of the two rank value vectors."""
    a, b = _aligned(r, s)
    if len(a) < 2:
        raise ValueError("need at least two objects")
    a = a - a.mean()
    b = b - b.mean()
    denom = np.sqrt((a @ a) * (b @ b))
    if denom == 0.0:
        raise UndefinedCorrelationError("zero rank variance: correlation undefined")
    return float((a @ b) / denom)


def normalization_h(d: int) -> float:
    """h(d) = (d+1) / (2^d - (d+1)); requires d >= 2."""
    if d < 2:
        raise ValueError(f"h(d) requires d >= 2, got {d}")
    return (d + 1) / (2.0**d - (d + 1))


def rho_of_values(values: np.ndarray) -> float:
    """Multivariate rho of an (n, d) array of rank values in (0, 1)."""
    values = np.asarray(values, dtype=float)
    n, d = values.shape
    if d < 2:
        raise ValueError(f"multivariate rho requires d >= 2, got {d}")
    if n < 1:
        raise ValueError("need at least one object")
    s = float(np.sum(np.prod(values, axis=1)))
    return normalization_h(d) * ((2.0**d / n) * s - 1.0)


def spearman_multivariate(m: RankMatrix) -> CorrelationReport:
    return CorrelationReport(rho=rho_of_values(m.values), d=m.d, n=m.n)


def kendall_tau(r: Ranking, s: Ranking) -> float:
    """Kendall tau-a: (concordant - discordant) / (n(n-1)/2), ties count zero."""
    a, b = _aligned(r, s)
    n = len(a)
    if n < 2:
        raise ValueError("need at least two objects")
    da = np.sign(a[:, None] - a[None, :])
    db = np.sign(b[:, None] - b[None, :])
    upper = np.triu_indices(n, k=1)
    return float(np.sum(da[upper] * db[upper]) / (n * (n - 1) / 2.0))


def reference_concordance(d: int) -> ReferenceConcordance:
    """Reference concordance values for dimension d.

    q_mm = Q(M, M), q_mpi = Q(M, pi), q_pipi = Q(pi, pi); rho_floor is the
    lower bound h(d) * Q(W, pi) clipped to -1 (Q(W, pi) lies in [-1, 0]),
    which tends to 0 as d grows.
    """
    h = normalization_h(d)
    return ReferenceConcordance(
        q_mm=2.0 ** (d - 1) - 1.0,
        q_mpi=(2.0**d - (d + 1)) / (d + 1),
        q_pipi=0.0,
        rho_floor=max(-1.0, -h),
    )


def _topk_integer_ranks(topk) -> np.ndarray:
    if isinstance(topk, RankMatrix):
        k = topk.n
        ranks = np.asarray(topk.values) * (k + 1)
        if not np.allclose(ranks, np.round(ranks), atol=1e-9):
            raise ValueError("top-k matrix values are not integer ranks over the subset")
        ranks = np.round(ranks)
    else:
        ranks = np.asarray(topk, dtype=float)
        if ranks.ndim != 2:
            raise ValueError("top-k ranks must be a (k, d) array")
    k, d = ranks.shape
    for j in range(d):
        if sorted(ranks[:, j]) != list(range(1, k + 1)):
            raise ValueError(f"column {j} is not a permutation of 1..{k}")
    return ranks


def spearman_topk_bounds(topk, n: int) -> TopKBounds:
    """rho_k of a common top-k prefix plus bounds on C = rho_n - rho_k.

    `topk` holds the k items ranked by all d experts, as integer ranks 1..k
    per expert (a (k, d) array, or a RankMatrix normalized by k+1).  Any
    completion of the lists to n items consistent with the prefix has rho_n
    within [rho_k + c_lower, rho_k + c_upper].

    The two bounding expressions are implemented as printed; the lower one
    is exact for d = 2 but is known to fail on some d = 3 instances (see the
    containment tests, which log any violation).
    """
    ranks = _topk_integer_ranks(topk)
    k, d = ranks.shape
    if d < 2:
        raise ValueError("need at least two experts")
    if k > n:
        raise ValueError(f"k = {k} exceeds domain size n = {n}")
    h = normalization_h(d)
    rho_k = rho_of_values(ranks / (k + 1.0))
    s_k = float(np.sum(np.prod(ranks / (k + 1.0), axis=1)))
    common = (k * (k + 1.0) ** d - n * (n + 1.0) ** d) * s_k
    i = np.arange(k + 1, n + 1, dtype=float)
    lower_tail = k * float(np.sum(i ** (d / 2.0) * (k - i + n + 1) ** (d / 2.0)))
    upper_tail = float(np.sum(i**d)) * k
    denom = n * (n + 1.0) ** d * k
    c_lower = 2.0**d * h * (common + lower_tail) / denom
    c_upper = 2.0**d * h * (common + upper_tail) / denom
    return TopKBounds(rho_k=rho_k, c_lower=c_lower, c_upper=c_upper)
