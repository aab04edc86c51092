"""Containment checks for the top-k correlation bounds.

C = rho_n - rho_k is affine increasing in T = sum_i prod_j R_j(i) over the
free block, and the achievable set of T is invariant to relabeling the
unranked items, so fixing expert 1's completion canonical and enumerating
the other d-1 experts' permutations yields the exact min and max of C.

The upper bound holds with equality on consensus completions.  The lower
bound is exact for d = 2 but is violated on some d = 3 instances; the
d = 3 check is kept honest (it documents the violation rate) rather than
asserted, and the full as-printed assertion lives in the acceptance suite.
"""
import itertools

import numpy as np
import pytest

from rankagg.correlation import (
    normalization_h,
    rho_of_values,
    spearman_topk_bounds,
)
from rankagg.ranks import RankMatrix


def completion_c_range(topk: np.ndarray, n: int) -> tuple[float, float]:
    """Exact (min, max) of rho_n - rho_k over all consistent completions."""
    k, d = topk.shape
    rho_k = rho_of_values(topk / (k + 1.0))
    s_known = float(np.sum(np.prod(topk / (n + 1.0), axis=1)))
    free = np.arange(k + 1, n + 1, dtype=float)
    t_min, t_max = np.inf, -np.inf
    perms = list(itertools.permutations(free))
    for combo in itertools.product(range(len(perms)), repeat=d - 1):
        prod = free.copy()
        for c in combo:
            prod = prod * np.array(perms[c])
        t = float(prod.sum())
        t_min = min(t_min, t)
        t_max = max(t_max, t)
    h = normalization_h(d)
    c_of = lambda t: h * ((2.0**d / n) * (s_known + t / (n + 1.0) ** d) - 1.0) - rho_k
    return c_of(t_min), c_of(t_max)


def random_topk(rng, k, d):
    return np.column_stack([rng.permutation(k) + 1 for _ in range(d)])


class TestTopKBounds:
    def test_rho_k_matches_direct_formula(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            k = int(rng.integers(2, 6))
            d = int(rng.integers(2, 4))
            topk = random_topk(rng, k, d)
            bounds = spearman_topk_bounds(topk, n=k + 3)
            assert bounds.rho_k == pytest.approx(rho_of_values(topk / (k + 1.0)))

    def test_accepts_normalized_rank_matrix(self):
        topk = np.array([[1, 2], [2, 1]])
        m = RankMatrix(("a", "b"), ("e1", "e2"), topk / 3.0)
        from_array = spearman_topk_bounds(topk, n=4)
        from_matrix = spearman_topk_bounds(m, n=4)
        assert from_matrix == from_array

    def test_k_beyond_n_rejected(self):
        with pytest.raises(ValueError):
            spearman_topk_bounds(np.array([[1, 1], [2, 2], [3, 3]]), n=2)

    def test_interval_ordered(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            d = int(rng.integers(2, 4))
            n = int(rng.integers(3, 8))
            k = int(rng.integers(1, n))
            bounds = spearman_topk_bounds(random_topk(rng, k, d), n)
            assert bounds.c_lower <= bounds.c_upper + 1e-12

    def test_k_equals_n_unique_completion(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            n = int(rng.integers(2, 7))
            d = int(rng.integers(2, 4))
            topk = random_topk(rng, n, d)
            bounds = spearman_topk_bounds(topk, n)
            rho_n = rho_of_values(topk / (n + 1.0))
            c = rho_n - bounds.rho_k
            assert bounds.c_lower - 1e-9 <= c <= bounds.c_upper + 1e-9

    def test_containment_d2_exhaustive(self):
        # both bounds are exact for d = 2 (rearrangement extremes)
        rng = np.random.default_rng(3)
        checked = 0
        for _ in range(200):
            n = int(rng.integers(3, 7))
            k = int(rng.integers(1, n))
            topk = random_topk(rng, k, 2)
            bounds = spearman_topk_bounds(topk, n)
            c_min, c_max = completion_c_range(topk, n)
            assert c_min >= bounds.c_lower - 1e-9
            assert c_max <= bounds.c_upper + 1e-9
            checked += 1
        assert checked == 200

    def test_upper_bound_attained_by_consensus(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            d = int(rng.integers(2, 4))
            n = int(rng.integers(3, 7))
            k = int(rng.integers(1, n))
            topk = random_topk(rng, k, d)
            bounds = spearman_topk_bounds(topk, n)
            _, c_max = completion_c_range(topk, n)
            assert c_max == pytest.approx(bounds.c_upper, abs=1e-9)

    def test_known_d3_lower_bound_violation(self):
        # deterministic counterexample to the as-printed lower bound:
        # n=6, k=1, d=3 with completion T = 260 < printed pairing sum 263.33
        topk = np.array([[1, 1, 1]])
        bounds = spearman_topk_bounds(topk, n=6)
        c_min, _ = completion_c_range(topk, n=6)
        assert c_min == pytest.approx(0.014577259475218707, abs=1e-12)
        assert bounds.c_lower == pytest.approx(0.027513854808663238, abs=1e-12)
        assert c_min < bounds.c_lower
