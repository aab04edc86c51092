"""Extending partial rankings to a common domain.

The non-informative extension scales known values by r/r' and maps every
missing item to the single constant (r+r')/(2r'), the midpoint of the
missing section.  This is a consistent extension (order preserved, ties
preserved, imputed values below all known ones) whose mean stays exactly
1/2.  The optimization-based alternative completes the lists so that the
multivariate correlation is maximized or minimized, via the relaxed
assignment program solved with a penalty method.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal, Sequence

import numpy as np

from .ranks import ObjectId, PartialRanking, Ranking, RankMatrix

Mode = Literal["max", "min"]


@dataclass(frozen=True)
class ExtensionResult:
    ranking: Ranking
    imputed: frozenset[ObjectId]


@dataclass(frozen=True)
class OptimizerConfig:
    max_iters: int = 400
    tolerance: float = 1e-6
    penalty_init: float = 10.0
    penalty_growth: float = 10.0
    penalty_rounds: int = 5


@dataclass
class RelaxedAssignment:
    """Relaxed assignment matrices and solver diagnostics.

    `matrices` holds one n x n matrix per expert; entry (i, k) is the
    relaxed indicator that object i takes rank k+1.  Observed cells are
    pinned one-hot.
    """

    matrices: list[np.ndarray]
    objective_value: float
    mode: Mode
    feasibility_residual: float


def _ordered_domain(full_domain: Iterable[ObjectId]) -> list[ObjectId]:
    if isinstance(full_domain, (list, tuple)):
        domain = list(full_domain)
        if len(set(domain)) != len(domain):
            raise ValueError("full_domain contains duplicates")
        return domain
    return sorted(set(full_domain), key=str)


def extend_noninformative(p: PartialRanking, full_domain: Iterable[ObjectId]) -> ExtensionResult:
    """Extend a top-oriented partial ranking, imputing the mean missing value."""
    domain = _ordered_domain(full_domain)
    missing = [obj for obj in domain if obj not in p.entries]
    absent = p.domain() - set(domain)
    if absent:
        raise ValueError(f"ranked items not in full_domain: {sorted(absent, key=str)}")
    r = p.k
    r_prime = len(domain)
    scale = r / r_prime if r_prime else 0.0
    constant = (r + r_prime) / (2.0 * r_prime)
    entries: dict[ObjectId, float] = {}
    for obj in domain:
        if obj in p.entries:
            entries[obj] = scale * p.entries[obj]
        else:
            entries[obj] = constant
    return ExtensionResult(ranking=Ranking(entries), imputed=frozenset(missing))


def extend_bottom(p: PartialRanking, full_domain: Iterable[ObjectId]) -> ExtensionResult:
    """Dual extension for bottom-k lists: missing items go above all known ones.

    Equivalent to the non-informative extension applied to reversed ranks:
    reverse(extend(reverse(p))).
    """
    flipped = extend_noninformative(p.flipped(), full_domain)
    entries = {obj: 1.0 - v for obj, v in flipped.ranking.entries.items()}
    return ExtensionResult(ranking=Ranking(entries), imputed=flipped.imputed)


def extend_all(
    experts: Sequence[PartialRanking],
    full_domain: Iterable[ObjectId],
    names: Sequence[str] | None = None,
    direction: Literal["top", "bottom"] | None = None,
) -> RankMatrix:
    """Extend every expert onto the union domain and align the columns.

    Each expert is extended per its own direction unless `direction`
    overrides it for all of them.
    """
    if not experts:
        raise ValueError("need at least one expert")
    if all(p.k == 0 for p in experts):
        raise ValueError("all experts are empty: nothing to extend")
    domain = _ordered_domain(full_domain)
    covered = set().union(*(p.domain() for p in experts))
    if not covered.issubset(domain):
        raise ValueError("full_domain must cover every expert's ranked items")
    columns = []
    for p in experts:
        dir_p = direction or p.direction
        ext = extend_bottom(p, domain) if dir_p == "bottom" else extend_noninformative(p, domain)
        columns.append(ext.ranking)
    if names is None:
        names = tuple(f"expert_{j + 1}" for j in range(len(experts)))
    values = np.column_stack([col.values_for(domain) for col in columns])
    return RankMatrix(objects=tuple(domain), experts=tuple(names), values=values)


# --- relaxed optimal imputation -------------------------------------------


class _Program:
    """Eliminated form of the assignment program over one instance."""

    def __init__(self, n: int, observed: list[dict[int, int]]):
        self.n = n
        self.d = len(observed)
        self.observed = observed
        self.logk = np.log(np.arange(1, n + 1) / (n + 1.0))
        self.free_items: list[np.ndarray] = []
        self.free_ranks: list[np.ndarray] = []
        self.base = np.zeros(n)
        for obs in observed:
            ranks_used = set(obs.values())
            if len(ranks_used) != len(obs):
                raise ValueError("duplicate observed rank within one expert")
            items = np.array([i for i in range(n) if i not in obs], dtype=int)
            free = np.array(sorted(set(range(1, n + 1)) - ranks_used), dtype=int)
            self.free_items.append(items)
            self.free_ranks.append(free)
            for i, rank in obs.items():
                self.base[i] += self.logk[rank - 1]
        self.lfree = [self.logk[fr - 1] for fr in self.free_ranks]

    def item_scores(self, blocks: list[np.ndarray]) -> np.ndarray:
        s = self.base.copy()
        for j in range(self.d):
            if len(self.free_items[j]):
                s[self.free_items[j]] += blocks[j] @ self.lfree[j]
        return s

    def objective(self, blocks: list[np.ndarray]) -> float:
        return float(np.sum(np.exp(self.item_scores(blocks))))

    def grad(self, blocks: list[np.ndarray]) -> list[np.ndarray]:
        e = np.exp(self.item_scores(blocks))
        return [
            np.outer(e[items], lf) if len(items) else np.zeros((0, 0))
            for items, lf in zip(self.free_items, self.lfree)
        ]

    def residual(self, blocks: list[np.ndarray]) -> float:
        worst = 0.0
        for y in blocks:
            if y.size == 0:
                continue
            worst = max(
                worst,
                float(np.max(np.abs(y.sum(axis=1) - 1.0))),
                float(np.max(np.abs(y.sum(axis=0) - 1.0))),
            )
        return worst


def _coordinate_vertex(
    prog: _Program,
    mode: Mode,
    start: list[np.ndarray] | None = None,
    sweeps: int = 50,
) -> list[np.ndarray]:
    # Block-coordinate assignment: with other experts fixed, the restricted
    # objective is linear in the assigned rank, so sorting is exact.  Each
    # sweep is monotone in the objective.
    blocks = start if start is not None else [np.eye(len(items)) for items in prog.free_items]
    blocks = [y.copy() for y in blocks]
    for _ in range(sweeps):
        changed = False
        for j in range(prog.d):
            m = len(prog.free_items[j])
            if m == 0:
                continue
            scores = prog.item_scores(blocks)
            others = scores[prog.free_items[j]] - blocks[j] @ prog.lfree[j]
            order = np.argsort(others, kind="stable")
            if mode == "min":
                order = order[::-1]
            fresh = np.zeros((m, m))
            fresh[order, np.arange(m)] = 1.0
            if not np.array_equal(fresh, blocks[j]):
                blocks[j] = fresh
                changed = True
        if not changed:
            break
    return blocks


def _affine_project(z: np.ndarray) -> np.ndarray:
    # Euclidean projection onto {X : X 1 = 1, X^T 1 = 1}
    m = z.shape[0]
    r = z.sum(axis=1, keepdims=True)
    c = z.sum(axis=0, keepdims=True)
    return z - r / m - c / m + 1.0 / m + z.sum() / m**2


def _dykstra(y: np.ndarray, iters: int = 500, tol: float = 1e-13) -> np.ndarray:
    if y.size == 0:
        return y
    x = y.copy()
    p = np.zeros_like(x)
    q = np.zeros_like(x)
    for _ in range(iters):
        w = _affine_project(x + p)
        p = x + p - w
        x_new = np.clip(w + q, 0.0, 1.0)
        q = w + q - x_new
        done = (
            np.max(np.abs(x_new - x)) < tol
            and np.max(np.abs(x_new.sum(axis=1) - 1.0)) < tol
            and np.max(np.abs(x_new.sum(axis=0) - 1.0)) < tol
        )
        x = x_new
        if done:
            break
    return x


def _penalty_pgd(
    prog: _Program, start: list[np.ndarray], mode: Mode, cfg: OptimizerConfig
) -> list[np.ndarray]:
    sign = -1.0 if mode == "max" else 1.0
    blocks = [y.copy() for y in start]
    mu = cfg.penalty_init

    def penalized(bs: list[np.ndarray]) -> float:
        pval = 0.0
        for y in bs:
            if y.size == 0:
                continue
            dr = y.sum(axis=1) - 1.0
            dc = y.sum(axis=0) - 1.0
            pval += float(dr @ dr + dc @ dc)
        return sign * prog.objective(bs) + mu * pval

    for _ in range(cfg.penalty_rounds):
        alpha = 1.0
        stalled = 0
        phi = penalized(blocks)
        for _ in range(cfg.max_iters):
            grads = prog.grad(blocks)
            g = []
            for j, y in enumerate(blocks):
                if y.size == 0:
                    g.append(y)
                    continue
                dr = y.sum(axis=1) - 1.0
                dc = y.sum(axis=0) - 1.0
                g.append(sign * grads[j] + 2.0 * mu * (dr[:, None] + dc[None, :]))
            alpha = min(alpha * 2.0, 100.0)
            moved = False
            step_sq = 0.0
            phi_new = phi
            for _ in range(80):
                cand = [
                    np.clip(y - alpha * gj, 0.0, 1.0) if y.size else y
                    for y, gj in zip(blocks, g)
                ]
                step_sq = sum(float(np.sum((y - c) ** 2)) for y, c in zip(blocks, cand))
                if step_sq == 0.0 or alpha < 1e-14:
                    break
                phi_new = penalized(cand)
                if phi_new <= phi - 1e-4 / alpha * step_sq:
                    moved = True
                    break
                alpha *= 0.5
            if not moved or step_sq < 1e-18:
                break
            blocks = cand
            if phi - phi_new < 1e-12 * (abs(phi) + 1.0):
                stalled += 1
                if stalled >= 2:
                    phi = phi_new
                    break
            else:
                stalled = 0
            phi = phi_new
        mu *= cfg.penalty_growth
    return blocks


def _round_blocks(prog: _Program, blocks: list[np.ndarray], objects: Sequence[ObjectId]) -> np.ndarray:
    """Integer ranks from relaxed blocks: free items sorted by sum_k x*k."""
    full = np.zeros((prog.n, prog.d))
    for j in range(prog.d):
        for i, rank in prog.observed[j].items():
            full[i, j] = rank
        items = prog.free_items[j]
        if len(items) == 0:
            continue
        scores = blocks[j] @ prog.free_ranks[j].astype(float)
        order = sorted(range(len(items)), key=lambda t: (scores[t], str(objects[items[t]])))
        for slot, t in enumerate(order):
            full[items[t], j] = prog.free_ranks[j][slot]
    return full


def _vertex_blocks(prog: _Program, full: np.ndarray) -> list[np.ndarray]:
    blocks = []
    for j in range(prog.d):
        items = prog.free_items[j]
        m = len(items)
        y = np.zeros((m, m))
        rank_slot = {rank: slot for slot, rank in enumerate(prog.free_ranks[j])}
        for t, i in enumerate(items):
            y[t, rank_slot[int(full[i, j])]] = 1.0
        blocks.append(y)
    return blocks


def _known_integer_ranks(p: PartialRanking, n: int) -> dict[ObjectId, int]:
    """Subset fractional values back to integer positions placed in 1..n."""
    k = p.k
    out: dict[ObjectId, int] = {}
    for obj, v in p.entries.items():
        pos = v * (k + 1)
        rounded = round(pos)
        if abs(pos - rounded) > 1e-9:
            raise ValueError(
                f"tied or non-integer rank for {obj!r}: optimal imputation needs a tie-free partial permutation"
            )
        rank = int(rounded) if p.direction == "top" else n - k + int(rounded)
        out[obj] = rank
    return out


def impute_optimal(
    experts: Sequence[PartialRanking],
    full_domain: Iterable[ObjectId],
    mode: Mode,
    cfg: OptimizerConfig | None = None,
) -> tuple[RankMatrix, RelaxedAssignment]:
    """Complete partial rankings to maximize or minimize multivariate rho.

    Solves the box-relaxed assignment program (rows and columns of each
    expert's indicator matrix sum to one, observed cells pinned) with a
    quadratic-penalty projected-gradient method, then recovers integer
    ranks by sorting unobserved items on their expected rank.
    """
    if cfg is None:
        cfg = OptimizerConfig()
    if mode not in ("max", "min"):
        raise ValueError(f"mode must be 'max' or 'min', got {mode!r}")
    domain = _ordered_domain(full_domain)
    n = len(domain)
    index = {obj: i for i, obj in enumerate(domain)}
    observed = []
    for p in experts:
        if not p.domain().issubset(index):
            raise ValueError("expert ranks an item outside full_domain")
        known = _known_integer_ranks(p, n)
        observed.append({index[obj]: rank for obj, rank in known.items()})
    prog = _Program(n, observed)

    names = tuple(f"expert_{j + 1}" for j in range(prog.d))
    if all(len(items) == 0 for items in prog.free_items):
        full = _round_blocks(prog, [np.zeros((0, 0))] * prog.d, domain)
        matrices = _full_matrices(prog, [np.zeros((0, 0))] * prog.d)
        assignment = RelaxedAssignment(
            matrices=matrices,
            objective_value=float(np.sum(np.prod(full / (n + 1.0), axis=1))),
            mode=mode,
            feasibility_residual=0.0,
        )
        return _matrix_from_full(full, domain, names, n), assignment

    def better(f_new: float, f_old: float) -> bool:
        return f_new > f_old if mode == "max" else f_new < f_old

    coord = _coordinate_vertex(prog, mode)
    refined = _penalty_pgd(prog, coord, mode, cfg)
    fractional = [[_dykstra(y) for y in refined]]

    # integer candidates: round each fractional point, then polish with
    # monotone block-coordinate sweeps (relax-and-round with local search)
    integer_candidates = [coord]
    for blocks in fractional:
        rounded = _vertex_blocks(prog, _round_blocks(prog, blocks, domain))
        integer_candidates.append(_coordinate_vertex(prog, mode, start=rounded))
    best_integer = None
    for blocks in integer_candidates:
        f = prog.objective(blocks)
        if best_integer is None or better(f, best_integer[0]):
            best_integer = (f, blocks)

    # the relaxed solution: any vertex is feasible, so the polished integer
    # point also competes for the reported relaxed objective
    best = best_integer
    for blocks in fractional:
        f = prog.objective(blocks)
        if better(f, best[0]):
            best = (f, blocks)
    f_best, blocks_best = best

    full = _round_blocks(prog, best_integer[1], domain)
    assignment = RelaxedAssignment(
        matrices=_full_matrices(prog, blocks_best),
        objective_value=f_best,
        mode=mode,
        feasibility_residual=prog.residual(blocks_best),
    )
    return _matrix_from_full(full, domain, names, n), assignment


def _full_matrices(prog: _Program, blocks: list[np.ndarray]) -> list[np.ndarray]:
    out = []
    for j in range(prog.d):
        x = np.zeros((prog.n, prog.n))
        for i, rank in prog.observed[j].items():
            x[i, rank - 1] = 1.0
        items = prog.free_items[j]
        for t, i in enumerate(items):
            for s, rank in enumerate(prog.free_ranks[j]):
                x[i, rank - 1] = blocks[j][t, s]
        out.append(x)
    return out


def _matrix_from_full(
    full: np.ndarray, domain: Sequence[ObjectId], names: tuple[str, ...], n: int
) -> RankMatrix:
    return RankMatrix(
        objects=tuple(domain), experts=names, values=full / (n + 1.0)
    )
