from pathlib import Path

import numpy as np
import pytest

from rankagg.ingest import QueryInstance, write_letor_file
from rankagg.ranks import PartialRanking, fractional_rank

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


def make_planted_queries(rng, n_queries=12, n_docs=8, topk=5):
    """Queries where ranker 1 fully reproduces the label order.

    Rankers 2 and 3 are random top-k lists, so the exact least-squares fit
    is weights (1, 0, 0) with zero bias.
    """
    queries = []
    for qi in range(n_queries):
        docs = tuple(f"q{qi}d{j}" for j in range(n_docs))
        label_order = rng.permutation(n_docs)
        # grades descend along the label order: best doc gets n_docs-1
        grades = {docs[j]: int(n_docs - 1 - label_order[j]) for j in range(n_docs)}
        expert1 = {docs[j]: int(label_order[j] + 1) for j in range(n_docs)}
        experts = [expert1]
        for _ in range(2):
            perm = rng.permutation(n_docs) + 1
            experts.append(
                {docs[j]: int(perm[j]) for j in range(n_docs) if perm[j] <= topk}
            )
        expert_lists = tuple(
            PartialRanking(
                entries=dict(fractional_rank(positions, "ascending").entries),
                direction="top",
            )
            for positions in experts
        )
        queries.append(
            QueryInstance(
                qid=f"q{qi}", docs=docs, grades=grades, expert_lists=expert_lists
            )
        )
    return queries


def write_letor_folds(queries, root: Path) -> None:
    """Rotated 60/20/20 fold layout over five round-robin segments."""
    segments = [[] for _ in range(5)]
    for i, q in enumerate(queries):
        segments[i % 5].append(q)
    for fold in range(5):
        fold_dir = root / f"Fold{fold + 1}"
        fold_dir.mkdir(parents=True, exist_ok=True)
        train = [q for s in range(3) for q in segments[(fold + s) % 5]]
        vali = segments[(fold + 3) % 5]
        test = segments[(fold + 4) % 5]
        write_letor_file(train, fold_dir / "train.txt")
        write_letor_file(vali, fold_dir / "vali.txt")
        write_letor_file(test, fold_dir / "test.txt")


@pytest.fixture(scope="session")
def planted_letor_dir(tmp_path_factory) -> Path:
    root = tmp_path_factory.mktemp("letor_planted")
    rng = np.random.default_rng(2024)
    write_letor_folds(make_planted_queries(rng), root)
    return root


@pytest.fixture(scope="session")
def university_csv() -> Path:
    return DATA_DIR / "universities_sample.csv"
