"""Dataset parsing: LETOR aggregation files, multi-source ranking CSVs,
and weight persistence.

LETOR lines look like

    2 qid:10 1:3 2:NULL ... 25:7 #docid = GX008-86-4444840

where feature j holds the integer position ranker j assigned to the
document, or a missing sentinel.  Each fold directory Fold1..Fold5 holds
train.txt / vali.txt / test.txt whose qids partition the dataset.
"""
from __future__ import annotations

import csv
import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .learning import ExpertWeights
from .ranks import ObjectId, PartialRanking, fractional_rank

MISSING_TOKENS = ("NULL", "0")

_DOCID_RE = re.compile(r"#\s*docid\s*=\s*(\S+)")


@dataclass(frozen=True)
class QueryInstance:
    qid: str
    docs: tuple[ObjectId, ...]
    grades: dict[ObjectId, int]
    expert_lists: tuple[PartialRanking, ...]

    @property
    def d(self) -> int:
        return len(self.expert_lists)


@dataclass(frozen=True)
class FoldSplit:
    train: frozenset[str]
    vali: frozenset[str]
    test: frozenset[str]


@dataclass(frozen=True)
class Dataset:
    queries: tuple[QueryInstance, ...]
    folds: tuple[FoldSplit, ...]
    expert_names: tuple[str, ...]

    def query(self, qid: str) -> QueryInstance:
        for q in self.queries:
            if q.qid == qid:
                return q
        raise KeyError(qid)


def _parse_line(line: str, lineno: int, missing: Sequence[str]):
    body = line.strip()
    match = _DOCID_RE.search(body)
    if not match:
        raise ValueError(f"line {lineno}: missing '#docid =' comment")
    docid = match.group(1)
    body = body[: match.start()].strip()
    tokens = body.split()
    if len(tokens) < 2 or ":" not in tokens[1]:
        raise ValueError(f"line {lineno}: expected 'grade qid:<id> ...'")
    try:
        grade = int(tokens[0])
    except ValueError as exc:
        raise ValueError(f"line {lineno}: bad grade {tokens[0]!r}") from exc
    key, qid = tokens[1].split(":", 1)
    if key != "qid":
        raise ValueError(f"line {lineno}: expected qid:<id>, got {tokens[1]!r}")
    positions: dict[int, int] = {}
    for token in tokens[2:]:
        if ":" not in token:
            raise ValueError(f"line {lineno}: malformed feature token {token!r}")
        feat, value = token.split(":", 1)
        try:
            j = int(feat)
        except ValueError as exc:
            raise ValueError(f"line {lineno}: bad feature index {feat!r}") from exc
        if value in missing:
            continue
        try:
            positions[j] = int(value)
        except ValueError as exc:
            raise ValueError(f"line {lineno}: bad position {value!r}") from exc
        if positions[j] < 1:
            raise ValueError(f"line {lineno}: position must be >= 1, got {value}")
    return qid, docid, grade, positions


def parse_letor_file(path: Path | str, missing: Sequence[str] = MISSING_TOKENS) -> list[QueryInstance]:
    """Parse one LETOR aggregation file into per-query instances."""
    path = Path(path)
    per_query: dict[str, list[tuple[str, int, dict[int, int]]]] = {}
    n_features = None
    with path.open() as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            qid, docid, grade, positions = _parse_line(line, lineno, missing)
            tokens = line.split("#", 1)[0].split()
            count = len(tokens) - 2
            if n_features is None:
                n_features = count
            elif count != n_features:
                raise ValueError(
                    f"line {lineno}: {count} ranker features, expected {n_features}"
                )
            per_query.setdefault(qid, []).append((docid, grade, positions))
    queries = []
    for qid, rows in per_query.items():
        docs = tuple(docid for docid, _, _ in rows)
        if len(set(docs)) != len(docs):
            raise ValueError(f"query {qid}: duplicate document ids")
        grades = {docid: grade for docid, grade, _ in rows}
        experts = []
        for j in range(1, (n_features or 0) + 1):
            ranked = {docid: pos[j] for docid, _, pos in rows if j in pos}
            if ranked:
                experts.append(fractional_to_partial(ranked))
            else:
                experts.append(PartialRanking(entries={}, direction="top"))
        queries.append(
            QueryInstance(qid=qid, docs=docs, grades=grades, expert_lists=tuple(experts))
        )
    return queries


def fractional_to_partial(positions: dict[ObjectId, float]) -> PartialRanking:
    """Raw ranker positions to a subset-normalized partial ranking.

    Tied positions are averaged on the raw values before normalizing by
    (k+1), so two documents sharing position 5 become 5.5 and 5.5.
    """
    ranking = fractional_rank(positions, "ascending")
    return PartialRanking(entries=dict(ranking.entries), direction="top")


def load_letor_dataset(root: Path | str, missing: Sequence[str] = MISSING_TOKENS) -> Dataset:
    """Load Fold1..Fold5/{train,vali,test}.txt under `root`."""
    root = Path(root)
    all_queries: dict[str, QueryInstance] = {}
    folds = []
    for fold in range(1, 6):
        fold_dir = root / f"Fold{fold}"
        if not fold_dir.is_dir():
            raise FileNotFoundError(f"missing fold directory: {fold_dir}")
        split_qids = {}
        for part in ("train", "vali", "test"):
            part_path = fold_dir / f"{part}.txt"
            if not part_path.is_file():
                raise FileNotFoundError(f"missing fold file: {part_path}")
            queries = parse_letor_file(part_path, missing)
            split_qids[part] = frozenset(q.qid for q in queries)
            for q in queries:
                all_queries.setdefault(q.qid, q)
        folds.append(
            FoldSplit(train=split_qids["train"], vali=split_qids["vali"], test=split_qids["test"])
        )
    if not all_queries:
        raise ValueError(f"no queries found under {root}")
    d_values = {q.d for q in all_queries.values()}
    if len(d_values) != 1:
        raise ValueError(f"inconsistent expert counts across queries: {sorted(d_values)}")
    d = d_values.pop()
    names = tuple(f"ranker_{j + 1}" for j in range(d))
    return Dataset(
        queries=tuple(all_queries.values()), folds=tuple(folds), expert_names=names
    )


def write_letor_file(
    queries: Iterable[QueryInstance],
    path: Path | str,
    missing_token: str = "NULL",
) -> None:
    """Serialize queries back to LETOR lines (round-trip inverse of parsing).

    Expert positions are recovered from the subset-normalized values; only
    tie-free integer positions survive a lossless round trip.
    """
    lines = []
    for q in queries:
        d = q.d
        raw_positions: list[dict[ObjectId, int]] = []
        for p in q.expert_lists:
            k = p.k
            raw = {}
            for doc, v in p.entries.items():
                pos = v * (k + 1)
                raw[doc] = int(round(pos))
            raw_positions.append(raw)
        for doc in q.docs:
            feats = []
            for j in range(d):
                pos = raw_positions[j].get(doc)
                feats.append(f"{j + 1}:{pos if pos is not None else missing_token}")
            lines.append(
                f"{q.grades[doc]} qid:{q.qid} " + " ".join(feats) + f" #docid = {doc}"
            )
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""))


def read_rank_table(path: Path | str) -> tuple[list[ObjectId], list[str], list[dict[ObjectId, int]]]:
    """Read an 'item,source1,source2,...' CSV of integer ranks with blanks.

    Returns (items, source names, raw integer ranks per source).
    """
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file") from None
        if len(header) < 2:
            raise ValueError(f"{path}: header must be 'item,source1,...'")
        sources = [name.strip() for name in header[1:]]
        items: list[ObjectId] = []
        raw_ranks: list[dict[ObjectId, int]] = [dict() for _ in sources]
        seen = set()
        for lineno, row in enumerate(reader, start=2):
            if not row or not any(cell.strip() for cell in row):
                continue
            item = row[0].strip()
            if item in seen:
                raise ValueError(f"{path}:{lineno}: duplicate item {item!r}")
            seen.add(item)
            items.append(item)
            for j, cell in enumerate(row[1 : len(sources) + 1]):
                cell = cell.strip()
                if not cell:
                    continue
                try:
                    raw_ranks[j][item] = int(cell)
                except ValueError as exc:
                    raise ValueError(
                        f"{path}:{lineno}: non-integer rank {cell!r} for source {sources[j]}"
                    ) from exc
    if not items:
        raise ValueError(f"{path}: no item rows")
    return items, sources, raw_ranks


def parse_ranking_csv(path: Path | str) -> tuple[list[ObjectId], list[str], list[PartialRanking]]:
    """Parse a multi-source ranking CSV into one partial ranking per source."""
    items, sources, raw_ranks = read_rank_table(path)
    experts = [
        fractional_to_partial(ranks) if ranks else PartialRanking(entries={}, direction="top")
        for ranks in raw_ranks
    ]
    return items, sources, experts


def save_weights(w: ExpertWeights, path: Path | str) -> None:
    doc = {
        "expert_names": list(w.expert_names),
        "weights": list(w.weights),
        "bias": w.bias,
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def load_weights(path: Path | str) -> ExpertWeights:
    doc = json.loads(Path(path).read_text())
    for key in ("expert_names", "weights", "bias"):
        if key not in doc:
            raise ValueError(f"{path}: weights document missing field {key!r}")
    if len(doc["weights"]) != len(doc["expert_names"]):
        raise ValueError(f"{path}: weights/expert_names length mismatch")
    return ExpertWeights(
        weights=tuple(float(v) for v in doc["weights"]),
        bias=float(doc["bias"]),
        expert_names=tuple(doc["expert_names"]),
    )
