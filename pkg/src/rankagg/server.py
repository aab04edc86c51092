"""JSON API backing the weight-explorer UI.

The dataset (a multi-source ranking CSV) is loaded once at startup and the
non-informative extension precomputed; every request re-aggregates with the
posted weights against that immutable state.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .aggregation import weighted_aggregate
from .correlation import rho_of_values
from .imputation import extend_all
from .ingest import fractional_to_partial, read_rank_table
from .ranks import ObjectId, RankMatrix


@dataclass(frozen=True)
class ServeState:
    items: tuple[ObjectId, ...]
    sources: tuple[str, ...]
    known_ranks: tuple[dict[ObjectId, int], ...]
    matrix: RankMatrix
    default_weights: tuple[float, ...]


def build_state(csv_path) -> ServeState:
    items, sources, raw_ranks = read_rank_table(csv_path)
    experts = [fractional_to_partial(r) for r in raw_ranks]
    matrix = extend_all(experts, items, names=sources, direction="top")
    return ServeState(
        items=tuple(items),
        sources=tuple(sources),
        known_ranks=tuple(dict(r) for r in raw_ranks),
        matrix=matrix,
        default_weights=(1.0,) * len(sources),
    )


class AggregateRequest(BaseModel):
    weights: list[float]


def consensus_rho(matrix: RankMatrix, weights) -> float:
    """rho_n of the weighted consensus ranking against the extended columns."""
    result = weighted_aggregate(matrix, weights)
    consensus = result.ranking.values_for(list(matrix.objects))
    return rho_of_values(np.column_stack([consensus, matrix.values]))


def build_app(state: ServeState, ui_dir=None) -> FastAPI:
    app = FastAPI(title="rankagg explorer API")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.get("/api/meta")
    def meta() -> dict:
        return {
            "experts": list(state.sources),
            "items": len(state.items),
            "default_weights": list(state.default_weights),
        }

    @app.get("/api/rankings")
    def rankings() -> dict:
        rows = []
        for i, item in enumerate(state.items):
            rows.append(
                {
                    "item": item,
                    "known": {
                        src: state.known_ranks[j].get(item)
                        for j, src in enumerate(state.sources)
                    },
                    "extended": {
                        src: float(state.matrix.values[i, j])
                        for j, src in enumerate(state.sources)
                    },
                }
            )
        return {"items": rows}

    @app.post("/api/aggregate")
    def aggregate(request: AggregateRequest) -> dict:
        if len(request.weights) != len(state.sources):
            raise HTTPException(
                status_code=400,
                detail=f"expected {len(state.sources)} weights, got {len(request.weights)}",
            )
        result = weighted_aggregate(state.matrix, request.weights)
        return {
            "order": result.order(),
            "raw_scores": {str(k): v for k, v in result.raw_scores.items()},
            "ranks": {str(k): v for k, v in result.ranking.entries.items()},
            "rho": consensus_rho(state.matrix, request.weights),
        }

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
