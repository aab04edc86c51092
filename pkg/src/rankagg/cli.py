"""Command-line entry points.

Exit codes: 0 success, 1 usage or parse error, 2 numeric failure
(optimizer non-convergence, zero-variance correlation).
"""
from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from .aggregation import borda_aggregate, geometric_mean_aggregate, min_aggregate
from .correlation import UndefinedCorrelationError, spearman_multivariate
from .evaluation import METHODS, cross_validate, evaluate_with_fold_weights
from .imputation import OptimizerConfig, extend_all, impute_optimal
from .ingest import (
    load_letor_dataset,
    load_weights,
    parse_ranking_csv,
    save_weights,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERIC = 2

AGG_METHODS = {
    "geomean": geometric_mean_aggregate,
    "borda": borda_aggregate,
    "min": min_aggregate,
}


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _load_csv_matrix(path: str, direction: str):
    items, sources, experts = parse_ranking_csv(path)
    return extend_all(experts, items, names=sources, direction=direction)


def cmd_aggregate(args: argparse.Namespace) -> int:
    matrix = _load_csv_matrix(args.input, args.direction)
    result = AGG_METHODS[args.method](matrix)
    n = matrix.n
    rows = [
        [str(item), f"{result.raw_scores[item]:.12g}", f"{result.ranking.entries[item] * (n + 1):.12g}"]
        for item in result.order()
    ]
    _write_csv(Path(args.out), ["item", "raw_score", "rank"], rows)
    if matrix.d >= 2:
        print(f"multivariate rho of extended matrix: {spearman_multivariate(matrix).rho:.6f}")
    print(f"wrote {len(rows)} rows to {args.out}")
    return EXIT_OK


def _fold_weights_path(base: Path, fold: int) -> Path:
    return base.with_name(f"{base.stem}.fold{fold}{base.suffix or '.json'}")


def cmd_train(args: argparse.Namespace) -> int:
    dataset = load_letor_dataset(args.data)
    if args.method not in ("rags_top", "rags_bottom"):
        print(f"train requires a rags method, got {args.method}", file=sys.stderr)
        return EXIT_USAGE
    from .evaluation import fit_fold

    base = Path(args.weights)
    for i in range(len(dataset.folds)):
        weights = fit_fold(dataset, i, args.method, ridge=args.ridge)
        path = _fold_weights_path(base, i + 1)
        save_weights(weights, path)
        print(f"fold {i + 1}: wrote {path}")
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    dataset = load_letor_dataset(args.data)
    if args.weights and args.method in ("rags_top", "rags_bottom"):
        base = Path(args.weights)
        fold_weights = [
            load_weights(_fold_weights_path(base, i + 1))
            for i in range(len(dataset.folds))
        ]
        table = evaluate_with_fold_weights(dataset, args.method, fold_weights)
    else:
        table, _ = cross_validate(dataset, args.method, ridge=args.ridge)
    print(table.format())
    if args.report:
        rows = table.to_rows()
        header = list(rows[0].keys())
        _write_csv(Path(args.report), header, [[row[h] for h in header] for row in rows])
        print(f"wrote report to {args.report}")
    return EXIT_OK


def cmd_impute(args: argparse.Namespace) -> int:
    items, sources, experts = parse_ranking_csv(args.input)
    noninf = extend_all(experts, items, names=sources, direction="top")
    rho_before = spearman_multivariate(noninf).rho if noninf.d >= 2 else float("nan")
    exit_code = EXIT_OK
    if args.mode == "noninformative":
        completed = noninf
        rho_after = rho_before
    else:
        cfg = OptimizerConfig(
            max_iters=args.max_iters,
            tolerance=args.tolerance,
            penalty_init=args.penalty_init,
            penalty_growth=args.penalty_growth,
            penalty_rounds=args.penalty_rounds,
        )
        completed, assignment = impute_optimal(experts, items, args.mode, cfg)
        rho_after = spearman_multivariate(completed).rho if completed.d >= 2 else float("nan")
        if assignment.feasibility_residual > cfg.tolerance:
            print(
                f"warning: optimizer did not converge "
                f"(residual {assignment.feasibility_residual:.2e} > {cfg.tolerance:.0e}); "
                "writing best-found solution",
                file=sys.stderr,
            )
            exit_code = EXIT_NUMERIC
    rows = [
        [str(item)] + [f"{completed.values[i, j]:.12g}" for j in range(completed.d)]
        for i, item in enumerate(completed.objects)
    ]
    _write_csv(Path(args.out), ["item"] + list(sources), rows)
    print(f"rho before (non-informative): {rho_before:.6f}")
    print(f"rho after ({args.mode}): {rho_after:.6f}")
    print(f"wrote completed table to {args.out}")
    return exit_code


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .server import build_app, build_state

    state = build_state(args.input)
    ui_dir = Path(args.ui) if args.ui else None
    if ui_dir is not None and not (ui_dir / "index.html").is_file():
        print(f"error: no index.html under {ui_dir}", file=sys.stderr)
        return EXIT_USAGE
    app = build_app(state, ui_dir=ui_dir)
    print(f"serving {len(state.items)} items x {len(state.sources)} sources on port {args.port}")
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rankagg", description="Rank aggregation toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("aggregate", help="Aggregate a multi-source ranking CSV.")
    p.add_argument("--input", required=True)
    p.add_argument("--method", choices=sorted(AGG_METHODS), default="geomean")
    p.add_argument("--direction", choices=["top", "bottom"], default="top")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_aggregate)

    p = sub.add_parser("train", help="Fit per-fold expert weights on a LETOR directory.")
    p.add_argument("--data", required=True)
    p.add_argument("--method", choices=["rags_top", "rags_bottom"], default="rags_top")
    p.add_argument("--ridge", type=float, default=1e-8)
    p.add_argument("--weights", required=True, help="Base path; fold files get a .foldN suffix.")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="Cross-validated evaluation on a LETOR directory.")
    p.add_argument("--data", required=True)
    p.add_argument("--method", choices=list(METHODS), default="rags_top")
    p.add_argument("--ridge", type=float, default=1e-8)
    p.add_argument("--weights", help="Optional base path of per-fold weight files.")
    p.add_argument("--report", help="Write the metrics table to this CSV.")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("impute", help="Complete a partially ranked CSV.")
    p.add_argument("--input", required=True)
    p.add_argument("--mode", choices=["noninformative", "max", "min"], default="noninformative")
    p.add_argument("--out", required=True)
    p.add_argument("--max-iters", type=int, default=400)
    p.add_argument("--tolerance", type=float, default=1e-6)
    p.add_argument("--penalty-init", type=float, default=10.0)
    p.add_argument("--penalty-growth", type=float, default=10.0)
    p.add_argument("--penalty-rounds", type=int, default=5)
    p.set_defaults(func=cmd_impute)

    p = sub.add_parser("serve", help="Serve the weight-explorer JSON API.")
    p.add_argument("--input", required=True)
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--ui", help="Directory with the built explorer UI to serve at /.")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UndefinedCorrelationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, FileNotFoundError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
