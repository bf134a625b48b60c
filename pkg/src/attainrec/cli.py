"""Command-line interface.

Subcommands: gen, rate, query, train, eval-cf, eval-pr, fit-lomax, hist,
serve. Every subcommand accepts --seed and --data. Exit codes: 0 success,
1 usage error, 2 data/processing error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import cf, datagen, evalstats
from .attainment import RATING_ATTR, rating_sample
from .dataset import DatasetError
from .graph import EdgeKind, GraphError, VertexKind
from .querylang import QuerySyntaxError, QueryValidationError, parse, validate
from .queryexec import run_query
from .service import AppConfig, execute_query_text, format_cell, http_serve, prepare_graph


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="random seed")
    common.add_argument("--data", help="dataset directory")

    parser = _Parser(prog="attainrec", description=__doc__)
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("gen", parents=[common], help="generate a synthetic dataset")
    p.add_argument("--scale", type=float, default=1.0, help="1.0 = full-size dataset")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--config", help="JSON file overriding generator fields")

    sub.add_parser("rate", parents=[common], help="annotate ratings and print per-game stats")

    p = sub.add_parser("query", parents=[common], help="run a query against a dataset")
    p.add_argument("--file", help="file containing the query text")
    p.add_argument("--text", help="query text")
    p.add_argument("--header", action="store_true", help="print a column header line")

    p = sub.add_parser("train", parents=[common], help="train the recommender")
    p.add_argument("--out", required=True, help="model output file")
    p.add_argument("--factors", type=int, default=20)
    p.add_argument("--epochs", type=int, default=20)
    p.add_argument("--lr", type=float, default=0.007)
    p.add_argument("--reg", type=float, default=0.02)

    p = sub.add_parser("eval-cf", parents=[common], help="k-fold RMSE/MAE")
    p.add_argument("--folds", type=int, default=5)

    p = sub.add_parser("eval-pr", parents=[common], help="precision/recall at n")
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--holdout", type=float, default=0.2, help="test fraction")

    sub.add_parser("fit-lomax", parents=[common], help="fit the rating distribution")

    p = sub.add_parser("hist", parents=[common], help="per-genre rating histograms")
    p.add_argument("--bins", type=int, default=50)
    p.add_argument("--plot-data", help="also write (bin, density) lines to this file")

    p = sub.add_parser("serve", parents=[common], help="start the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--cors", default="*", help="Access-Control-Allow-Origin value")
    p.add_argument("--limit", type=int, default=5, help="default recommendation count")

    return parser


def _require_data(args) -> str:
    if not args.data:
        raise UsageError("--data is required for this command")
    return args.data


def _load(args):
    try:
        return prepare_graph(_require_data(args))
    except (DatasetError, GraphError, OSError) as exc:
        raise DataError(str(exc)) from exc


def _ratings_table(graph) -> cf.RatingsTable:
    table = cf.RatingsTable.from_graph(graph)
    if len(table) == 0:
        raise DataError("dataset has no rated ownership edges")
    return table


def _cmd_gen(args) -> None:
    overrides = {}
    if args.config:
        try:
            overrides = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise DataError(f"cannot read config: {exc}") from exc
    if "attainment" in overrides:
        overrides["attainment"] = evalstats.LomaxParams(**overrides["attainment"])
    try:
        config = datagen.GenConfig(scale=args.scale, seed=args.seed, **overrides)
        _, report = datagen.generate(config, args.out)
    except (TypeError, datagen.InfeasibleConfig) as exc:
        raise DataError(str(exc)) from exc
    except OSError as exc:
        raise DataError(f"cannot write dataset: {exc}") from exc
    print(report.format())


def _cmd_rate(args) -> None:
    graph, _ = _load(args)
    print("game\tcount\tmin\tmax\tmean")
    for gid in graph.vertices_of_kind(VertexKind.GAME):
        values = [
            graph.edge_attr(eid, RATING_ATTR)
            for eid, _ in graph.neighbors(gid, EdgeKind.OWNS, "in")
        ]
        values = [v for v in values if v is not None]
        if not values:
            continue
        arr = np.asarray(values, dtype=np.float64)
        print(
            "\t".join(
                [
                    format_cell(graph.vertex_attr(gid, "name")),
                    str(len(arr)),
                    format_cell(float(arr.min())),
                    format_cell(float(arr.max())),
                    format_cell(float(arr.mean())),
                ]
            )
        )


def _cmd_query(args) -> None:
    if bool(args.file) == bool(args.text):
        raise UsageError("provide exactly one of --file or --text")
    if args.file:
        try:
            text = Path(args.file).read_text(encoding="utf-8")
        except OSError as exc:
            raise DataError(f"cannot read query file: {exc}") from exc
    else:
        text = args.text
    graph, _ = _load(args)
    try:
        response = execute_query_text(text, graph)
    except (QuerySyntaxError, QueryValidationError) as exc:
        raise DataError(f"query error: {exc}") from exc
    if args.header:
        print("\t".join(response["columns"]))
    for row in response["rows"]:
        print("\t".join(format_cell(cell) for cell in row))


def _cmd_train(args) -> None:
    graph, _ = _load(args)
    table = _ratings_table(graph)
    params = cf.TrainParams(
        factors=args.factors, epochs=args.epochs, lr=args.lr, reg=args.reg, seed=args.seed
    )
    model = cf.train(table, params)
    try:
        cf.save_model(model, args.out)
    except OSError as exc:
        raise DataError(f"cannot write model: {exc}") from exc
    print(f"trained on {len(table)} ratings ({table.n_users} users, {table.n_items} items)")
    print(f"train_rmse\t{format_cell(float(np.sqrt(cf.training_mse(model, table))))}")


def _cmd_eval_cf(args) -> None:
    graph, _ = _load(args)
    table = _ratings_table(graph)
    try:
        folds = cf.cross_validate(table, cf.TrainParams(seed=args.seed), k=args.folds)
    except (cf.TooFewRatings, ValueError) as exc:
        raise DataError(str(exc)) from exc
    print("fold\trmse\tmae")
    for i, (r, m) in enumerate(folds, start=1):
        print(f"{i}\t{format_cell(r)}\t{format_cell(m)}")
    mean_rmse = float(np.mean([r for r, _ in folds]))
    mean_mae = float(np.mean([m for _, m in folds]))
    print(f"mean\t{format_cell(mean_rmse)}\t{format_cell(mean_mae)}")


def _cmd_eval_pr(args) -> None:
    if not 0.0 < args.holdout < 1.0:
        raise UsageError("--holdout must be in (0, 1)")
    graph, _ = _load(args)
    table = _ratings_table(graph)
    rng = np.random.default_rng(args.seed)
    order = rng.permutation(len(table))
    n_test = max(1, int(round(args.holdout * len(table))))
    if n_test >= len(table):
        raise DataError("holdout leaves no training data")
    test_idx, train_idx = order[:n_test], order[n_test:]
    model = cf.train(table.subset(train_idx), cf.TrainParams(seed=args.seed))
    test = [
        (table.user_ids[int(table.users[t])], table.item_ids[int(table.items[t])], table.ratings[t])
        for t in test_idx
    ]
    print("threshold\tn\tprecision\trecall\tusers")
    for point in evalstats.precision_recall_at_n(model, test, args.n):
        print(
            f"{format_cell(point.threshold)}\t{point.n}\t{format_cell(point.precision)}"
            f"\t{format_cell(point.recall)}\t{point.users_counted}"
        )


def _cmd_fit_lomax(args) -> None:
    graph, _ = _load(args)
    sample = rating_sample(graph)
    try:
        params = evalstats.lomax_fit(sample)
    except (ValueError, evalstats.DegenerateSample) as exc:
        raise DataError(str(exc)) from exc
    ks = evalstats.ks_statistic(sample, params)
    print(f"shape\t{format_cell(params.shape)}")
    print(f"scale\t{format_cell(params.scale)}")
    print(f"ks\t{format_cell(ks)}")


def _cmd_hist(args) -> None:
    if args.bins < 1:
        raise UsageError("--bins must be positive")
    graph, _ = _load(args)
    lines = ["genre\tbin_left\tbin_right\tdensity"]
    for spec in evalstats.genre_histograms(graph, args.bins):
        for i, density in enumerate(spec.densities):
            lines.append(
                f"{spec.group}\t{format_cell(spec.edges[i])}"
                f"\t{format_cell(spec.edges[i + 1])}\t{format_cell(density)}"
            )
    text = "\n".join(lines)
    print(text)
    if args.plot_data:
        try:
            Path(args.plot_data).write_text(text + "\n", encoding="utf-8")
        except OSError as exc:
            raise DataError(f"cannot write plot data: {exc}") from exc


def _cmd_serve(args) -> None:
    config = AppConfig(
        data_dir=_require_data(args),
        host=args.host,
        port=args.port,
        default_limit=args.limit,
        seed=args.seed,
        cors_origin=args.cors,
    )
    http_serve(config)


_COMMANDS = {
    "gen": _cmd_gen,
    "rate": _cmd_rate,
    "query": _cmd_query,
    "train": _cmd_train,
    "eval-cf": _cmd_eval_cf,
    "eval-pr": _cmd_eval_pr,
    "fit-lomax": _cmd_fit_lomax,
    "hist": _cmd_hist,
    "serve": _cmd_serve,
}


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_help(sys.stderr)
            return 1
        _COMMANDS[args.command](args)
        return 0
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 1
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
