"""Command-line entry point.

Every subcommand is a thin shell over the library modules: synth/import/
stats cover dataset work, train/evaluate/compare the learners, predict and
serve the scoring side, pipeline-run the dataflow graphs. Exit codes:
0 success, 1 usage error, 2 data or model error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .data import DataError, parse_csv, split_data, summarize, synthesize, to_csv
from .data.table import format_cell
from .learners import (
    ALGORITHMS,
    LearnerConfig,
    ModelFormatError,
    TrainingError,
    compare_models,
    load_model_file,
    save_model,
    train_model,
)
from .metrics import DegenerateVarianceError, MetricsError
from .pipeline import GraphRunError, GraphValidationError, export_scored_csv, parse_graph, run_graph
from .service import batch_score_file, resolve_token, run_in_thread, score_records, serve

DEFAULT_SEED = 42

USAGE_EXIT = 1
DATA_EXIT = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_EXIT)


def _add_learner_flags(p):
    p.add_argument("--algo", choices=ALGORITHMS, default="boosted")
    p.add_argument("--trees", type=int, default=100, help="boosting stages / forest size")
    p.add_argument("--lr", type=float, default=0.2, help="shrinkage per boosting stage")
    p.add_argument("--max-leaves", type=int, default=20)
    p.add_argument("--min-leaf", type=int, default=10)
    p.add_argument("--k", type=int, default=5, help="neighbors for knn")
    p.add_argument("--include-date", action="store_true",
                   help="use the Date column as a months-since-2019-01 feature")


def _config(args) -> LearnerConfig:
    return LearnerConfig(
        algo=args.algo,
        trees=args.trees,
        learning_rate=args.lr,
        max_leaves=args.max_leaves,
        min_samples_leaf=args.min_leaf,
        k=args.k,
        seed=args.seed,
        include_month=args.include_date,
    )


def build_parser() -> _Parser:
    parser = _Parser(prog="carprice", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a calibrated synthetic listing CSV")
    p.add_argument("--rows", type=int, default=1600)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", required=True)

    p = sub.add_parser("import", help="parse and validate a listings CSV")
    p.add_argument("--data", required=True)
    p.add_argument("--out", help="write the normalized CSV back out")

    p = sub.add_parser("stats", help="price statistics for a listings CSV")
    p.add_argument("--data", required=True)

    p = sub.add_parser("train", help="train a model and report held-out errors")
    p.add_argument("--data", required=True)
    p.add_argument("--model", required=True, help="where to write the model file")
    p.add_argument("--split", type=float, default=0.75, help="training fraction")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    _add_learner_flags(p)

    p = sub.add_parser("evaluate", help="score a CSV with a model and report errors")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--out", help="write the scored CSV here")

    p = sub.add_parser("compare", help="train several algorithms, rank by held-out RMSE")
    p.add_argument("--data", required=True)
    p.add_argument("--algos", default="boosted,forest,tree,knn")
    p.add_argument("--split", type=float, default=0.75)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--trees", type=int, default=100)
    p.add_argument("--lr", type=float, default=0.2)
    p.add_argument("--max-leaves", type=int, default=20)
    p.add_argument("--min-leaf", type=int, default=10)
    p.add_argument("--k", type=int, default=5)

    p = sub.add_parser("predict", help="score one record with a saved model")
    p.add_argument("--model", required=True)
    p.add_argument("--request", help="request-shaped JSON document to score")
    p.add_argument("--car-model", help="Model field, e.g. 'Model X'")
    p.add_argument("--year")
    p.add_argument("--battery")
    p.add_argument("--miles")
    p.add_argument("--price", default="0")
    p.add_argument("--date")

    p = sub.add_parser("serve", help="serve a model over HTTP")
    p.add_argument("--model", required=True)
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--host", default="0.0.0.0")
    p.add_argument("--token", help="bearer token literal")
    p.add_argument("--token-file", help="file holding the bearer token")

    p = sub.add_parser("pipeline-run", help="execute a dataflow graph config")
    p.add_argument("--graph", required=True)
    p.add_argument("--input", action="append", default=[], metavar="NODE=CSVPATH",
                   help="bind an import node to a CSV file")
    p.add_argument("--export", metavar="NODE=CSVPATH",
                   help="write a scored node's CSV here")
    return parser


def _print_report_lines(report):
    for line in report.lines():
        print(line)


def _cmd_synth(args) -> int:
    ds = synthesize(args.rows, args.seed)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(to_csv(ds))
    print(f"wrote {len(ds)} rows to {args.out}")
    return 0


def _read_dataset(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_csv(fh.read())


def _cmd_import(args) -> int:
    ds = _read_dataset(args.data)
    print(f"rows: {len(ds)}")
    for col in ds.schema:
        print(f"  {col.name:<12} {col.kind:<12} {col.role}")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(to_csv(ds))
        print(f"normalized CSV written to {args.out}")
    return 0


def _cmd_stats(args) -> int:
    stats = summarize(_read_dataset(args.data))
    print(f"rows:         {stats.count}")
    print(f"price mean:   {stats.price_mean:.2f}")
    print(f"price median: {format_cell(stats.price_median, 'numeric')}")
    print(f"price mode:   {format_cell(stats.price_mode, 'numeric')}")
    if stats.per_model_mean:
        print("mean price by model:")
        for model, mean in stats.per_model_mean.items():
            print(f"  {model:<14} {mean:.2f}")
    return 0


def _cmd_train(args) -> int:
    ds = _read_dataset(args.data)
    train, holdout = split_data(ds, args.split, args.seed)
    model = train_model(train, _config(args))
    save_model(model, args.model)
    print(f"trained {args.algo} on {len(train)} rows; model written to {args.model}")
    if len(holdout):
        preds = model.predict_dataset(holdout)
        y = holdout.column(model.encoding.target)
        try:
            from .metrics import evaluate

            _print_report_lines(evaluate(y, preds))
        except DegenerateVarianceError as err:
            print("held-out targets are constant; relative errors undefined")
            print(f"Root Mean Squared Error       {err.rmse:.6f}")
            print(f"Mean Absolute Error           {err.mae:.6f}")
    else:
        print("no held-out rows; skipping evaluation")
    return 0


def _cmd_evaluate(args) -> int:
    model = load_model_file(args.model)
    result = batch_score_file(model, args.data)
    if result.report is not None:
        _print_report_lines(result.report)
    else:
        print("targets are constant; relative errors undefined")
        print(f"Root Mean Squared Error       {result.rmse:.6f}")
        print(f"Mean Absolute Error           {result.mae:.6f}")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(result.to_csv())
        print(f"scored CSV written to {args.out}")
    return 0


def _cmd_compare(args) -> int:
    ds = _read_dataset(args.data)
    train, holdout = split_data(ds, args.split, args.seed)
    if not len(holdout):
        print("error: split leaves no held-out rows to compare on", file=sys.stderr)
        return DATA_EXIT
    names = [a.strip() for a in args.algos.split(",") if a.strip()]
    configs = []
    for name in names:
        if name not in ALGORITHMS:
            print(f"error: unknown algorithm {name!r}", file=sys.stderr)
            return USAGE_EXIT
        configs.append((name, LearnerConfig(
            algo=name, trees=args.trees, learning_rate=args.lr, max_leaves=args.max_leaves,
            min_samples_leaf=args.min_leaf, k=args.k, seed=args.seed,
        )))
    rows = compare_models(train, holdout, configs)
    print(f"{'Algorithm':<12} {'Root Mean Squared Error':>24}")
    for row in rows:
        print(f"{row.name:<12} {row.rmse:>24.2f}")
    return 0


def _cmd_predict(args) -> int:
    model = load_model_file(args.model)
    if args.request:
        with open(args.request, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
        records = doc.get("Inputs", {}).get("input1", [])
        if not records:
            print("error: request document has no Inputs.input1 records", file=sys.stderr)
            return DATA_EXIT
    else:
        missing = [flag for flag, value in
                   (("--car-model", args.car_model), ("--year", args.year),
                    ("--battery", args.battery), ("--miles", args.miles))
                   if value is None]
        if missing:
            print(f"error: predict needs --request or {', '.join(missing)}", file=sys.stderr)
            return USAGE_EXIT
        record = {
            "Model": args.car_model,
            "Year": args.year,
            "Price": args.price,
            "Battery": args.battery,
            "Miles": args.miles,
        }
        if args.date:
            record["Date"] = args.date
        records = [record]
    output = score_records(model, records)
    print(json.dumps({"Results": {"output1": output}}, indent=2))
    return 0


def _cmd_serve(args) -> int:
    token = resolve_token(args.token, args.token_file)
    server = serve(args.model, args.port, token, host=args.host)
    if not args.token and not args.token_file:
        print(f"generated bearer token: {token}", file=sys.stderr)
    host, port = server.server_address[:2]
    print(f"scoring service listening on http://{host}:{port}/api/v2/score?api-version=2")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()
    return 0


def _parse_bindings(pairs, flag):
    bindings = {}
    for pair in pairs:
        if "=" not in pair:
            raise DataError(f"{flag} wants NODE=PATH, got {pair!r}")
        node, path = pair.split("=", 1)
        bindings[node] = path
    return bindings


def _cmd_pipeline_run(args) -> int:
    with open(args.graph, "r", encoding="utf-8") as fh:
        graph = parse_graph(fh.read())
    inputs = {}
    for node, path in _parse_bindings(args.input, "--input").items():
        with open(path, "r", encoding="utf-8") as fh:
            inputs[node] = fh.read()
    results = run_graph(graph, inputs)
    failed = False
    for node_id, result in results.items():
        line = f"{node_id:<12} {result.status}"
        if result.error:
            line += f"  ({result.error})"
        print(line)
        if result.status != "ok":
            failed = True
        for value in result.outputs.values():
            if hasattr(value, "to_ordered_dict"):
                for metric_line in value.lines():
                    print(f"    {metric_line}")
    if args.export:
        bindings = _parse_bindings([args.export], "--export")
        ((node, path),) = bindings.items()
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(export_scored_csv(results, node))
        print(f"scored CSV for node {node} written to {path}")
    return DATA_EXIT if failed else 0


COMMANDS = {
    "synth": _cmd_synth,
    "import": _cmd_import,
    "stats": _cmd_stats,
    "train": _cmd_train,
    "evaluate": _cmd_evaluate,
    "compare": _cmd_compare,
    "predict": _cmd_predict,
    "serve": _cmd_serve,
    "pipeline-run": _cmd_pipeline_run,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_EXIT
    try:
        return COMMANDS[args.command](args)
    except (DataError, TrainingError, ModelFormatError, MetricsError,
            GraphValidationError, GraphRunError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_EXIT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_EXIT


if __name__ == "__main__":
    sys.exit(main())
