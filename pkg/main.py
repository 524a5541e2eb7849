import argparse
import sys
from dataclasses import replace
from pathlib import Path

import pandas as pd
from colorama import Fore

from aquagauge.config import COMMANDS, SPLITS, load_config_file, resolve_config
from aquagauge.constants import DEFAULT_TEST_FRACTION, LENIENT, STRICT
from aquagauge.diseases import default_ruleset, diagnose, load_rules
from aquagauge.errors import DataError, EmptyInput, FeatureMismatch, InvariantViolation, MissingColumn
from aquagauge.forecast import build_features, build_supervised, split_by_station
from aquagauge.gbm import gbm_fit
from aquagauge.ingest import impute_missing, load_dataset
from aquagauge.logs import configure_logging, get_logger
from aquagauge.metrics import curve_frame, evaluate, report_frame, summary_line
from aquagauge.model_io import load_model, serialize_model
from aquagauge.output import emit_frame, write_atomic
from aquagauge.wqi import compute_wqi

logger = get_logger("cli")

EXIT_OK = 0
EXIT_DATA = 2
EXIT_INVARIANT = 3

EMPTY_TASK = "need ≥ 2 observations for some station"


def build_parser():
    # Unset flags stay out of the namespace so config files can fill them
    shared = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    shared.add_argument("--input", help="Station CSV file")
    shared.add_argument("--mode", choices=["normative", "legacy-nco", "legacy_nco"], help="Coliform scoring mode")
    shared.add_argument("--impute", choices=["drop", "median"], help="What to do with samples missing WQI inputs")
    shared.add_argument("--strict", action="store_true", help="Fail on any malformed cell instead of skipping it")
    shared.add_argument("--seed", type=int, help="Seed for the station split")
    shared.add_argument("--rules", help="Disease rules file (defaults to the shipped rules)")
    shared.add_argument("--model", help="Model file to write or read")
    shared.add_argument("--out", help="Output file, or output directory for plot-data")
    shared.add_argument("--config", help="JSON file with default settings")
    shared.add_argument("--test-fraction", dest="test_fraction", type=float, help="Share of stations held out")
    shared.add_argument("--split", choices=SPLITS, help="Which stations evaluate reports on")
    shared.add_argument("--curve", help="Training curve CSV (train)")
    shared.add_argument("--evaluation", help="Evaluation CSV to export for plotting (plot-data)")
    shared.add_argument("-v", "--verbose", action="count", help="Debug logging")
    shared.add_argument("-q", "--quiet", action="store_true", help="Warnings and errors only")

    parser = argparse.ArgumentParser(
        prog="aquagauge",
        description="Water quality index, WQI forecasting and fish disease diagnosis.",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    helps = {
        "wqi": "Compute the WQI table for every sample",
        "train": "Train a forecasting model",
        "predict": "Predict the WQI four months ahead",
        "evaluate": "Score a model on the station split",
        "diagnose": "Diagnose likely fish diseases",
        "plot-data": "Export loss curve and actual-vs-predicted data",
    }
    for name in COMMANDS:
        command = commands.add_parser(name, parents=[shared], help=helps[name], argument_default=argparse.SUPPRESS)
        if name == "train":
            command.add_argument("--n-trees", dest="n_trees", type=int)
            command.add_argument("--learning-rate", dest="learning_rate", type=float)
            command.add_argument("--max-depth", dest="max_depth", type=int)
            command.add_argument("--min-samples-split", dest="min_samples_split", type=int)
            command.add_argument("--min-samples-leaf", dest="min_samples_leaf", type=int)
    return parser


def load_samples(config):
    if config.input is None:
        raise DataError("--input is required")
    ds = load_dataset(config.input, STRICT if config.strict else LENIENT)
    if len(ds) == 0:
        raise EmptyInput()
    ds = impute_missing(ds, config.impute)
    if len(ds) == 0:
        raise EmptyInput()
    return ds


def supervised_task(config):
    task = build_supervised(load_samples(config), config.mode)
    if len(task) == 0:
        raise DataError(EMPTY_TASK)
    return task


def cmd_wqi(config):
    rows = []
    for sample in load_samples(config).samples:
        rec = compute_wqi(sample, config.mode)
        rows.append({"station_code": sample.station_code, "month_year": sample.month_year, **rec.as_row()})
    emit_frame(pd.DataFrame(rows), config.out, float_format="%.2f")


def cmd_train(config):
    task = supervised_task(config)
    train, test = split_by_station(task, config.split_fraction(), config.split_seed())
    logger.info(f"training on {len(train)} examples, {len(test)} held out")

    model = replace(gbm_fit(train.features, train.targets, config.hyperparams()), test_fraction=config.split_fraction())
    write_atomic(config.model, serialize_model(model))
    emit_frame(curve_frame(model), config.curve_path())
    logger.info(f"model written to {config.model}")
    print(f"final training loss: {model.training_curve[-1]:.6f}")


def cmd_predict(config):
    model = load_model(config.model)
    features, keys, wqis = build_features(load_samples(config), config.mode)
    if tuple(model.feature_names) != features.feature_names:
        raise FeatureMismatch(features.feature_names, model.feature_names)

    predicted = model.predict_many(features)
    frame = pd.DataFrame({
        "station_code": [station for station, _, _ in keys],
        "month_year": [f"{month}-{year}" for _, month, year in keys],
        "wqi": wqis,
        "predicted_wqi": predicted,
    })
    emit_frame(frame, config.out, float_format="%.6f")


# Seed and fraction of the station split the model was trained on, unless overridden.
# Overrides that would put training stations into the test side are refused.
def evaluation_split(config, model):
    trained_seed, trained_fraction = model.hyperparams.seed, model.test_fraction
    seed = trained_seed if config.seed is None else config.seed
    fraction = trained_fraction if config.test_fraction is None else config.test_fraction
    if fraction is None:
        fraction = DEFAULT_TEST_FRACTION

    if seed != trained_seed or (trained_fraction is not None and fraction != trained_fraction):
        raise DataError(
            f"model was trained with seed {trained_seed} and test fraction {trained_fraction}; "
            f"a split with seed {seed} and test fraction {fraction} would mix training and test stations"
        )
    return seed, fraction


def cmd_evaluate(config):
    model = load_model(config.model)
    task = supervised_task(config)
    if config.split == "all":
        selected = task
    else:
        seed, fraction = evaluation_split(config, model)
        train, test = split_by_station(task, fraction, seed)
        selected = train if config.split == "train" else test

    report = evaluate(model, selected)
    print(summary_line(report))
    emit_frame(report_frame(report), config.out or "evaluation.csv")


def cmd_diagnose(config):
    if config.rules:
        rules = load_rules(Path(config.rules).read_text(encoding="utf-8"))
    else:
        rules = default_ruleset()

    rows = []
    for sample in load_samples(config).samples:
        rec = compute_wqi(sample, config.mode)
        result = diagnose(rec, rules)
        rows.append({
            "station_code": sample.station_code,
            "month_year": sample.month_year,
            "wqi": rec.wqi,
            "disease": result.disease,
            "reason": result.reason,
            "suggestion": result.suggestion,
        })
    emit_frame(pd.DataFrame(rows), config.out, float_format="%.2f")


def read_evaluation(path):
    try:
        frame = pd.read_csv(path)
    except (pd.errors.EmptyDataError, pd.errors.ParserError) as exc:
        raise DataError(f"{path}: {exc}") from None
    for column in ("actual", "predicted"):
        if column not in frame.columns:
            raise MissingColumn(column)
    return frame[["actual", "predicted"]]


def cmd_plot_data(config):
    out = Path(config.out or ".")
    written = []

    # The model has a default path, so only a model file that exists is exported
    if config.evaluation is None or Path(config.model).exists():
        model = load_model(config.model)
        written.append(emit_frame(curve_frame(model), out / "loss_curve.csv"))
    if config.evaluation is not None:
        written.append(emit_frame(read_evaluation(config.evaluation), out / "actual_vs_predicted.csv"))

    for path in written:
        logger.info(f"wrote {path}")


HANDLERS = {
    "wqi": cmd_wqi,
    "train": cmd_train,
    "predict": cmd_predict,
    "evaluate": cmd_evaluate,
    "diagnose": cmd_diagnose,
    "plot-data": cmd_plot_data,
}


def fail(message):
    print(Fore.RED + f"error: {message}", file=sys.stderr)


# Returns the process exit code
def run(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_DATA

    values = vars(args)
    command = values.pop("command")
    config_path = values.pop("config", None)
    verbose = values.pop("verbose", 0)
    if values.pop("quiet", False):
        values["verbosity"] = -1
    elif verbose:
        values["verbosity"] = verbose

    try:
        file_values = load_config_file(config_path) if config_path else {}
        config = resolve_config(command, values, file_values)
        configure_logging(config.verbosity)
        logger.info(config.describe())
        HANDLERS[command](config)
    except (InvariantViolation, AssertionError) as exc:
        fail(f"internal invariant violated: {exc}")
        return EXIT_INVARIANT
    except (DataError, OSError, UnicodeDecodeError) as exc:
        fail(exc)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(run())
