"""Regression metrics and the evaluation report."""
import math
from dataclasses import dataclass

import numpy as np
import pandas as pd

from .errors import DegenerateActuals, EmptyEvaluation, FeatureMismatch, LengthMismatch, ZeroActual


@dataclass(frozen=True)
class EvalReport:
    mse: float
    r_squared: float | None
    mean_percentile_error: float
    # (actual, predicted, percentile_error or None when actual is 0)
    per_example: tuple
    keys: tuple = ()


def _pair(actual, predicted):
    actual = np.asarray(actual, dtype=np.float64)
    predicted = np.asarray(predicted, dtype=np.float64)
    if actual.shape != predicted.shape:
        raise LengthMismatch(actual.size, predicted.size)
    if actual.size == 0:
        raise EmptyEvaluation()
    return actual, predicted


def mse(actual, predicted):
    actual, predicted = _pair(actual, predicted)
    residuals = actual - predicted
    return float(np.mean(residuals * residuals))


def r_squared(actual, predicted):
    actual, predicted = _pair(actual, predicted)
    centered = actual - actual.mean()
    ss_tot = float(np.dot(centered, centered))
    if actual.size < 2 or ss_tot == 0.0:
        raise DegenerateActuals()
    residuals = actual - predicted
    return 1.0 - float(np.dot(residuals, residuals)) / ss_tot


def percentile_error(actual, predicted):
    if actual == 0:
        raise ZeroActual()
    return abs(predicted - actual) / abs(actual) * 100.0


def evaluate(model, task):
    if tuple(model.feature_names) != tuple(task.features.feature_names):
        raise FeatureMismatch(task.features.feature_names, model.feature_names)
    if len(task) == 0:
        raise EmptyEvaluation()

    predicted = model.predict_many(task.features)
    actual = task.targets

    per_example = []
    for a, p in zip(actual.tolist(), predicted.tolist()):
        error = percentile_error(a, p) if a != 0 else None
        per_example.append((a, p, error))

    try:
        r2 = r_squared(actual, predicted)
    except DegenerateActuals:
        r2 = None

    defined = [error for _, _, error in per_example if error is not None]
    return EvalReport(
        mse=mse(actual, predicted),
        r_squared=r2,
        mean_percentile_error=float(np.mean(defined)) if defined else math.nan,
        per_example=tuple(per_example),
        keys=task.keys,
    )


def summary_line(report):
    r2 = report.r_squared if report.r_squared is not None else math.nan
    return f"mse={report.mse:.6f} r2={r2:.6f} mean_pct_err={report.mean_percentile_error:.6f}"


def report_frame(report):
    rows = []
    for (station, month, year), (actual, predicted, error) in zip(report.keys, report.per_example):
        rows.append({
            "station_code": station,
            "month": month,
            "year": year,
            "actual": actual,
            "predicted": predicted,
            "percentile_error": error,
        })
    columns = ["station_code", "month", "year", "actual", "predicted", "percentile_error"]
    return pd.DataFrame(rows, columns=columns)


# Data behind the training cost plot
def curve_frame(model):
    return pd.DataFrame({
        "iteration": range(len(model.training_curve)),
        "loss": list(model.training_curve),
    })
