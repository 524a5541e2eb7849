"""Turning station time series into a four-months-ahead WQI regression task."""
import itertools
import math
from dataclasses import dataclass

import numpy as np
import pandas as pd

from .constants import FEATURE_NAMES, N_LAGS, NORMATIVE, WINDOW_MONTHS, WINDOW_TOLERANCE
from .errors import DataError
from .logs import get_logger
from .tree import FeatureMatrix
from .wqi import compute_wqi

logger = get_logger("forecast")

CHEMICAL_FEATURES = FEATURE_NAMES[:6]


@dataclass(frozen=True, eq=False)
class SupervisedTask:
    features: FeatureMatrix
    targets: np.ndarray
    keys: tuple

    def __post_init__(self):
        targets = np.array(self.targets, dtype=np.float64).reshape(-1)
        if not self.features.n_rows == targets.size == len(self.keys):
            raise DataError("features, targets and keys must have the same length")
        targets.setflags(write=False)
        object.__setattr__(self, "targets", targets)
        object.__setattr__(self, "keys", tuple(tuple(key) for key in self.keys))

    def __len__(self):
        return len(self.keys)

    def subset(self, indices):
        indices = list(indices)
        return SupervisedTask(
            features=self.features.take(indices),
            targets=self.targets[indices],
            keys=[self.keys[i] for i in indices],
        )


# Index of the observation one window step away (direction +1 or -1), or None.
# Closest to exactly four months wins, ties go to the earlier observation.
def window_step(observations, position, direction):
    origin = observations[position].month_index
    best = None
    for j, other in enumerate(observations):
        offset = direction * (other.month_index - origin)
        deviation = abs(offset - WINDOW_MONTHS)
        if offset <= 0 or deviation > WINDOW_TOLERANCE:
            continue
        rank = (deviation, other.month_index, j)
        if best is None or rank < best:
            best = rank
    return None if best is None else best[2]


def _station_groups(samples):
    return [list(group) for _, group in itertools.groupby(samples, key=lambda s: s.station_code)]


def feature_table(ds, mode=NORMATIVE):
    """One row per observation: features, key columns and the target WQI (NaN when unknown)."""
    rows = []
    for group in _station_groups(ds.samples):
        wqis = [compute_wqi(s, mode).wqi for s in group]
        for i, sample in enumerate(group):
            row = {name: getattr(sample, name) for name in CHEMICAL_FEATURES}
            row["temp"] = sample.temp if sample.temp is not None else 0.0
            row["temp_present"] = 0.0 if sample.temp is None else 1.0
            row["wqi"] = wqis[i]

            lag = i
            for k in range(1, N_LAGS + 1):
                lag = window_step(group, lag, -1) if lag is not None else None
                row[f"lag{k}_wqi"] = wqis[lag] if lag is not None else 0.0
                row[f"lag{k}_present"] = 1.0 if lag is not None else 0.0

            row["month"] = sample.month
            row["year"] = sample.year
            row["station_code"] = sample.station_code
            target = window_step(group, i, +1)
            row["target"] = wqis[target] if target is not None else math.nan
            rows.append(row)

    columns = list(FEATURE_NAMES) + ["station_code", "target"]
    return pd.DataFrame(rows, columns=columns)


def _task_from_frame(frame):
    features = FeatureMatrix(frame[list(FEATURE_NAMES)].to_numpy(dtype=np.float64).reshape(-1, len(FEATURE_NAMES)), FEATURE_NAMES)
    keys = list(zip(frame["station_code"], frame["month"].astype(int), frame["year"].astype(int)))
    return features, keys


def build_features(ds, mode=NORMATIVE):
    """Features for every observation, with its key and current WQI."""
    frame = feature_table(ds, mode)
    features, keys = _task_from_frame(frame)
    return features, keys, frame["wqi"].to_numpy(dtype=np.float64)


def build_supervised(ds, mode=NORMATIVE):
    frame = feature_table(ds, mode)
    paired = frame[frame["target"].notna()].reset_index(drop=True)
    features, keys = _task_from_frame(paired)
    logger.info(f"built {len(paired)} examples from {len(frame)} observations")
    return SupervisedTask(features=features, targets=paired["target"].to_numpy(dtype=np.float64), keys=keys)


def split_by_station(task, test_fraction, seed):
    """Seeded group split: every station lands wholly in train or in test."""
    if not 0.0 <= test_fraction < 1.0:
        raise DataError(f"test fraction must be in [0, 1), got {test_fraction}")

    stations = sorted({key[0] for key in task.keys})
    n_test = 0
    if test_fraction > 0 and len(stations) >= 2:
        n_test = min(len(stations) - 1, max(1, round(test_fraction * len(stations))))

    order = np.random.default_rng(seed).permutation(len(stations))
    test_stations = {stations[i] for i in order[:n_test]}

    train_rows = [i for i, key in enumerate(task.keys) if key[0] not in test_stations]
    test_rows = [i for i, key in enumerate(task.keys) if key[0] in test_stations]
    return task.subset(train_rows), task.subset(test_rows)
