"""Gradient boosted regression trees with squared-error loss.

The loop starts from the mean target, then repeatedly fits a CART tree to the
residuals (the negative gradient of the squared loss), sets every leaf to its
mean residual (the exact line search for this loss) shrunk by the learning
rate, and adds the tree to the ensemble.
"""
import math
from dataclasses import dataclass

import numpy as np

from .constants import (
    DEFAULT_LEARNING_RATE,
    DEFAULT_MAX_DEPTH,
    DEFAULT_MIN_SAMPLES_LEAF,
    DEFAULT_MIN_SAMPLES_SPLIT,
    DEFAULT_N_TREES,
    DEFAULT_SEED,
    SQUARED_ERROR,
)
from .errors import ArityMismatch, EmptyTargets, InvalidHyperparams, InvariantViolation, LengthMismatch, NonFinite
from .logs import get_logger
from .tree import FeatureMatrix, fit_tree

logger = get_logger("gbm")

# Each shrunk leaf-mean step can only lower the squared loss
CURVE_TOLERANCE = 1e-9


def _is_int(value):
    return isinstance(value, (int, np.integer)) and not isinstance(value, bool)


@dataclass(frozen=True)
class Hyperparams:
    n_trees: int = DEFAULT_N_TREES
    learning_rate: float = DEFAULT_LEARNING_RATE
    max_depth: int = DEFAULT_MAX_DEPTH
    min_samples_split: int = DEFAULT_MIN_SAMPLES_SPLIT
    min_samples_leaf: int = DEFAULT_MIN_SAMPLES_LEAF
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        minimums = {"n_trees": 0, "max_depth": 0, "min_samples_split": 2, "min_samples_leaf": 1}
        for name, minimum in minimums.items():
            value = getattr(self, name)
            if not _is_int(value) or value < minimum:
                raise InvalidHyperparams(name, value)
        if not _is_int(self.seed):
            raise InvalidHyperparams("seed", self.seed)
        rate = self.learning_rate
        if isinstance(rate, bool) or not isinstance(rate, (int, float)) or not 0.0 < rate <= 1.0:
            raise InvalidHyperparams("learning_rate", rate)
        object.__setattr__(self, "learning_rate", float(rate))


@dataclass(frozen=True, eq=False)
class GbmModel:
    f0: float
    trees: tuple
    hyperparams: Hyperparams
    feature_names: tuple
    training_curve: tuple = ()
    # Share of stations held out when the CLI trained this model, None if unknown
    test_fraction: float | None = None
    loss: str = SQUARED_ERROR

    @property
    def n_features(self):
        return len(self.feature_names)

    def predict_row(self, row):
        return gbm_predict(self, row)

    def predict_many(self, x):
        values = x.values if isinstance(x, FeatureMatrix) else np.asarray(x, dtype=np.float64)
        if values.ndim != 2 or values.shape[1] != self.n_features:
            raise ArityMismatch(self.n_features, values.shape[-1])
        predictions = np.full(values.shape[0], self.f0)
        for tree in self.trees:
            predictions += tree.predict_many(values)
        return predictions


def squared_loss(targets, predictions):
    residuals = np.asarray(targets, dtype=np.float64) - np.asarray(predictions, dtype=np.float64)
    return 0.5 * residuals ** 2


def init_constant(targets):
    targets = np.asarray(targets, dtype=np.float64)
    if targets.size == 0:
        raise EmptyTargets()
    return float(np.mean(targets))


# For squared loss the negative gradient is just the residual
def negative_gradient(targets, predictions):
    targets = np.asarray(targets, dtype=np.float64)
    predictions = np.asarray(predictions, dtype=np.float64)
    if targets.shape != predictions.shape:
        raise LengthMismatch(targets.shape[0], predictions.shape[0])
    return targets - predictions


def _training_loss(targets, predictions):
    residuals = targets - predictions
    return float(np.mean(residuals * residuals))


def gbm_fit(x, y, hp=None):
    hp = hp or Hyperparams()
    targets = np.asarray(y, dtype=np.float64)
    if targets.size == 0:
        raise EmptyTargets()
    if x.n_rows != targets.size:
        raise LengthMismatch(x.n_rows, targets.size)
    if not np.all(np.isfinite(targets)):
        raise NonFinite(targets[~np.isfinite(targets)][0])

    f0 = init_constant(targets)
    predictions = np.full(targets.size, f0)
    curve = [_training_loss(targets, predictions)]
    trees = []

    for t in range(1, hp.n_trees + 1):
        residuals = negative_gradient(targets, predictions)
        tree = fit_tree(x, residuals, hp).scaled(hp.learning_rate)
        predictions = predictions + tree.predict_many(x.values)
        trees.append(tree)
        curve.append(_training_loss(targets, predictions))
        if curve[-1] > curve[-2] + CURVE_TOLERANCE * max(1.0, curve[-2]):
            raise InvariantViolation(f"training loss rose at iteration {t}: {curve[-2]!r} -> {curve[-1]!r}")
        logger.debug(f"iteration {t}: loss {curve[-1]:.6f}, {len(tree.leaves())} leaves")

    logger.info(f"trained {len(trees)} trees on {targets.size} rows, final loss {curve[-1]:.6f}")
    return GbmModel(
        f0=f0,
        trees=tuple(trees),
        hyperparams=hp,
        feature_names=x.feature_names,
        training_curve=tuple(curve),
        loss=SQUARED_ERROR,
    )


def gbm_predict(model, row):
    row = np.asarray(row, dtype=np.float64)
    if row.ndim != 1 or row.shape[0] != model.n_features:
        raise ArityMismatch(model.n_features, row.shape[-1] if row.ndim else 0)
    for value in row:
        if not math.isfinite(value):
            raise NonFinite(value)

    total = model.f0
    for tree in model.trees:
        total += tree.predict_row(row)
    return float(total)
