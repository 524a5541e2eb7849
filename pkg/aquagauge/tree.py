"""CART regression trees used as the base learner of the boosting loop."""
from dataclasses import dataclass, field

import numpy as np

from .errors import ArityMismatch, DataError, EmptyLeaf, EmptyTargets, LengthMismatch, NonFinite

# Split SSEs closer than this (relative to the node SSE) count as ties
SSE_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class FeatureMatrix:
    values: np.ndarray
    feature_names: tuple

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise DataError("feature matrix must be two-dimensional")
        if values.shape[1] != len(self.feature_names):
            raise ArityMismatch(len(self.feature_names), values.shape[1])
        if not np.all(np.isfinite(values)):
            raise NonFinite(values[~np.isfinite(values)][0])
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "feature_names", tuple(self.feature_names))

    @property
    def n_rows(self):
        return self.values.shape[0]

    @property
    def n_cols(self):
        return self.values.shape[1]

    def take(self, indices):
        return FeatureMatrix(self.values[np.asarray(indices, dtype=int)], self.feature_names)


@dataclass(frozen=True)
class Internal:
    feature: int
    threshold: float
    left: int
    right: int
    # Rows seen at fit time; not stored in model files
    count: int | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Leaf:
    value: float
    count: int


@dataclass(frozen=True)
class SplitCandidate:
    feature: int
    threshold: float
    sse: float
    gain: float
    left_count: int
    right_count: int


@dataclass(frozen=True)
class RegressionTree:
    # Pre-order: root at 0, then the left subtree, then the right subtree
    nodes: tuple

    def predict_row(self, row):
        node = self.nodes[0]
        while isinstance(node, Internal):
            node = self.nodes[node.left if row[node.feature] <= node.threshold else node.right]
        return node.value

    def predict_many(self, values):
        values = np.asarray(values, dtype=np.float64)
        out = np.empty(values.shape[0])
        stack = [(0, np.arange(values.shape[0]))]
        while stack:
            position, rows = stack.pop()
            node = self.nodes[position]
            if isinstance(node, Leaf):
                out[rows] = node.value
                continue
            goes_left = values[rows, node.feature] <= node.threshold
            stack.append((node.left, rows[goes_left]))
            stack.append((node.right, rows[~goes_left]))
        return out

    def depth(self, position=0):
        node = self.nodes[position]
        if isinstance(node, Leaf):
            return 0
        return 1 + max(self.depth(node.left), self.depth(node.right))

    def leaves(self):
        return [node for node in self.nodes if isinstance(node, Leaf)]

    def internals(self):
        return [node for node in self.nodes if isinstance(node, Internal)]

    def scaled(self, factor):
        return RegressionTree(tuple(
            Leaf(node.value * factor, node.count) if isinstance(node, Leaf) else node for node in self.nodes
        ))


def line_search_leaf(residuals_in_leaf):
    """Optimal step for one leaf under squared error: the mean residual."""
    residuals = np.asarray(residuals_in_leaf, dtype=np.float64)
    if residuals.size == 0:
        raise EmptyLeaf()
    return float(np.mean(residuals))


def best_split(values, targets, min_samples_leaf=1):
    """Find the (feature, threshold) pair with the lowest two-leaf SSE.

    Thresholds are midpoints between consecutive distinct values, rows with
    value <= threshold go left. Ties go to the lower feature index and then the
    lower threshold. Returns None when no split leaves min_samples_leaf rows on
    both sides or when no split reduces the SSE.
    """
    values = np.asarray(values, dtype=np.float64)
    targets = np.asarray(targets, dtype=np.float64)
    n = targets.shape[0]
    if values.shape[0] != n:
        raise LengthMismatch(values.shape[0], n)
    if n < 2 or 2 * min_samples_leaf > n:
        return None

    centered = targets - targets.mean()
    parent_sse = float(np.dot(centered, centered))
    tolerance = SSE_TOLERANCE * max(1.0, parent_sse)

    left_sizes = np.arange(1, n)
    right_sizes = n - left_sizes
    per_feature = []
    for feature in range(values.shape[1]):
        order = np.argsort(values[:, feature], kind="stable")
        xs = values[order, feature]
        ys = centered[order]

        sums = np.cumsum(ys)
        squares = np.cumsum(ys * ys)
        left_sse = squares[:-1] - sums[:-1] ** 2 / left_sizes
        right_sums = sums[-1] - sums[:-1]
        right_sse = (squares[-1] - squares[:-1]) - right_sums ** 2 / right_sizes
        sse = np.maximum(left_sse, 0.0) + np.maximum(right_sse, 0.0)

        valid = (xs[1:] != xs[:-1]) & (left_sizes >= min_samples_leaf) & (right_sizes >= min_samples_leaf)
        candidates = np.flatnonzero(valid)
        if candidates.size:
            per_feature.append((feature, xs, sse, candidates))

    if not per_feature:
        return None

    best_sse = min(float(sse[candidates].min()) for _, _, sse, candidates in per_feature)
    if parent_sse - best_sse <= tolerance:
        return None

    for feature, xs, sse, candidates in per_feature:
        close = candidates[sse[candidates] <= best_sse + tolerance]
        if close.size == 0:
            continue
        position = int(close[0])
        low, high = xs[position], xs[position + 1]
        threshold = (low + high) / 2.0
        if threshold >= high:
            threshold = low
        chosen = float(sse[position])
        return SplitCandidate(
            feature=feature,
            threshold=float(threshold),
            sse=chosen,
            gain=parent_sse - chosen,
            left_count=position + 1,
            right_count=n - position - 1,
        )
    return None


def fit_tree(x, residuals, hp):
    values = x.values if isinstance(x, FeatureMatrix) else np.asarray(x, dtype=np.float64)
    residuals = np.asarray(residuals, dtype=np.float64)
    if residuals.shape[0] == 0:
        raise EmptyTargets()
    if values.shape[0] != residuals.shape[0]:
        raise LengthMismatch(values.shape[0], residuals.shape[0])

    nodes = []

    def grow(rows, depth):
        position = len(nodes)
        nodes.append(None)

        split = None
        if rows.size >= hp.min_samples_split and depth < hp.max_depth:
            split = best_split(values[rows], residuals[rows], hp.min_samples_leaf)
        if split is None:
            nodes[position] = Leaf(line_search_leaf(residuals[rows]), int(rows.size))
            return position

        goes_left = values[rows, split.feature] <= split.threshold
        left = grow(rows[goes_left], depth + 1)
        right = grow(rows[~goes_left], depth + 1)
        nodes[position] = Internal(split.feature, split.threshold, left, right, int(rows.size))
        return position

    grow(np.arange(residuals.shape[0]), 0)
    return RegressionTree(tuple(nodes))
