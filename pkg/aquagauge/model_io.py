"""Text format for trained models.

    AQUAGAUGE-GBM
    version 1
    key=value header lines (test_fraction may be empty)
    tree <t> nodes <k>
    I <feature_index> <threshold> <left> <right>
    L <value> <train_count>

Floats are written with 17 significant digits so they read back exactly.
"""
import math
from pathlib import Path

from .constants import LOSSES, MODEL_MAGIC, MODEL_VERSION
from .errors import (
    BadMagic,
    CorruptHeader,
    CorruptNode,
    DataError,
    InvalidHyperparams,
    UnsupportedVersion,
)
from .gbm import GbmModel, Hyperparams
from .tree import Internal, Leaf, RegressionTree

HEADER_KEYS = (
    "loss",
    "n_trees",
    "learning_rate",
    "max_depth",
    "min_samples_split",
    "min_samples_leaf",
    "seed",
    "test_fraction",
    "f0",
    "feature_names",
    "trees",
    "training_curve",
)
INT_KEYS = ("n_trees", "max_depth", "min_samples_split", "min_samples_leaf", "seed", "trees")


def _num(value):
    return f"{value:.17g}"


def serialize_model(model):
    for name in model.feature_names:
        if not name or any(ch in name for ch in ",\n\r="):
            raise DataError(f"feature name {name!r} cannot be written to a model file")

    hp = model.hyperparams
    lines = [
        MODEL_MAGIC,
        f"version {MODEL_VERSION}",
        f"loss={model.loss}",
        f"n_trees={hp.n_trees}",
        f"learning_rate={_num(hp.learning_rate)}",
        f"max_depth={hp.max_depth}",
        f"min_samples_split={hp.min_samples_split}",
        f"min_samples_leaf={hp.min_samples_leaf}",
        f"seed={hp.seed}",
        f"test_fraction={'' if model.test_fraction is None else _num(model.test_fraction)}",
        f"f0={_num(model.f0)}",
        f"feature_names={','.join(model.feature_names)}",
        f"trees={len(model.trees)}",
        f"training_curve={','.join(_num(v) for v in model.training_curve)}",
    ]
    for t, tree in enumerate(model.trees):
        lines.append(f"tree {t} nodes {len(tree.nodes)}")
        for node in tree.nodes:
            if isinstance(node, Internal):
                lines.append(f"I {node.feature} {_num(node.threshold)} {node.left} {node.right}")
            else:
                lines.append(f"L {_num(node.value)} {node.count}")
    return "\n".join(lines) + "\n"


def _finite(text):
    value = float(text)
    if not math.isfinite(value):
        raise ValueError(text)
    return value


def _read_header(lines):
    header = {}
    position = 2
    while position < len(lines) and not lines[position].startswith("tree "):
        key, sep, value = lines[position].partition("=")
        if not sep or key not in HEADER_KEYS or key in header:
            raise CorruptHeader(key)
        header[key] = value
        position += 1

    parsed = {}
    for key in HEADER_KEYS:
        if key not in header:
            raise CorruptHeader(key)
        raw = header[key]
        try:
            if key in INT_KEYS:
                parsed[key] = int(raw)
            elif key == "feature_names":
                parsed[key] = tuple(raw.split(",")) if raw else ()
            elif key == "training_curve":
                parsed[key] = tuple(_finite(v) for v in raw.split(",")) if raw else ()
            elif key == "test_fraction":
                parsed[key] = _finite(raw) if raw else None
                if parsed[key] is not None and not 0.0 <= parsed[key] < 1.0:
                    raise ValueError(raw)
            elif key == "loss":
                if raw not in LOSSES:
                    raise ValueError(raw)
                parsed[key] = raw
            else:
                parsed[key] = _finite(raw)
        except ValueError:
            raise CorruptHeader(key) from None
    return parsed, position


def _read_node(line, position, block_size, n_features, tree_index):
    parts = line.split(" ")
    try:
        if parts[0] == "L" and len(parts) == 3:
            count = int(parts[2])
            if count < 0:
                raise ValueError(line)
            return Leaf(_finite(parts[1]), count)
        if parts[0] == "I" and len(parts) == 5:
            feature, left, right = int(parts[1]), int(parts[3]), int(parts[4])
            threshold = _finite(parts[2])
            children_ok = position < left < block_size and position < right < block_size and left != right
            if not 0 <= feature < n_features or not children_ok:
                raise ValueError(line)
            return Internal(feature, threshold, left, right)
    except ValueError:
        pass
    raise CorruptNode(position, tree=tree_index)


def _read_tree(lines, position, tree_index, n_features):
    if position >= len(lines):
        raise CorruptNode(0, tree=tree_index)
    parts = lines[position].split(" ")
    if len(parts) != 4 or parts[:3] != ["tree", str(tree_index), "nodes"]:
        raise CorruptNode(0, tree=tree_index)
    try:
        block_size = int(parts[3])
    except ValueError:
        raise CorruptNode(0, tree=tree_index) from None
    if block_size < 1:
        raise CorruptNode(0, tree=tree_index)

    nodes = []
    for i in range(block_size):
        line_index = position + 1 + i
        if line_index >= len(lines):
            raise CorruptNode(i, tree=tree_index)
        nodes.append(_read_node(lines[line_index], i, block_size, n_features, tree_index))

    # Every node except the root needs exactly one parent
    parents = [0] * block_size
    for node in nodes:
        if isinstance(node, Internal):
            parents[node.left] += 1
            parents[node.right] += 1
    for i in range(1, block_size):
        if parents[i] != 1:
            raise CorruptNode(i, tree=tree_index)
    return RegressionTree(tuple(nodes)), position + 1 + block_size


def deserialize_model(text):
    # Anything after the last newline is an incomplete line from a cut-off file
    lines = text.split("\n")[:-1]
    if not lines or lines[0] != MODEL_MAGIC:
        raise BadMagic(lines[0] if lines else "")
    if len(lines) < 2 or not lines[1].startswith("version "):
        raise CorruptHeader("version")
    version = lines[1][len("version "):]
    if version != str(MODEL_VERSION):
        raise UnsupportedVersion(version)

    header, position = _read_header(lines)
    n_features = len(header["feature_names"])
    if header["trees"] < 0 or header["trees"] > header["n_trees"]:
        raise CorruptHeader("trees")
    try:
        hp = Hyperparams(
            n_trees=header["n_trees"],
            learning_rate=header["learning_rate"],
            max_depth=header["max_depth"],
            min_samples_split=header["min_samples_split"],
            min_samples_leaf=header["min_samples_leaf"],
            seed=header["seed"],
        )
    except InvalidHyperparams as exc:
        raise CorruptHeader(exc.name) from None

    trees = []
    for t in range(header["trees"]):
        tree, position = _read_tree(lines, position, t, n_features)
        trees.append(tree)
    if position != len(lines):
        raise CorruptHeader("trees")

    return GbmModel(
        f0=header["f0"],
        trees=tuple(trees),
        hyperparams=hp,
        feature_names=header["feature_names"],
        training_curve=header["training_curve"],
        test_fraction=header["test_fraction"],
        loss=header["loss"],
    )


def load_model(path):
    return deserialize_model(Path(path).read_text(encoding="utf-8"))
