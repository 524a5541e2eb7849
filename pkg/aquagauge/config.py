"""Run configuration: built-in defaults, then an optional JSON file, then command-line flags."""
import json
from dataclasses import dataclass, fields, replace
from pathlib import Path

from .constants import (
    DEFAULT_LEARNING_RATE,
    DEFAULT_MAX_DEPTH,
    DEFAULT_MIN_SAMPLES_LEAF,
    DEFAULT_MIN_SAMPLES_SPLIT,
    DEFAULT_N_TREES,
    DEFAULT_SEED,
    DEFAULT_TEST_FRACTION,
    DROP_ROW,
    LEGACY_NCO,
    MEDIAN,
    MODES,
    NORMATIVE,
)
from .errors import DataError
from .gbm import Hyperparams

COMMANDS = ("wqi", "train", "predict", "evaluate", "diagnose", "plot-data")
SPLITS = ("train", "test", "all")

# Spellings accepted on the command line and in config files
MODE_ALIASES = {"normative": NORMATIVE, "legacy-nco": LEGACY_NCO, "legacy_nco": LEGACY_NCO}
IMPUTE_ALIASES = {"drop": DROP_ROW, "drop_row": DROP_ROW, "drop-row": DROP_ROW, "median": MEDIAN}


# Expected types for fields a JSON config file can set; None is allowed for optional ones
FIELD_TYPES = {
    "input": (str, True),
    "mode": (str, False),
    "impute": (str, False),
    "strict": (bool, False),
    "seed": (int, True),
    "rules": (str, True),
    "model": (str, False),
    "out": (str, True),
    "curve": (str, True),
    "evaluation": (str, True),
    "split": (str, False),
    "test_fraction": (float, True),
    "n_trees": (int, False),
    "learning_rate": (float, False),
    "max_depth": (int, False),
    "min_samples_split": (int, False),
    "min_samples_leaf": (int, False),
    "verbosity": (int, False),
}


def _has_type(value, kind):
    if kind is bool:
        return isinstance(value, bool)
    if isinstance(value, bool):
        return False
    if kind is float:
        return isinstance(value, (int, float))
    return isinstance(value, kind)


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: str | None = None
    mode: str = NORMATIVE
    impute: str = DROP_ROW
    strict: bool = False
    # None means "not given": train falls back to the defaults, evaluate to the model's own split
    seed: int | None = None
    rules: str | None = None
    model: str = "model.gbm"
    out: str | None = None
    curve: str | None = None
    evaluation: str | None = None
    split: str = "test"
    test_fraction: float | None = None
    n_trees: int = DEFAULT_N_TREES
    learning_rate: float = DEFAULT_LEARNING_RATE
    max_depth: int = DEFAULT_MAX_DEPTH
    min_samples_split: int = DEFAULT_MIN_SAMPLES_SPLIT
    min_samples_leaf: int = DEFAULT_MIN_SAMPLES_LEAF
    verbosity: int = 0

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise DataError(f"unknown command {self.command!r}")
        for name, (kind, optional) in FIELD_TYPES.items():
            value = getattr(self, name)
            if value is None and optional:
                continue
            if not _has_type(value, kind):
                raise DataError(f"{name} must be {'a number' if kind is float else kind.__name__}, got {value!r}")

        mode = MODE_ALIASES.get(self.mode)
        if mode not in MODES:
            raise DataError(f"unknown mode {self.mode!r}")
        object.__setattr__(self, "mode", mode)

        impute = IMPUTE_ALIASES.get(self.impute)
        if impute is None:
            raise DataError(f"unknown impute policy {self.impute!r}")
        object.__setattr__(self, "impute", impute)

        if self.split not in SPLITS:
            raise DataError(f"unknown split {self.split!r}")
        if self.test_fraction is not None and not 0.0 <= self.test_fraction < 1.0:
            raise DataError(f"test fraction must be in [0, 1), got {self.test_fraction}")

    def split_seed(self):
        return DEFAULT_SEED if self.seed is None else self.seed

    def split_fraction(self):
        return DEFAULT_TEST_FRACTION if self.test_fraction is None else self.test_fraction

    def hyperparams(self):
        return Hyperparams(
            n_trees=self.n_trees,
            learning_rate=self.learning_rate,
            max_depth=self.max_depth,
            min_samples_split=self.min_samples_split,
            min_samples_leaf=self.min_samples_leaf,
            seed=self.split_seed(),
        )

    def curve_path(self):
        return self.curve or f"{self.model}.curve.csv"

    # One line with every resolved field, echoed to the run log
    def describe(self):
        values = {f.name: getattr(self, f.name) for f in fields(self)}
        return "config: " + " ".join(f"{key}={values[key]}" for key in sorted(values))


FIELD_NAMES = tuple(f.name for f in fields(RunConfig))


def load_config_file(path):
    try:
        values = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DataError(f"config file {path}: {exc}") from None
    if not isinstance(values, dict):
        raise DataError(f"config file {path}: expected a JSON object")

    # The command comes from the command line only
    allowed = set(FIELD_NAMES) - {"command"}
    unknown = sorted(set(values) - allowed)
    if unknown:
        raise DataError(f"config file {path}: unknown keys {', '.join(unknown)}")
    return values


def resolve_config(command, cli_values=None, file_values=None):
    """Merge defaults < config file < explicit flags into a RunConfig."""
    merged = dict(file_values or {})
    merged.update({key: value for key, value in (cli_values or {}).items() if value is not None})
    try:
        return replace(RunConfig(command=command), **merged)
    except TypeError as exc:
        raise DataError(str(exc)) from None
