"""Water Quality Index: banded sub-indices, weighted scores and their sum."""
import itertools
import math
from dataclasses import dataclass

from .constants import (
    BANDS,
    KIND_FIELDS,
    LEGACY_CO_LIMIT,
    LEGACY_CO_SCORE,
    LEGACY_NCO,
    MODES,
    NORMATIVE,
    SUB_INDEX_VALUES,
    WEIGHTS_PER_MILLE,
)
from .errors import DataError, InvalidValue, MissingInput, NonFinite

KINDS = tuple(WEIGHTS_PER_MILLE)


@dataclass(frozen=True)
class SubIndices:
    nph: int
    ndo: int
    nbdo: int
    nec: int
    nna: int
    nco: int

    def __post_init__(self):
        for value in self.as_tuple():
            if value not in SUB_INDEX_VALUES:
                raise InvalidValue("sub-index", value)

    def as_tuple(self):
        return (self.nph, self.ndo, self.nbdo, self.nec, self.nna, self.nco)


@dataclass(frozen=True)
class WeightedScores:
    wph: float
    wdo: float
    wbdo: float
    wec: float
    wna: float
    wco: float

    def as_tuple(self):
        return (self.wph, self.wdo, self.wbdo, self.wec, self.wna, self.wco)


@dataclass(frozen=True)
class WqiRecord:
    sample: object
    sub: SubIndices
    weighted: WeightedScores
    wqi: float
    mode: str = NORMATIVE

    # Sub-indices, then weighted scores, then wqi
    def as_row(self):
        row = dict(zip(("nph", "ndo", "nbdo", "nec", "nna", "nco"), self.sub.as_tuple()))
        row.update(zip(("wph", "wdo", "wbdo", "wec", "wna", "wco"), self.weighted.as_tuple()))
        row["wqi"] = self.wqi
        return row


def _check_mode(mode):
    if mode not in MODES:
        raise DataError(f"unknown WQI mode {mode!r}")


def _gap_score(bands, value):
    # Nearest band ending below the value and nearest band starting above it
    below = [(high, score) for (low, high), score in bands if high < value]
    above = [(low, score) for (low, high), score in bands if low > value]
    if not below or not above:
        return None
    below_score = max(below)[1]
    above_score = min(above)[1]
    return max(below_score, above_score)


def sub_index(kind, value, mode=NORMATIVE):
    if kind not in BANDS:
        raise DataError(f"unknown sub-index kind {kind!r}")
    _check_mode(mode)
    value = float(value)
    if not math.isfinite(value):
        raise NonFinite(value)
    if kind == "ph" and not 0.0 <= value <= 14.0:
        raise InvalidValue("ph", value)

    bands = BANDS[kind]
    for (low, high), score in bands:
        if low <= value <= high:
            return score

    if kind == "co" and mode == LEGACY_NCO and value > LEGACY_CO_LIMIT:
        return LEGACY_CO_SCORE

    gap = _gap_score(bands, value)
    return gap if gap is not None else 0


def weighted_scores(sub):
    return WeightedScores(*(
        n * WEIGHTS_PER_MILLE[kind] / 1000 for kind, n in zip(KINDS, sub.as_tuple())
    ))


# Summing integer products first keeps the maximum at exactly 99.8
def wqi_from_sub(sub):
    return sum(n * WEIGHTS_PER_MILLE[kind] for kind, n in zip(KINDS, sub.as_tuple())) / 1000


def compute_wqi(sample, mode=NORMATIVE):
    _check_mode(mode)
    values = {}
    for kind, name in KIND_FIELDS.items():
        value = getattr(sample, name)
        if value is None:
            raise MissingInput(name)
        values[kind] = value

    sub = SubIndices(*(sub_index(kind, values[kind], mode) for kind in KINDS))
    return WqiRecord(sample=sample, sub=sub, weighted=weighted_scores(sub), wqi=wqi_from_sub(sub), mode=mode)


# Every value compute_wqi can return
def reachable_wqi_values():
    return frozenset(
        wqi_from_sub(SubIndices(*combo)) for combo in itertools.product(SUB_INDEX_VALUES, repeat=len(KINDS))
    )
