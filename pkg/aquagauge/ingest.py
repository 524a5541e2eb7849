"""Reading monitoring-station CSV files into validated water samples."""
import csv
import io
import math
import re
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import pandas as pd

from .constants import (
    CANONICAL_COLUMNS,
    COLUMN_ALIASES,
    DROP_ROW,
    LENIENT,
    MAX_YEAR,
    MEDIAN,
    MIN_YEAR,
    MISSING_TOKENS,
    NUMERIC_COLUMNS,
    REQUIRED_COLUMNS,
    STRICT,
    WQI_INPUTS,
)
from .errors import AllMissingColumn, BadDateToken, DataError, EmptyInput, MalformedRow, MissingColumn
from .logs import get_logger

logger = get_logger("ingest")

NUMBER_RE = re.compile(r"^[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?$")
MONTH_YEAR_RE = re.compile(r"^(\d{1,2})-(\d{4})$")

# Concentrations must not be negative, temperature may be
NON_NEGATIVE = tuple(name for name in NUMERIC_COLUMNS if name not in ("temp", "ph"))


@dataclass(frozen=True)
class WaterSample:
    station_code: str
    location: str
    state: str
    month: int
    year: int
    temp: float | None = None
    dissolved_oxygen: float | None = None
    ph: float | None = None
    conductivity: float | None = None
    bod: float | None = None
    nitrate: float | None = None
    fecal_coliform: float | None = None
    total_coliform: float | None = None
    serial: str = ""
    source_row: int = field(default=0, compare=False)

    @property
    def month_year(self):
        return f"{self.month}-{self.year}"

    # Months since year 0, used for window arithmetic
    @property
    def month_index(self):
        return self.year * 12 + (self.month - 1)

    def missing_inputs(self):
        return tuple(name for name in WQI_INPUTS if getattr(self, name) is None)


@dataclass(frozen=True)
class RawDataset:
    header: tuple
    rows: tuple


@dataclass(frozen=True)
class Dataset:
    samples: tuple
    source: str = "<string>"
    drops: tuple = ()
    notes: tuple = ()
    input_rows: int = 0

    def __len__(self):
        return len(self.samples)

    def drop_log(self):
        return "\n".join(self.drops)

    def to_frame(self):
        columns = [f.name for f in fields(WaterSample)]
        frame = pd.DataFrame([[getattr(s, c) for c in columns] for s in self.samples], columns=columns)
        for name in NUMERIC_COLUMNS:
            frame[name] = pd.to_numeric(frame[name], errors="coerce").astype("float64")
        return frame


def normalize_column(name):
    text = re.sub(r"\(.*?\)", "", name.lower())
    return re.sub(r"[^a-z0-9]", "", text)


def coerce_numeric(cell):
    """Parse a numeric cell, returning None for anything that is not a finite number.

    Accepts surrounding whitespace and trailing-dot numerals ("35." -> 35.0).
    """
    if cell is None:
        return None
    text = str(cell).strip()
    if text.lower() in MISSING_TOKENS or not NUMBER_RE.match(text):
        return None
    value = float(text)
    return value if math.isfinite(value) else None


def is_missing_token(cell):
    return str(cell).strip().lower() in MISSING_TOKENS


def parse_month_year(token):
    match = MONTH_YEAR_RE.match(str(token).strip())
    if match is None:
        raise BadDateToken(token)
    month, year = int(match.group(1)), int(match.group(2))
    if not 1 <= month <= 12 or not MIN_YEAR <= year <= MAX_YEAR:
        raise BadDateToken(token)
    return month, year


def read_raw(csv_text):
    text = csv_text.lstrip("\ufeff")
    rows = [row for row in csv.reader(io.StringIO(text)) if any(cell.strip() for cell in row)]
    if not rows:
        raise EmptyInput()
    return RawDataset(header=tuple(rows[0]), rows=tuple(tuple(row) for row in rows[1:]))


# Map canonical column name -> position in the header
def resolve_columns(header):
    columns = {}
    for position, name in enumerate(header):
        canonical = COLUMN_ALIASES.get(normalize_column(name))
        if canonical is not None and canonical not in columns:
            columns[canonical] = position
    for name in REQUIRED_COLUMNS:
        if name not in columns:
            raise MissingColumn(name)
    return columns


# Rows with unquoted commas in the location get the surplus folded back into it
def align_row(cells, width, location_position):
    cells = list(cells)
    # Trailing separators add empty cells, not location text
    while len(cells) > width and not cells[-1].strip():
        cells.pop()
    if len(cells) <= width:
        return cells
    after = width - location_position - 1
    head = list(cells[:location_position])
    tail = list(cells[len(cells) - after:]) if after else []
    location = ", ".join(cell.strip() for cell in cells[location_position:len(cells) - after])
    return head + [location] + tail


def _parse_numbers(cells, columns, index, strictness, notes):
    values = {}
    for name in NUMERIC_COLUMNS:
        cell = cells[columns[name]]
        value = coerce_numeric(cell)
        if value is None and cell.strip():
            if strictness == STRICT and not is_missing_token(cell):
                raise MalformedRow(index, f"{name} {cell!r} is not a number")
            notes.append(f"row {index}: {name} {cell!r} coerced to missing")

        invalid = value is not None and (
            (name == "ph" and not 0.0 <= value <= 14.0) or (name in NON_NEGATIVE and value < 0)
        )
        if invalid:
            if strictness == STRICT:
                raise MalformedRow(index, f"{name} {value!r} out of range")
            notes.append(f"row {index}: {name} {value!r} out of range, set to missing")
            value = None
        values[name] = value
    return values


# Returns a WaterSample, or a drop reason string in lenient mode
def _parse_row(cells, columns, index, strictness, notes):
    station_code = cells[columns["station_code"]].strip()
    if not station_code:
        if strictness == STRICT:
            raise MalformedRow(index, "missing station code")
        return "missing station code"

    token = cells[columns["month_year"]]
    try:
        month, year = parse_month_year(token)
    except BadDateToken:
        if strictness == STRICT:
            raise MalformedRow(index, f"bad month-year {token!r}")
        return f"bad month-year {token!r}"

    values = _parse_numbers(cells, columns, index, strictness, notes)
    if all(values[name] is None for name in WQI_INPUTS):
        return "all WQI inputs missing"

    serial = cells[columns["serial"]].strip() if "serial" in columns else ""
    return WaterSample(
        station_code=station_code,
        location=cells[columns["location"]].strip(),
        state=cells[columns["state"]].strip(),
        month=month,
        year=year,
        serial=serial,
        source_row=index,
        **values,
    )


def parse_dataset(csv_text, strictness=LENIENT, source="<string>"):
    if strictness not in (STRICT, LENIENT):
        raise DataError(f"unknown strictness {strictness!r}")

    raw = read_raw(csv_text)
    columns = resolve_columns(raw.header)
    width = len(raw.header)

    samples, drops, notes = [], [], []
    for index, cells in enumerate(raw.rows, start=1):
        if len(cells) < width:
            if strictness == STRICT:
                raise MalformedRow(index, f"expected {width} cells, found {len(cells)}")
            drops.append(f"row {index}: expected {width} cells, found {len(cells)}")
            continue
        cells = align_row(cells, width, columns["location"])

        result = _parse_row(cells, columns, index, strictness, notes)
        if isinstance(result, str):
            drops.append(f"row {index}: {result}")
        else:
            samples.append(result)

    for line in drops + notes:
        logger.debug(line)
    if drops:
        logger.info(f"dropped {len(drops)} of {len(raw.rows)} rows from {source}")

    samples.sort(key=lambda s: (s.station_code, s.year, s.month))
    return Dataset(
        samples=tuple(samples),
        source=source,
        drops=tuple(drops),
        notes=tuple(notes),
        input_rows=len(raw.rows),
    )


def load_dataset(path, strictness=LENIENT):
    path = Path(path)
    return parse_dataset(path.read_text(encoding="utf-8"), strictness, source=str(path))


def impute_missing(ds, policy=DROP_ROW):
    incomplete = [s for s in ds.samples if s.missing_inputs()]
    if not incomplete:
        return ds

    if policy == DROP_ROW:
        kept = tuple(s for s in ds.samples if not s.missing_inputs())
        drops = tuple(
            f"row {s.source_row}: missing {', '.join(s.missing_inputs())}" for s in incomplete
        )
        for line in drops:
            logger.debug(line)
        return replace(ds, samples=kept, drops=ds.drops + drops)

    if policy == MEDIAN:
        frame = ds.to_frame()
        medians = {}
        for name in WQI_INPUTS:
            if frame[name].isna().any():
                if frame[name].notna().sum() == 0:
                    raise AllMissingColumn(name)
                medians[name] = float(frame[name].median())

        samples, notes = [], []
        for s in ds.samples:
            filled = {name: medians[name] for name in s.missing_inputs()}
            for name, value in filled.items():
                notes.append(f"row {s.source_row}: {name} imputed with median {value!r}")
            samples.append(replace(s, **filled) if filled else s)
        return replace(ds, samples=tuple(samples), notes=ds.notes + tuple(notes))

    raise DataError(f"unknown impute policy {policy!r}")


def _format_cell(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def serialize_dataset(ds):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CANONICAL_COLUMNS)
    for s in ds.samples:
        writer.writerow(
            [s.month_year if name == "month_year" else _format_cell(getattr(s, name)) for name in CANONICAL_COLUMNS]
        )
    return buffer.getvalue()
