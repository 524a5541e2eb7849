import math

INF = math.inf

# WQI weights in thousandths, so sums of weighted scores stay exact
WEIGHTS_PER_MILLE = {
    "ph": 165,
    "do": 281,
    "bod": 234,
    "ec": 9,
    "na": 28,
    "co": 281,
}
WQI_MAX = sum(WEIGHTS_PER_MILLE.values()) * 100 / 1000

SUB_INDEX_VALUES = (0, 40, 60, 80, 100)

# Bands in match order, first hit wins: ((low, high), score), both ends inclusive
BANDS = {
    "ph": (
        ((7.0, 8.5), 100),
        ((8.5, 8.6), 80), ((6.8, 6.9), 80),
        ((8.6, 8.8), 60), ((6.7, 6.8), 60),
        ((8.8, 9.0), 40), ((6.5, 6.7), 40),
    ),
    "do": (
        ((6.0, INF), 100),
        ((5.1, 6.0), 80),
        ((4.1, 5.0), 60),
        ((3.0, 4.0), 40),
    ),
    "co": (
        ((0.0, 5.0), 100),
        ((5.0, 50.0), 80),
        ((50.0, 500.0), 60),
        ((500.0, 1000.0), 40),
    ),
    "bod": (
        ((0.0, 3.0), 100),
        ((3.0, 6.0), 80),
        ((6.0, 80.0), 60),
        ((80.0, 125.0), 40),
    ),
    "ec": (
        ((0.0, 75.0), 100),
        ((75.0, 150.0), 80),
        ((150.0, 225.0), 60),
        ((225.0, 300.0), 40),
    ),
    "na": (
        ((0.0, 20.0), 100),
        ((20.0, 50.0), 80),
        ((50.0, 100.0), 60),
        ((100.0, 200.0), 40),
    ),
}

# Coliform counts above this score 40 instead of 0 in legacy mode
LEGACY_CO_LIMIT = 1000.0
LEGACY_CO_SCORE = 40

NORMATIVE = "normative"
LEGACY_NCO = "legacy_nco"
MODES = (NORMATIVE, LEGACY_NCO)

# Which WaterSample field feeds each sub-index
KIND_FIELDS = {
    "ph": "ph",
    "do": "dissolved_oxygen",
    "bod": "bod",
    "ec": "conductivity",
    "na": "nitrate",
    "co": "total_coliform",
}
WQI_INPUTS = tuple(KIND_FIELDS.values())

# Gradient boosting defaults
DEFAULT_N_TREES = 100
DEFAULT_LEARNING_RATE = 0.1
DEFAULT_MAX_DEPTH = 8
DEFAULT_MIN_SAMPLES_SPLIT = 200
DEFAULT_MIN_SAMPLES_LEAF = 30
DEFAULT_SEED = 0

MODEL_MAGIC = "AQUAGAUGE-GBM"
MODEL_VERSION = 1
SQUARED_ERROR = "squared_error"
LOSSES = (SQUARED_ERROR,)

# Forecasting window
WINDOW_MONTHS = 4
WINDOW_TOLERANCE = 1
N_LAGS = 2
DEFAULT_TEST_FRACTION = 0.2

FEATURE_NAMES = (
    "ph",
    "dissolved_oxygen",
    "bod",
    "conductivity",
    "nitrate",
    "total_coliform",
    "temp",
    "temp_present",
    "wqi",
    "lag1_wqi",
    "lag1_present",
    "lag2_wqi",
    "lag2_present",
    "month",
    "year",
)

# Ingest
STRICT = "strict"
LENIENT = "lenient"
DROP_ROW = "drop_row"
MEDIAN = "median"
MISSING_TOKENS = frozenset({"", "nan", "na", "n/a", "-"})

# Normalized header -> canonical column
COLUMN_ALIASES = {
    "serialno": "serial",
    "serial": "serial",
    "sn": "serial",
    "stationcode": "station_code",
    "station": "station_code",
    "locations": "location",
    "location": "location",
    "state": "state",
    "temp": "temp",
    "temperature": "temp",
    "do": "dissolved_oxygen",
    "dissolvedoxygen": "dissolved_oxygen",
    "ph": "ph",
    "conductivity": "conductivity",
    "ec": "conductivity",
    "bod": "bod",
    "nitratenannnitritenann": "nitrate",
    "nitratennitrite": "nitrate",
    "nitrate": "nitrate",
    "na": "nitrate",
    "fecalcoliform": "fecal_coliform",
    "totalcoliform": "total_coliform",
    "totalcoliformmean": "total_coliform",
    "tc": "total_coliform",
    "monthandyear": "month_year",
    "monthyear": "month_year",
}

REQUIRED_COLUMNS = (
    "station_code",
    "location",
    "state",
    "temp",
    "dissolved_oxygen",
    "ph",
    "conductivity",
    "bod",
    "nitrate",
    "fecal_coliform",
    "total_coliform",
    "month_year",
)
NUMERIC_COLUMNS = (
    "temp",
    "dissolved_oxygen",
    "ph",
    "conductivity",
    "bod",
    "nitrate",
    "fecal_coliform",
    "total_coliform",
)
# Order used when a dataset is written back out
CANONICAL_COLUMNS = ("serial",) + REQUIRED_COLUMNS

MIN_YEAR, MAX_YEAR = 1900, 2100
