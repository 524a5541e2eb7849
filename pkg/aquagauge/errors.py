"""Exceptions raised by aquagauge.

Everything derives from AquaGaugeError. DataError covers bad input and usage
(the CLI exits with 2), InvariantViolation covers broken internal guarantees
(the CLI exits with 3).
"""


class AquaGaugeError(Exception):
    pass


class DataError(AquaGaugeError, ValueError):
    pass


class InvariantViolation(AquaGaugeError):
    pass


# Ingest

class EmptyInput(DataError):
    def __init__(self, message="no samples"):
        super().__init__(message)


class MissingColumn(DataError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"missing column: {name}")


class MalformedRow(DataError):
    def __init__(self, index, reason):
        self.index = index
        self.reason = reason
        super().__init__(f"row {index}: {reason}")


class BadDateToken(DataError):
    def __init__(self, token):
        self.token = token
        super().__init__(f"bad month-year token: {token!r}")


class AllMissingColumn(DataError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"column {name} has no observed values")


class InvalidValue(DataError):
    def __init__(self, field, value):
        self.field = field
        self.value = value
        super().__init__(f"invalid {field}: {value!r}")


# WQI

class NonFinite(DataError):
    def __init__(self, value):
        self.value = value
        super().__init__(f"non-finite value: {value!r}")


class MissingInput(DataError):
    def __init__(self, field):
        self.field = field
        super().__init__(f"missing WQI input: {field}")


# Boosting

class EmptyTargets(DataError):
    def __init__(self):
        super().__init__("no targets to fit")


class LengthMismatch(DataError):
    def __init__(self, expected, actual):
        self.expected = expected
        self.actual = actual
        super().__init__(f"length mismatch: expected {expected}, got {actual}")


class ArityMismatch(DataError):
    def __init__(self, expected, actual):
        self.expected = expected
        self.actual = actual
        super().__init__(f"row has {actual} features, model expects {expected}")


class EmptyLeaf(DataError):
    def __init__(self):
        super().__init__("leaf has no residuals")


class InvalidHyperparams(DataError):
    def __init__(self, name, value):
        self.name = name
        self.value = value
        super().__init__(f"invalid hyperparameter {name}={value!r}")


class ModelFormatError(DataError):
    pass


class BadMagic(ModelFormatError):
    def __init__(self, found):
        self.found = found
        super().__init__(f"not a model file (first line {found!r})")


class UnsupportedVersion(ModelFormatError):
    def __init__(self, version):
        self.version = version
        super().__init__(f"unsupported model version {version!r}")


class CorruptHeader(ModelFormatError):
    def __init__(self, key):
        self.key = key
        super().__init__(f"corrupt or missing header field {key!r}")


class CorruptNode(ModelFormatError):
    def __init__(self, index, tree=None):
        self.index = index
        self.tree = tree
        where = f"tree {tree} " if tree is not None else ""
        super().__init__(f"corrupt {where}node {index}")


# Forecasting and evaluation

class EmptyEvaluation(DataError):
    def __init__(self):
        super().__init__("no examples to evaluate")


class DegenerateActuals(DataError):
    def __init__(self):
        super().__init__("actual values have zero variance")


class ZeroActual(DataError):
    def __init__(self):
        super().__init__("percentile error is undefined for an actual value of 0")


class FeatureMismatch(DataError):
    def __init__(self, expected, actual):
        self.expected = tuple(expected)
        self.actual = tuple(actual)
        super().__init__(f"model features {self.actual} do not match {self.expected}")


# Disease rules

class RuleSyntaxError(DataError):
    def __init__(self, line, detail):
        self.line = line
        self.detail = detail
        super().__init__(f"rules line {line}: {detail}")


class DuplicatePriority(DataError):
    def __init__(self, priority):
        self.priority = priority
        super().__init__(f"duplicate rule priority {priority}")


class UnknownField(DataError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"unknown rule field {name!r}")
