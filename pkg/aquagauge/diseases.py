"""Threshold rules mapping a WQI profile to a fish disease and a suggested action.

A rules file holds one rule per line:

    rule <priority> "<disease>" reason "<text>" suggest "<text>" when <field> <op> <value> [and ...]

where <op> is one of < <= > >= or `between <lo> <hi>`. The highest-priority
rule whose conditions all hold wins; if none holds the default "No Disease"
rule applies. Priorities are distinct positive integers; 0 is reserved for
that default.
"""
import operator
import shlex
from dataclasses import dataclass
from importlib import resources

from .errors import DuplicatePriority, RuleSyntaxError, UnknownField
from .logs import get_logger

logger = get_logger("diseases")

SUB_INDEX_FIELDS = ("nph", "ndo", "nbdo", "nec", "nna", "nco")
# Rule field -> WaterSample attribute
RAW_FIELDS = {
    "ph": "ph",
    "do": "dissolved_oxygen",
    "bod": "bod",
    "ec": "conductivity",
    "na": "nitrate",
    "tc": "total_coliform",
}
FIELDS = ("wqi",) + SUB_INDEX_FIELDS + tuple(RAW_FIELDS)

OPERATORS = {
    "<": operator.lt,
    "<=": operator.le,
    "≤": operator.le,
    ">": operator.gt,
    ">=": operator.ge,
    "≥": operator.ge,
}
BETWEEN = "between"


@dataclass(frozen=True)
class Condition:
    field: str
    op: str
    value: float
    upper: float | None = None

    def holds(self, observed):
        if observed is None:
            return False
        if self.op == BETWEEN:
            return self.value <= observed <= self.upper
        return OPERATORS[self.op](observed, self.value)


@dataclass(frozen=True)
class Rule:
    name: str
    reason: str
    suggestion: str
    conditions: tuple
    priority: int

    def matches(self, rec):
        return all(c.holds(field_value(rec, c.field)) for c in self.conditions)


DEFAULT_RULE = Rule(name="No Disease", reason="", suggestion="Comfortable", conditions=(), priority=0)


@dataclass(frozen=True)
class RuleSet:
    rules: tuple
    default_rule: Rule = DEFAULT_RULE

    def __len__(self):
        return len(self.rules)


@dataclass(frozen=True)
class Diagnosis:
    disease: str
    reason: str
    suggestion: str
    matched_rule_priority: int
    inputs_echo: tuple


def field_value(rec, name):
    if name == "wqi":
        return rec.wqi
    if name in SUB_INDEX_FIELDS:
        return getattr(rec.sub, name)
    if rec.sample is None:
        return None
    return getattr(rec.sample, RAW_FIELDS[name], None)


def _number(token, line):
    try:
        return float(token)
    except ValueError:
        raise RuleSyntaxError(line, f"expected a number, got {token!r}") from None


def _parse_conditions(tokens, line):
    conditions = []
    position = 0
    while True:
        if len(tokens) - position < 3:
            raise RuleSyntaxError(line, "incomplete condition")
        field, op = tokens[position], tokens[position + 1]
        if field not in FIELDS:
            raise UnknownField(field)

        if op == BETWEEN:
            if len(tokens) - position < 4:
                raise RuleSyntaxError(line, "between needs two values")
            low, high = _number(tokens[position + 2], line), _number(tokens[position + 3], line)
            if low > high:
                raise RuleSyntaxError(line, f"empty range {low} to {high}")
            conditions.append(Condition(field, BETWEEN, low, high))
            position += 4
        elif op in OPERATORS:
            conditions.append(Condition(field, op, _number(tokens[position + 2], line)))
            position += 3
        else:
            raise RuleSyntaxError(line, f"unknown operator {op!r}")

        if position == len(tokens):
            return tuple(conditions)
        if tokens[position] != "and":
            raise RuleSyntaxError(line, f"expected 'and', got {tokens[position]!r}")
        position += 1


def parse_rule(text, line):
    try:
        tokens = shlex.split(text, comments=True)
    except ValueError as exc:
        raise RuleSyntaxError(line, str(exc)) from None
    if not tokens:
        return None

    layout_ok = (
        len(tokens) >= 8
        and tokens[0] == "rule"
        and tokens[3] == "reason"
        and tokens[5] == "suggest"
        and tokens[7] == "when"
    )
    if not layout_ok:
        raise RuleSyntaxError(line, 'expected: rule <priority> "<disease>" reason "<text>" suggest "<text>" when ...')
    try:
        priority = int(tokens[1])
    except ValueError:
        raise RuleSyntaxError(line, f"bad priority {tokens[1]!r}") from None
    if priority < 1:
        raise RuleSyntaxError(line, "priority must be a positive integer")

    return Rule(
        name=tokens[2],
        reason=tokens[4],
        suggestion=tokens[6],
        conditions=_parse_conditions(tokens[8:], line),
        priority=priority,
    )


def load_rules(text):
    rules = []
    seen = set()
    for line_number, line in enumerate(text.splitlines(), start=1):
        rule = parse_rule(line, line_number)
        if rule is None:
            continue
        if rule.priority in seen:
            raise DuplicatePriority(rule.priority)
        seen.add(rule.priority)
        rules.append(rule)

    rules.sort(key=lambda rule: -rule.priority)
    logger.debug(f"loaded {len(rules)} rules")
    return RuleSet(rules=tuple(rules))


def default_ruleset():
    text = resources.files("aquagauge").joinpath("default_rules.txt").read_text(encoding="utf-8")
    return load_rules(text)


def diagnose(rec, rs):
    for rule in rs.rules:
        if rule.matches(rec):
            echo = tuple((c.field, field_value(rec, c.field)) for c in rule.conditions)
            return Diagnosis(rule.name, rule.reason, rule.suggestion, rule.priority, echo)
    default = rs.default_rule
    return Diagnosis(default.name, default.reason, default.suggestion, default.priority, (("wqi", rec.wqi),))
