"""Go/No-Go decision rule grammar and evaluation.

A rule set pairs a Go rule and a No-Go rule, each holding one or two
criteria ``(threshold, confidence_pct)``, a shared direction of comparison,
and a dominated-rule selector that settles the case where both rules fire.
A Go criterion is met when the evidence probability for its threshold is at
least its confidence; a No-Go criterion fires when that probability falls
strictly below its confidence.
"""

import math
import warnings
from dataclasses import dataclass, field
from enum import Enum

from .errors import MissingEvidenceError, ValidationError


class Direction(Enum):
    GREATER_OR_EQUAL = "greater_or_equal"
    LESS = "less"


class Combinator(Enum):
    AND = "and"
    OR = "or"


class DominatedRule(Enum):
    GO = "go"
    NOGO = "nogo"


class DecisionValue(Enum):
    GO = "go"
    NOGO = "nogo"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Criterion:
    threshold: float
    confidence_pct: float


@dataclass(frozen=True)
class Rule:
    criteria: tuple[Criterion, ...]
    combinator: Combinator = Combinator.AND

    @property
    def thresholds(self) -> tuple[float, ...]:
        return tuple(c.threshold for c in self.criteria)


@dataclass(frozen=True)
class RuleSet:
    go: Rule
    nogo: Rule
    direction: Direction = Direction.GREATER_OR_EQUAL
    dominated: DominatedRule = DominatedRule.GO


@dataclass(frozen=True)
class Decision:
    value: DecisionValue
    conflict_resolved: bool = False


@dataclass(frozen=True)
class EvidenceProfile:
    """Evidence probability per threshold, in the rule set's direction.

    Bayesian designs supply posterior tail probabilities; frequentist designs
    supply the confidence level at which the one-sided bound exactly touches
    the threshold.
    """

    prob_at: dict[float, float] = field(default_factory=dict)

    def __post_init__(self):
        for t, p in self.prob_at.items():
            if not 0.0 <= p <= 1.0:
                raise ValidationError(
                    f"evidence probability {p} for threshold {t} outside [0, 1]")


def _validate_rule(rule: Rule, name: str) -> None:
    if not 1 <= len(rule.criteria) <= 2:
        raise ValidationError(
            f"{name} rule must have 1 or 2 criteria, got {len(rule.criteria)}",
            code="INVALID_CRITERIA_COUNT")
    for c in rule.criteria:
        if not math.isfinite(c.threshold):
            raise ValidationError(
                f"{name} criterion threshold must be finite",
                code="NON_FINITE_THRESHOLD")
        if not 0.0 < c.confidence_pct < 100.0:
            raise ValidationError(
                f"{name} criterion confidence_pct must be strictly between 0 "
                f"and 100, got {c.confidence_pct}", code="INVALID_CONFIDENCE")
    if len(rule.criteria) == 2 and \
            rule.criteria[0].threshold == rule.criteria[1].threshold:
        warnings.warn(
            f"{name} rule uses two criteria with equal thresholds; it reduces "
            "to a single criterion", stacklevel=3)


def validate_rule_set(rs: RuleSet, *, rate_scale: bool = False,
                      hazard_scale: bool = False) -> RuleSet:
    """Check the type invariants; returns the rule set unchanged when valid."""
    _validate_rule(rs.go, "go")
    _validate_rule(rs.nogo, "nogo")
    if rate_scale or hazard_scale:
        for name, rule in (("go", rs.go), ("nogo", rs.nogo)):
            for c in rule.criteria:
                if rate_scale and not 0.0 <= c.threshold <= 1.0:
                    raise ValidationError(
                        f"{name} threshold {c.threshold} outside [0, 1] for a "
                        "rate-scale endpoint", code="NON_FINITE_THRESHOLD")
                if hazard_scale and not c.threshold > 0.0:
                    raise ValidationError(
                        f"{name} threshold {c.threshold} must be > 0 for a "
                        "hazard-ratio endpoint", code="NON_FINITE_THRESHOLD")
    return rs


def fold(combinator: Combinator, flags) -> bool:
    flags = list(flags)
    return all(flags) if combinator is Combinator.AND else any(flags)


def decide(go_fired: bool, nogo_fired: bool, dominated: DominatedRule) -> Decision:
    if go_fired and nogo_fired:
        value = (DecisionValue.GO if dominated is DominatedRule.GO
                 else DecisionValue.NOGO)
        return Decision(value, conflict_resolved=True)
    if go_fired:
        return Decision(DecisionValue.GO)
    if nogo_fired:
        return Decision(DecisionValue.NOGO)
    return Decision(DecisionValue.INCONCLUSIVE)


def rule_fired(rule: Rule, ev: EvidenceProfile, *, nogo: bool) -> bool:
    flags = []
    for c in rule.criteria:
        if c.threshold not in ev.prob_at:
            raise MissingEvidenceError(
                f"no evidence probability for threshold {c.threshold}")
        p = ev.prob_at[c.threshold]
        level = c.confidence_pct / 100.0
        flags.append(p < level if nogo else p >= level)
    return fold(rule.combinator, flags)


def evaluate(rs: RuleSet, ev: EvidenceProfile) -> Decision:
    go_fired = rule_fired(rs.go, ev, nogo=False)
    nogo_fired = rule_fired(rs.nogo, ev, nogo=True)
    return decide(go_fired, nogo_fired, rs.dominated)


@dataclass(frozen=True)
class ConstellationShape:
    direction: Direction
    go_shape: str    # "single" | "pair_and" | "pair_or"
    nogo_shape: str


_SHAPES = ("single", "pair_and", "pair_or")


def enumerate_constellations() -> list[ConstellationShape]:
    """The 2 x 3 x 3 = 18 distinct rule-set shapes."""
    return [ConstellationShape(d, g, ng)
            for d in Direction for g in _SHAPES for ng in _SHAPES]


def _shape_of(rule: Rule) -> str:
    if len(rule.criteria) == 1:
        return "single"
    return "pair_and" if rule.combinator is Combinator.AND else "pair_or"


def constellation_of(rs: RuleSet) -> ConstellationShape:
    return ConstellationShape(rs.direction, _shape_of(rs.go), _shape_of(rs.nogo))


def _fmt(v: float) -> str:
    return format(v, "g")


def render_rule_text(rs: RuleSet, statistic_label: str) -> tuple[str, str]:
    """Display strings for the Go and No-Go rules, e.g. "PP(RR >= 0.2) >= 80 %"."""
    sym = "≥" if rs.direction is Direction.GREATER_OR_EQUAL else "≤"

    def crit(c: Criterion, nogo: bool) -> str:
        rel = "<" if nogo else "≥"
        return (f"PP({statistic_label} {sym} {_fmt(c.threshold)}) "
                f"{rel} {_fmt(c.confidence_pct)} %")

    def rule(r: Rule, nogo: bool) -> str:
        joiner = " and " if r.combinator is Combinator.AND else " or "
        return joiner.join(crit(c, nogo) for c in r.criteria)

    return rule(rs.go, False), rule(rs.nogo, True)
