"""Rule grammar: validation, evidence semantics, conflict resolution,
constellation enumeration, and display strings."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gonogo.errors import MissingEvidenceError, ValidationError
from gonogo.rules import (
    Combinator,
    Criterion,
    Decision,
    DecisionValue,
    Direction,
    DominatedRule,
    EvidenceProfile,
    Rule,
    RuleSet,
    constellation_of,
    decide,
    enumerate_constellations,
    evaluate,
    fold,
    render_rule_text,
    rule_fired,
    validate_rule_set,
)
from tests.conftest import make_rules


def ev(**probs) -> EvidenceProfile:
    return EvidenceProfile({float(k[1:].replace("_", ".")): v
                            for k, v in probs.items()})


# ----------------------------------------------------------- validation -----

def test_rule_needs_one_or_two_criteria():
    with pytest.raises(ValidationError):
        validate_rule_set(RuleSet(go=Rule(()), nogo=Rule((Criterion(0.2, 80),))))
    three = tuple(Criterion(0.1 * i, 50) for i in range(1, 4))
    with pytest.raises(ValidationError):
        validate_rule_set(RuleSet(go=Rule(three),
                                  nogo=Rule((Criterion(0.2, 80),))))


@pytest.mark.parametrize("conf", [0.0, 100.0, -5.0, 120.0])
def test_confidence_must_be_strictly_inside_0_100(conf):
    with pytest.raises(ValidationError) as e:
        validate_rule_set(make_rules([(0.2, conf)], [(0.3, 10)]))
    assert e.value.code == "INVALID_CONFIDENCE"


def test_non_finite_threshold_rejected():
    with pytest.raises(ValidationError) as e:
        validate_rule_set(make_rules([(float("nan"), 80)], [(0.3, 10)]))
    assert e.value.code == "NON_FINITE_THRESHOLD"


def test_rate_scale_threshold_range_enforced():
    with pytest.raises(ValidationError):
        validate_rule_set(make_rules([(1.2, 80)], [(0.3, 10)]), rate_scale=True)
    validate_rule_set(make_rules([(0.2, 80)], [(0.3, 10)]), rate_scale=True)


def test_hazard_scale_threshold_must_be_positive():
    with pytest.raises(ValidationError):
        validate_rule_set(make_rules([(0.0, 80)], [(0.7, 50)]),
                          hazard_scale=True)
    validate_rule_set(make_rules([(1.0, 90)], [(0.7, 50)]), hazard_scale=True)


def test_equal_threshold_pair_warns():
    with pytest.warns(UserWarning):
        validate_rule_set(make_rules([(0.2, 80), (0.2, 50)], [(0.3, 10)]))


def test_evidence_probability_outside_unit_interval_rejected():
    with pytest.raises(ValidationError):
        EvidenceProfile({0.2: 1.5})


# ---------------------------------------------------- evidence semantics ----

def test_go_fires_at_exact_confidence_nogo_does_not():
    # Go requires prob >= level; No-Go requires prob < level (strict)
    rule = Rule((Criterion(0.2, 80.0),))
    evidence = EvidenceProfile({0.2: 0.80})
    assert rule_fired(rule, evidence, nogo=False)
    assert not rule_fired(rule, evidence, nogo=True)


def test_nogo_fires_just_below_confidence():
    rule = Rule((Criterion(0.2, 80.0),))
    evidence = EvidenceProfile({0.2: 0.80 - 1e-12})
    assert not rule_fired(rule, evidence, nogo=False)
    assert rule_fired(rule, evidence, nogo=True)


def test_missing_threshold_raises():
    rule = Rule((Criterion(0.25, 80.0),))
    with pytest.raises(MissingEvidenceError):
        rule_fired(rule, EvidenceProfile({0.2: 0.9}), nogo=False)


@pytest.mark.parametrize("comb,flags,expected", [
    (Combinator.AND, [True, True], True),
    (Combinator.AND, [True, False], False),
    (Combinator.OR, [True, False], True),
    (Combinator.OR, [False, False], False),
])
def test_fold(comb, flags, expected):
    assert fold(comb, flags) is expected


def test_pair_and_pair_or_firing():
    rs_and = make_rules([(0.2, 80), (0.3, 50)], [(0.3, 10)])
    rs_or = make_rules([(0.2, 80), (0.3, 50)], [(0.3, 10)],
                       go_comb=Combinator.OR)
    evidence = EvidenceProfile({0.2: 0.85, 0.3: 0.40})
    assert not rule_fired(rs_and.go, evidence, nogo=False)
    assert rule_fired(rs_or.go, evidence, nogo=False)


# ------------------------------------------------------ conflict handling ---

@pytest.mark.parametrize("go_f,nogo_f,dom,value,resolved", [
    (True, False, DominatedRule.GO, DecisionValue.GO, False),
    (False, True, DominatedRule.GO, DecisionValue.NOGO, False),
    (False, False, DominatedRule.GO, DecisionValue.INCONCLUSIVE, False),
    (True, True, DominatedRule.GO, DecisionValue.GO, True),
    (True, True, DominatedRule.NOGO, DecisionValue.NOGO, True),
])
def test_decide_matrix(go_f, nogo_f, dom, value, resolved):
    assert decide(go_f, nogo_f, dom) == Decision(value, resolved)


def test_evaluate_end_to_end_conflict():
    # Go: prob(0.2) >= 0.8 holds at 0.9; No-Go: prob(0.3) < 0.95 holds at 0.9
    rs = make_rules([(0.2, 80)], [(0.3, 95)], dominated=DominatedRule.NOGO)
    d = evaluate(rs, EvidenceProfile({0.2: 0.9, 0.3: 0.9}))
    assert d == Decision(DecisionValue.NOGO, conflict_resolved=True)
    rs_go = make_rules([(0.2, 80)], [(0.3, 95)], dominated=DominatedRule.GO)
    d = evaluate(rs_go, EvidenceProfile({0.2: 0.9, 0.3: 0.9}))
    assert d == Decision(DecisionValue.GO, conflict_resolved=True)


# --------------------------------------------------------- constellations ---

def test_eighteen_distinct_constellations():
    cs = enumerate_constellations()
    assert len(cs) == 18
    assert len(set(cs)) == 18
    assert {c.direction for c in cs} == set(Direction)
    assert {c.go_shape for c in cs} == {"single", "pair_and", "pair_or"}
    assert {c.nogo_shape for c in cs} == {"single", "pair_and", "pair_or"}


def test_constellation_of_examples(example1_rules, example2_rules,
                                   example3_rules):
    c1 = constellation_of(example1_rules)
    assert (c1.direction, c1.go_shape, c1.nogo_shape) == (
        Direction.GREATER_OR_EQUAL, "single", "single")
    c2 = constellation_of(example2_rules)
    assert (c2.direction, c2.go_shape, c2.nogo_shape) == (
        Direction.LESS, "pair_and", "pair_and")
    c3 = constellation_of(example3_rules)
    assert (c3.direction, c3.go_shape, c3.nogo_shape) == (
        Direction.LESS, "pair_or", "single")


# --------------------------------------------------------- display strings --

def test_render_rule_text_goldens(example1_rules, example2_rules,
                                  example3_rules):
    go, nogo = render_rule_text(example1_rules, "RR")
    assert go == "PP(RR ≥ 0.2) ≥ 80 %"
    assert nogo == "PP(RR ≥ 0.3) < 10 %"
    go, nogo = render_rule_text(example2_rules, "HR")
    assert go == "PP(HR ≤ 1) ≥ 90 % and PP(HR ≤ 0.7) ≥ 50 %"
    assert nogo == "PP(HR ≤ 1) < 90 % and PP(HR ≤ 0.7) < 50 %"
    go, nogo = render_rule_text(example3_rules, "mean")
    assert go == "PP(mean ≤ 4) ≥ 90 % or PP(mean ≤ 2.5) ≥ 50 %"
    assert nogo == "PP(mean ≤ 4) < 20 %"


# ------------------------------------------------------------- properties ---

_ORDER = {DecisionValue.NOGO: 0, DecisionValue.INCONCLUSIVE: 1,
          DecisionValue.GO: 2}


@given(st.floats(0, 1), st.floats(0, 1), st.floats(0, 1),
       st.sampled_from(list(DominatedRule)))
@settings(max_examples=100, deadline=None)
def test_decision_monotone_in_evidence(p1, p2, bump, dom):
    """Raising every evidence probability can only move the decision toward
    Go in the ordering No-Go < Inconclusive < Go."""
    rs = make_rules([(0.2, 80), (0.3, 50)], [(0.3, 40)],
                    go_comb=Combinator.OR, dominated=dom)
    lo = EvidenceProfile({0.2: p1, 0.3: p2})
    hi = EvidenceProfile({0.2: min(1.0, p1 + bump), 0.3: min(1.0, p2 + bump)})
    assert _ORDER[evaluate(rs, lo).value] <= _ORDER[evaluate(rs, hi).value]


@given(st.floats(0, 1), st.floats(0, 1))
@settings(max_examples=60, deadline=None)
def test_exactly_one_decision_value(p1, p2):
    rs = make_rules([(0.2, 80)], [(0.3, 40)])
    d = evaluate(rs, EvidenceProfile({0.2: p1, 0.3: p2}))
    assert d.value in set(DecisionValue)
