import pytest

from gonogo.rules import (
    Combinator,
    Criterion,
    Direction,
    DominatedRule,
    Rule,
    RuleSet,
)


def make_rules(go_criteria, nogo_criteria, *, direction=Direction.GREATER_OR_EQUAL,
               go_comb=Combinator.AND, nogo_comb=Combinator.AND,
               dominated=DominatedRule.NOGO) -> RuleSet:
    return RuleSet(
        go=Rule(tuple(Criterion(t, c) for t, c in go_criteria), go_comb),
        nogo=Rule(tuple(Criterion(t, c) for t, c in nogo_criteria), nogo_comb),
        direction=direction, dominated=dominated)


@pytest.fixture
def example1_rules() -> RuleSet:
    """Single-arm binary: Go when the 80% lower bound clears 0.2; No-Go when
    the 10% lower bound misses 0.3."""
    return make_rules([(0.2, 80.0)], [(0.3, 10.0)])


@pytest.fixture
def example2_rules() -> RuleSet:
    """Two-arm hazard ratio, direction LESS, paired criteria on both rules."""
    return make_rules([(1.0, 90.0), (0.7, 50.0)], [(1.0, 90.0), (0.7, 50.0)],
                      direction=Direction.LESS)


@pytest.fixture
def example3_rules() -> RuleSet:
    """Bayesian normal mean, direction LESS, OR-combined Go."""
    return make_rules([(4.0, 90.0), (2.5, 50.0)], [(4.0, 20.0)],
                      direction=Direction.LESS, go_comb=Combinator.OR)
