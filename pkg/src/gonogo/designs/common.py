"""Shared result types and classification helpers for the design modules."""

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ..rules import Combinator, DecisionValue, Direction, DominatedRule, Rule


class Framework(Enum):
    FREQUENTIST = "frequentist"
    BAYESIAN = "bayesian"


@dataclass
class CutoffResult:
    """Decision boundaries on the observed statistic for one sample size."""

    n: int
    go_boundary: float | None
    nogo_boundary: float | None
    overlap: bool
    boundary_statistic: str
    warnings: list[str] = field(default_factory=list)


@dataclass
class OCRow:
    n: int
    true_value: float
    p_go: float
    p_nogo: float
    p_inconclusive: float
    mc_se: float | None = None
    p_stop_interim: float | None = None


@dataclass
class OperatingCharacteristics:
    rows: list[OCRow]


def fold_cutoffs(cuts, combinator: Combinator, direction: Direction,
                 nogo: bool) -> float:
    """Combine per-criterion statistic cutoffs into one rule boundary.

    For GREATER_OR_EQUAL a Go criterion holds when stat >= cut, so AND takes
    the max and OR the min; a No-Go criterion fires when stat < cut, flipping
    the fold.  LESS mirrors both.
    """
    cuts = list(cuts)
    if direction is Direction.GREATER_OR_EQUAL:
        take_max = (combinator is Combinator.AND) != nogo
    else:
        take_max = (combinator is Combinator.AND) == nogo
    return max(cuts) if take_max else min(cuts)


def continuous_region_probs(go_cut: float | None, nogo_cut: float | None,
                            direction: Direction, dominated: DominatedRule,
                            cdf) -> tuple[float, float, float]:
    """P(Go), P(No-Go), P(Inconclusive) for a continuous statistic.

    ``cdf`` is the sampling CDF of the statistic.  The contested region (both
    rules fire) is assigned to the dominated-rule winner.
    """
    if direction is Direction.GREATER_OR_EQUAL:
        # Go region: stat >= go_cut; No-Go region: stat < nogo_cut
        if go_cut is None:
            p_go = 0.0
            nogo_hi = nogo_cut
        elif dominated is DominatedRule.GO:
            p_go = 1.0 - cdf(go_cut)
            nogo_hi = None if nogo_cut is None else min(nogo_cut, go_cut)
        else:
            eff = go_cut if nogo_cut is None else max(go_cut, nogo_cut)
            p_go = 1.0 - cdf(eff)
            nogo_hi = nogo_cut
        p_nogo = 0.0 if nogo_hi is None else cdf(nogo_hi)
    else:
        # Go region: stat <= go_cut; No-Go region: stat > nogo_cut
        if go_cut is None:
            p_go = 0.0
            nogo_lo = nogo_cut
        elif dominated is DominatedRule.GO:
            p_go = cdf(go_cut)
            nogo_lo = None if nogo_cut is None else max(nogo_cut, go_cut)
        else:
            eff = go_cut if nogo_cut is None else min(go_cut, nogo_cut)
            p_go = cdf(eff)
            nogo_lo = nogo_cut
    if direction is Direction.LESS:
        p_nogo = 0.0 if nogo_lo is None else 1.0 - cdf(nogo_lo)
    p_go = min(max(p_go, 0.0), 1.0)
    p_nogo = min(max(p_nogo, 0.0), 1.0 - p_go)
    return p_go, p_nogo, 1.0 - p_go - p_nogo


def continuous_overlap(go_cut: float | None, nogo_cut: float | None,
                       direction: Direction) -> bool:
    if go_cut is None or nogo_cut is None:
        return False
    if direction is Direction.GREATER_OR_EQUAL:
        return go_cut < nogo_cut
    return nogo_cut < go_cut


def classify_counts(decisions: np.ndarray) -> tuple[int, int, int]:
    """Counts of (go, nogo, inconclusive) in an integer decision array."""
    go = int(np.sum(decisions == DECISION_GO))
    nogo = int(np.sum(decisions == DECISION_NOGO))
    return go, nogo, decisions.size - go - nogo


# integer decision codes used in vectorized classification paths
DECISION_GO = 1
DECISION_NOGO = -1
DECISION_INCONCLUSIVE = 0

_CODE_TO_VALUE = {
    DECISION_GO: DecisionValue.GO,
    DECISION_NOGO: DecisionValue.NOGO,
    DECISION_INCONCLUSIVE: DecisionValue.INCONCLUSIVE,
}


def decision_code(go_fired, nogo_fired, dominated: DominatedRule):
    """Vectorized Go/No-Go/Inconclusive resolution to integer codes."""
    go_fired = np.asarray(go_fired, dtype=bool)
    nogo_fired = np.asarray(nogo_fired, dtype=bool)
    out = np.zeros(go_fired.shape, dtype=np.int8)
    both = go_fired & nogo_fired
    only_go = go_fired & ~nogo_fired
    only_nogo = nogo_fired & ~go_fired
    out[only_go] = DECISION_GO
    out[only_nogo] = DECISION_NOGO
    out[both] = (DECISION_GO if dominated is DominatedRule.GO
                 else DECISION_NOGO)
    return out


def fold_flags(rule: Rule, flags: list[np.ndarray]) -> np.ndarray:
    """Vectorized combinator fold over per-criterion boolean arrays."""
    out = flags[0]
    for f in flags[1:]:
        out = (out & f) if rule.combinator is Combinator.AND else (out | f)
    return out


def mc_probs(go: int, nogo: int, total: int) -> tuple[float, float, float, float]:
    """Proportions plus the largest binomial standard error among the three."""
    p_go = go / total
    p_nogo = nogo / total
    p_inc = 1.0 - p_go - p_nogo
    se = max(math.sqrt(p * (1.0 - p) / total) for p in (p_go, p_nogo, p_inc))
    return p_go, p_nogo, p_inc, se
