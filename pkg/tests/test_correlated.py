"""Correlated dual-endpoint designs: cell construction, exact enumeration,
bivariate-normal quadrature, and decision combination."""

import itertools
import math

import numpy as np
import pytest
from scipy import stats

from gonogo.designs import correlated, single_arm
from gonogo.designs.common import (
    DECISION_GO,
    DECISION_INCONCLUSIVE,
    DECISION_NOGO,
    Framework,
)
from gonogo.designs.correlated import (
    CorrelatedBinarySpec,
    CorrelatedNormalSpec,
    JointGo,
    cells_from_marginals,
)
from gonogo.errors import ValidationError
from gonogo.kernels import NormalParams
from gonogo.rules import Direction, DominatedRule
from tests.conftest import make_rules


def binary_spec(joint_go=JointGo.BOTH, rho=0.3, n=25, **kw):
    cells = cells_from_marginals(0.3, 0.4, rho)
    return CorrelatedBinarySpec(
        n=n, cells=cells,
        rules_x=make_rules([(0.2, 80)], [(0.3, 10)]),
        rules_y=make_rules([(0.3, 80)], [(0.4, 10)]),
        joint_go=joint_go, framework=Framework.FREQUENTIST, **kw)


# ------------------------------------------------------------ cell algebra --

def test_cells_match_moment_formulas():
    px, py, rho = 0.3, 0.4, 0.3
    p00, p01, p10, p11 = cells_from_marginals(px, py, rho)
    p11_oracle = px * py + rho * math.sqrt(px * 0.7 * py * 0.6)
    assert p11 == pytest.approx(p11_oracle, abs=1e-15)
    assert p10 + p11 == pytest.approx(px, abs=1e-15)
    assert p01 + p11 == pytest.approx(py, abs=1e-15)
    assert p00 + p01 + p10 + p11 == pytest.approx(1.0, abs=1e-15)


def test_zero_correlation_factorizes():
    p00, p01, p10, p11 = cells_from_marginals(0.3, 0.4, 0.0)
    assert p11 == pytest.approx(0.12, abs=1e-15)
    assert p00 == pytest.approx(0.7 * 0.6, abs=1e-15)


def test_infeasible_correlation_rejected():
    with pytest.raises(ValidationError):
        cells_from_marginals(0.05, 0.95, 0.9)
    with pytest.raises(ValidationError):
        cells_from_marginals(1.2, 0.4, 0.0)


# --------------------------------------------------------------- joint pmf --

def test_joint_pmf_matches_exhaustive_enumeration():
    cells = cells_from_marginals(0.3, 0.4, 0.3)
    n = 4
    pmf = correlated.joint_success_pmf(n, cells)
    oracle = np.zeros((n + 1, n + 1))
    for combo in itertools.product(range(4), repeat=n):
        p = math.prod(cells[c] for c in combo)
        x = sum(1 for c in combo if c in (2, 3))
        y = sum(1 for c in combo if c in (1, 3))
        oracle[x, y] += p
    np.testing.assert_allclose(pmf, oracle, atol=1e-15)


def test_joint_pmf_marginals_are_binomial():
    cells = cells_from_marginals(0.3, 0.4, 0.3)
    pmf = correlated.joint_success_pmf(25, cells)
    np.testing.assert_allclose(pmf.sum(axis=1),
                               stats.binom.pmf(np.arange(26), 25, 0.3),
                               atol=1e-13)
    np.testing.assert_allclose(pmf.sum(axis=0),
                               stats.binom.pmf(np.arange(26), 25, 0.4),
                               atol=1e-13)


# ------------------------------------------------------------- combination --

@pytest.mark.parametrize("cx,cy,both,either", [
    (DECISION_GO, DECISION_GO, DECISION_GO, DECISION_GO),
    (DECISION_GO, DECISION_INCONCLUSIVE, DECISION_INCONCLUSIVE, DECISION_GO),
    (DECISION_GO, DECISION_NOGO, DECISION_NOGO, DECISION_GO),
    (DECISION_INCONCLUSIVE, DECISION_INCONCLUSIVE,
     DECISION_INCONCLUSIVE, DECISION_INCONCLUSIVE),
    (DECISION_INCONCLUSIVE, DECISION_NOGO, DECISION_NOGO,
     DECISION_INCONCLUSIVE),
    (DECISION_NOGO, DECISION_NOGO, DECISION_NOGO, DECISION_NOGO),
])
def test_combine_codes_truth_table(cx, cy, both, either):
    assert int(correlated.combine_codes(cx, cy, JointGo.BOTH)) == both
    assert int(correlated.combine_codes(cx, cy, JointGo.EITHER)) == either
    # symmetric in the endpoints
    assert int(correlated.combine_codes(cy, cx, JointGo.BOTH)) == both
    assert int(correlated.combine_codes(cy, cx, JointGo.EITHER)) == either


# ------------------------------------------------------------------ binary --

def test_binary_zero_correlation_factorizes_joint_go():
    spec = binary_spec(rho=0.0)
    row = correlated.binary_joint_oc(spec).rows[0]
    codes_x = single_arm.binary_decision_codes(
        correlated._binary_endpoint_spec(spec, "x"), 25)
    codes_y = single_arm.binary_decision_codes(
        correlated._binary_endpoint_spec(spec, "y"), 25)
    px_go = stats.binom.pmf(np.arange(26), 25, 0.3)[codes_x == 1].sum()
    py_go = stats.binom.pmf(np.arange(26), 25, 0.4)[codes_y == 1].sum()
    assert row.p_go == pytest.approx(px_go * py_go, abs=1e-12)


def test_binary_enumeration_matches_simulation():
    spec = binary_spec(n_sims=40_000)
    exact = correlated.binary_joint_oc(spec, method="enumerate").rows[0]
    sim = correlated.binary_joint_oc(spec, method="simulate").rows[0]
    assert sim.p_go == pytest.approx(exact.p_go, abs=4 * sim.mc_se)
    assert sim.p_nogo == pytest.approx(exact.p_nogo, abs=4 * sim.mc_se)


def test_binary_go_probability_monotone_in_correlation_for_both_policy():
    p_go = [correlated.binary_joint_oc(binary_spec(rho=r)).rows[0].p_go
            for r in (0.0, 0.3, 0.6)]
    assert p_go[0] < p_go[1] < p_go[2]


def test_binary_either_dominates_both():
    row_both = correlated.binary_joint_oc(binary_spec(JointGo.BOTH)).rows[0]
    row_either = correlated.binary_joint_oc(binary_spec(JointGo.EITHER)).rows[0]
    assert row_either.p_go >= row_both.p_go
    assert row_either.p_nogo <= row_both.p_nogo


def test_binary_simulation_deterministic_across_workers():
    r1 = correlated.binary_joint_oc(binary_spec(n_sims=4096, workers=1),
                                    method="simulate").rows[0]
    r4 = correlated.binary_joint_oc(binary_spec(n_sims=4096, workers=4),
                                    method="simulate").rows[0]
    assert (r1.p_go, r1.p_nogo) == (r4.p_go, r4.p_nogo)


# ------------------------------------------------------------------ normal --

def normal_spec(rho=0.4, joint_go=JointGo.BOTH, known=True,
                framework=Framework.FREQUENTIST, priors=(None, None), **kw):
    return CorrelatedNormalSpec(
        n=30, means=(0.8, 1.0), sds=(1.0, 1.5), rho=rho,
        rules_x=make_rules([(0.5, 80)], [(0.8, 20)]),
        rules_y=make_rules([(0.6, 80)], [(1.0, 20)]),
        joint_go=joint_go, framework=framework, known_variance=known,
        prior_x=priors[0], prior_y=priors[1], **kw)


def test_bivariate_rectangle_matches_scipy():
    mvn = stats.multivariate_normal([0.2, -0.1],
                                    [[1.0, 0.6 * 1.0 * 2.0],
                                     [0.6 * 1.0 * 2.0, 4.0]])

    def scipy_rect(ax, bx, ay, by):
        return (mvn.cdf([bx, by]) - mvn.cdf([ax, by]) - mvn.cdf([bx, ay])
                + mvn.cdf([ax, ay]))

    got = correlated.bivariate_normal_rectangle(-0.5, 1.0, -1.0, 0.5,
                                                0.2, -0.1, 1.0, 2.0, 0.6)
    assert got == pytest.approx(scipy_rect(-0.5, 1.0, -1.0, 0.5), abs=1e-7)


def test_decision_intervals_partition_the_line():
    spec = normal_spec()
    cuts = correlated.marginal_cutoffs(spec)
    iv = correlated.decision_intervals(cuts["x"], Direction.GREATER_OR_EQUAL,
                                       DominatedRule.NOGO)
    go_lo = iv[DECISION_GO][0]
    nogo_hi = iv[DECISION_NOGO][1]
    assert iv[DECISION_INCONCLUSIVE] == (nogo_hi, go_lo)
    assert nogo_hi <= go_lo
    # dominated NOGO: contested region belongs to No-Go
    assert go_lo == max(cuts["x"].go_boundary, cuts["x"].nogo_boundary)


def test_normal_exact_oc_matches_scipy_mvn_oracle():
    spec = normal_spec()
    row = correlated.normal_joint_oc(spec).rows[0]
    cuts = correlated.marginal_cutoffs(spec)
    sx, sy = 1.0 / math.sqrt(30), 1.5 / math.sqrt(30)
    mvn = stats.multivariate_normal(
        [0.8, 1.0], [[sx ** 2, 0.4 * sx * sy], [0.4 * sx * sy, sy ** 2]])

    def rect(ax, bx, ay, by):
        big = 1e3
        ax, bx = max(ax, -big), min(bx, big)
        ay, by = max(ay, -big), min(by, big)
        return (mvn.cdf([bx, by]) - mvn.cdf([ax, by]) - mvn.cdf([bx, ay])
                + mvn.cdf([ax, ay]))

    # per-endpoint decision regions (dominated NOGO resolution)
    regions = {}
    for w in ("x", "y"):
        g, ng = cuts[w].go_boundary, cuts[w].nogo_boundary
        go_lo = max(g, ng)
        regions[w] = {1: (go_lo, math.inf), -1: (-math.inf, ng),
                      0: (ng, go_lo)}
    p_go = p_nogo = 0.0
    for cx, (ax, bx) in regions["x"].items():
        for cy, (ay, by) in regions["y"].items():
            pr = rect(ax, bx, ay, by)
            overall = int(correlated.combine_codes(cx, cy, JointGo.BOTH))
            if overall == 1:
                p_go += pr
            elif overall == -1:
                p_nogo += pr
    assert row.p_go == pytest.approx(p_go, abs=1e-6)
    assert row.p_nogo == pytest.approx(p_nogo, abs=1e-6)


def test_normal_zero_correlation_factorizes():
    spec = normal_spec(rho=1e-12)
    row = correlated.normal_joint_oc(spec).rows[0]
    cuts = correlated.marginal_cutoffs(spec)
    p_go = 1.0
    for w, mu, s in (("x", 0.8, 1.0), ("y", 1.0, 1.5)):
        go_lo = max(cuts[w].go_boundary, cuts[w].nogo_boundary)
        p_go *= stats.norm.sf(go_lo, mu, s / math.sqrt(30))
    assert row.p_go == pytest.approx(p_go, abs=1e-9)


def test_normal_unknown_variance_sim_deterministic_and_near_known():
    from gonogo.kernels import NormalGammaParams
    kw = dict(rho=0.4, known=False, framework=Framework.BAYESIAN,
              priors=(NormalGammaParams(0.0, 0.01, 1.0, 1.0),
                      NormalGammaParams(0.0, 0.01, 1.0, 1.0)))
    r1 = correlated.normal_joint_oc(normal_spec(n_sims=2000, workers=1,
                                                **kw)).rows[0]
    r4 = correlated.normal_joint_oc(normal_spec(n_sims=2000, workers=4,
                                                **kw)).rows[0]
    assert (r1.p_go, r1.p_nogo) == (r4.p_go, r4.p_nogo)
    assert r1.mc_se is not None
    assert 0.0 <= r1.p_go <= 1.0


def test_joint_oc_dispatch():
    assert correlated.joint_oc(binary_spec()).rows[0].p_go > 0
    assert correlated.joint_oc(normal_spec()).rows[0].p_go > 0


# ------------------------------------------------------------- validation ---

def test_validation_errors():
    spec = binary_spec()
    spec.cells = (0.5, 0.5, 0.5, -0.5)
    with pytest.raises(ValidationError):
        correlated.validate_binary_spec(spec)
    spec = binary_spec()
    spec.n = 0
    with pytest.raises(ValidationError):
        correlated.validate_binary_spec(spec)
    nspec = normal_spec()
    nspec.rho = 1.0
    with pytest.raises(ValidationError):
        correlated.validate_normal_spec(nspec)
    nspec = normal_spec()
    nspec.sds = (0.0, 1.0)
    with pytest.raises(ValidationError):
        correlated.validate_normal_spec(nspec)
