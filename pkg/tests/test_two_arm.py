"""Two-arm designs against independently coded scipy oracles."""

import math

import numpy as np
import pytest
from scipy import integrate, stats

from gonogo.designs import two_arm
from gonogo.designs.common import Framework
from gonogo.designs.two_arm import TwoArmEndpoint, TwoArmSpec
from gonogo.errors import ValidationError
from gonogo.kernels import BetaParams, NormalParams
from gonogo.rules import Direction
from tests.conftest import make_rules


def hr_spec(rules, framework=Framework.FREQUENTIST, events=((35, 35),),
            true_values=(0.5, 0.6, 0.7), prior=None, n_sims=2000, workers=1):
    return TwoArmSpec(endpoint=TwoArmEndpoint.SURVIVAL_HR,
                      framework=framework, rules=rules,
                      true_values=list(true_values),
                      events=[tuple(e) for e in events], hr_prior=prior,
                      n_sims=n_sims, workers=workers)


# ----------------------------------------------------------- survival HR ----

def test_hr_freq_cutoffs_closed_form(example2_rules):
    cuts = two_arm.survival_hr_cutoff(hr_spec(example2_rules))
    sigma = math.sqrt(1 / 35 + 1 / 35)
    z90, z50 = stats.norm.ppf(0.90), stats.norm.ppf(0.50)
    # direction LESS: each criterion clears when observed HR <= t * exp(-z s);
    # AND-folded Go takes the tighter (smaller) bound
    go_oracle = min(1.0 * math.exp(-z90 * sigma), 0.7 * math.exp(-z50 * sigma))
    # No-Go fires when both criteria miss: observed HR above the larger bound
    nogo_oracle = max(1.0 * math.exp(-z90 * sigma), 0.7 * math.exp(-z50 * sigma))
    assert cuts[0].go_boundary == pytest.approx(go_oracle, rel=1e-12)
    assert cuts[0].nogo_boundary == pytest.approx(nogo_oracle, rel=1e-12)
    assert cuts[0].boundary_statistic == "HAZARD_RATIO"


def test_hr_freq_oc_lognormal_oracle(example2_rules):
    spec = hr_spec(example2_rules)
    cuts = two_arm.survival_hr_cutoff(spec)
    oc = two_arm.survival_hr_oc(spec, cuts)
    sigma = math.sqrt(2 / 35)
    for row in oc.rows:
        mu = math.log(row.true_value)
        go_oracle = stats.norm.cdf(math.log(cuts[0].go_boundary), mu, sigma)
        nogo_oracle = stats.norm.sf(math.log(cuts[0].nogo_boundary), mu, sigma)
        assert row.p_go == pytest.approx(go_oracle, abs=1e-10)
        assert row.p_nogo == pytest.approx(nogo_oracle, abs=1e-10)
    # stronger effect (smaller HR) should raise P(Go)
    p_by_hr = {r.true_value: r.p_go for r in oc.rows}
    assert p_by_hr[0.5] > p_by_hr[0.6] > p_by_hr[0.7]


def test_hr_bayes_cutoff_hits_posterior_tail(example2_rules):
    prior = NormalParams(0.0, 2.0)
    spec = hr_spec(example2_rules, framework=Framework.BAYESIAN, prior=prior)
    sigma = math.sqrt(2 / 35)
    for crit in spec.rules.go.criteria:
        cut = two_arm._hr_criterion_cutoff(spec, sigma, crit)
        prec = 1 / 4 + 1 / sigma ** 2
        post_mean = (0.0 / 4 + math.log(cut) / sigma ** 2) / prec
        tail = stats.norm.cdf(math.log(crit.threshold), post_mean,
                              math.sqrt(1 / prec))
        assert tail == pytest.approx(crit.confidence_pct / 100, abs=1e-10)


def test_hr_bayes_flat_prior_matches_freq_within_mc_error(example2_rules):
    flat = NormalParams(0.0, 1e6)
    spec_b = hr_spec(example2_rules, framework=Framework.BAYESIAN, prior=flat,
                     true_values=(0.6,), n_sims=20_000)
    spec_f = hr_spec(example2_rules, true_values=(0.6,))
    row_b = two_arm.survival_hr_oc(spec_b).rows[0]
    row_f = two_arm.survival_hr_oc(spec_f).rows[0]
    assert row_b.p_go == pytest.approx(row_f.p_go, abs=4 * row_b.mc_se)
    assert row_b.p_nogo == pytest.approx(row_f.p_nogo, abs=4 * row_b.mc_se)


# -------------------------------------------------------------- binary ------

def binary_spec(rules, framework=Framework.FREQUENTIST, arms=((40, 40),),
                control_rate=0.2, true_values=(0.15,), priors=None,
                n_sims=2000, workers=1):
    return TwoArmSpec(endpoint=TwoArmEndpoint.BINARY_DIFF,
                      framework=framework, rules=rules,
                      true_values=list(true_values),
                      arms=[tuple(a) for a in arms],
                      control_rate=control_rate, priors=priors,
                      n_sims=n_sims, workers=workers)


def test_binary_freq_cutoff_is_a_fixed_point():
    rules = make_rules([(0.1, 80)], [(0.15, 20)])
    spec = binary_spec(rules)
    cuts = two_arm.binary_diff_cutoff(spec)
    for cut, crit in ((cuts[0].go_boundary, (0.1, 0.80)),
                      (cuts[0].nogo_boundary, (0.15, 0.20))):
        t, conf = crit
        z = stats.norm.ppf(conf)
        pt = 0.2 + cut
        se = math.sqrt(pt * (1 - pt) / 40 + 0.2 * 0.8 / 40)
        assert cut == pytest.approx(t + z * se, abs=5 * spec.stop_tol)


def _oracle_binary_codes(nt, nc, pc0, rules):
    """Independent per-outcome classification using scipy only."""
    codes = np.zeros((nt + 1, nc + 1), dtype=int)
    for xt in range(nt + 1):
        for xc in range(nc + 1):
            pt, pcc = xt / nt, xc / nc
            se = math.sqrt(pt * (1 - pt) / nt + pcc * (1 - pcc) / nc)
            d = pt - pcc

            def ok(t, conf):
                return d - stats.norm.ppf(conf) * se >= t

            go = all(ok(c.threshold, c.confidence_pct / 100)
                     for c in rules.go.criteria)
            nogo = all(not ok(c.threshold, c.confidence_pct / 100)
                       for c in rules.nogo.criteria)
            codes[xt, xc] = 1 if go else (-1 if nogo else 0)
    return codes


def test_binary_freq_oc_exact_double_sum():
    rules = make_rules([(0.1, 80)], [(0.15, 20)])
    spec = binary_spec(rules, arms=((30, 30),), true_values=(0.0, 0.15, 0.25))
    oc = two_arm.binary_diff_oc(spec)
    codes = _oracle_binary_codes(30, 30, 0.2, rules)
    for row in oc.rows:
        pt_true = 0.2 + row.true_value
        joint = np.outer(stats.binom.pmf(np.arange(31), 30, pt_true),
                         stats.binom.pmf(np.arange(31), 30, 0.2))
        assert row.p_go == pytest.approx(joint[codes == 1].sum(), abs=1e-12)
        assert row.p_nogo == pytest.approx(joint[codes == -1].sum(), abs=1e-12)


def test_binary_bayes_tail_matches_numeric_integration():
    spec = binary_spec(make_rules([(0.1, 80)], [(0.15, 20)]),
                       framework=Framework.BAYESIAN,
                       priors={"treatment": BetaParams(0.5, 0.5),
                               "control": BetaParams(0.5, 0.5)})
    p = two_arm._binary_bayes_prob(spec, 40, 40, 14.0, 8.0, 0.1)
    at, bt = 14.5, 26.5
    ac, bc = 8.5, 32.5
    oracle, _ = integrate.quad(
        lambda v: stats.beta.pdf(v, ac, bc) * stats.beta.sf(v + 0.1, at, bt),
        0, 0.9, limit=200)
    assert p == pytest.approx(oracle, abs=1e-9)


def test_binary_bayes_cutoff_hits_confidence():
    rules = make_rules([(0.1, 80)], [(0.15, 20)])
    spec = binary_spec(rules, framework=Framework.BAYESIAN,
                       priors={"treatment": BetaParams(0.5, 0.5),
                               "control": BetaParams(0.5, 0.5)})
    crit = rules.go.criteria[0]
    cut = two_arm._binary_bayes_criterion_cutoff(spec, 40, 40, crit)
    xt = (0.2 + cut) * 40
    xc = 0.2 * 40
    p = two_arm._binary_bayes_prob(spec, 40, 40, xt, xc, 0.1)
    # bisection stops at stop_tol on d; translate to a probability tolerance
    assert p == pytest.approx(0.80, abs=0.01)


def test_binary_bayes_oc_deterministic_and_monotone():
    rules = make_rules([(0.1, 80)], [(0.15, 20)])
    priors = {"treatment": BetaParams(0.5, 0.5),
              "control": BetaParams(0.5, 0.5)}
    kw = dict(framework=Framework.BAYESIAN, priors=priors,
              true_values=(0.0, 0.25), n_sims=2048)
    r1 = two_arm.binary_diff_oc(binary_spec(rules, workers=1, **kw)).rows
    r4 = two_arm.binary_diff_oc(binary_spec(rules, workers=4, **kw)).rows
    assert [(r.p_go, r.p_nogo) for r in r1] == [(r.p_go, r.p_nogo) for r in r4]
    assert r1[0].p_go < r1[1].p_go


# -------------------------------------------------------------- normal ------

def normal_spec(rules, endpoint, framework=Framework.FREQUENTIST,
                arms=((30, 30),), sigmas=(2.0, 2.0), control_mean=0.0,
                true_values=(1.0,), priors=None, n_sims=2000, workers=1):
    return TwoArmSpec(endpoint=endpoint, framework=framework, rules=rules,
                      true_values=list(true_values),
                      arms=[tuple(a) for a in arms], sigmas=sigmas,
                      control_mean=control_mean, priors=priors,
                      n_sims=n_sims, workers=workers)


def test_normal_known_freq_cutoff_and_oc_closed_form():
    rules = make_rules([(0.5, 80)], [(1.0, 20)])
    spec = normal_spec(rules, TwoArmEndpoint.NORMAL_DIFF_KNOWN,
                       true_values=(0.3, 0.8, 1.3))
    cuts = two_arm.normal_diff_cutoff(spec)
    se = math.sqrt(4 / 30 + 4 / 30)
    assert cuts[0].go_boundary == pytest.approx(
        0.5 + stats.norm.ppf(0.80) * se, rel=1e-12)
    assert cuts[0].nogo_boundary == pytest.approx(
        1.0 + stats.norm.ppf(0.20) * se, rel=1e-12)
    oc = two_arm.normal_diff_oc(spec, cuts)
    for row in oc.rows:
        assert row.p_go == pytest.approx(
            stats.norm.sf(cuts[0].go_boundary, row.true_value, se), abs=1e-12)
        assert row.p_nogo == pytest.approx(
            stats.norm.cdf(cuts[0].nogo_boundary, row.true_value, se),
            abs=1e-12)


def test_normal_known_bayes_cutoff_hits_posterior_tail():
    rules = make_rules([(0.5, 80)], [(1.0, 20)])
    priors = {"treatment": NormalParams(0.0, 3.0),
              "control": NormalParams(0.0, 3.0)}
    spec = normal_spec(rules, TwoArmEndpoint.NORMAL_DIFF_KNOWN,
                       framework=Framework.BAYESIAN, priors=priors)
    crit = rules.go.criteria[0]
    cut = two_arm._normal_criterion_cutoff(spec, 30, 30, crit)
    # oracle: posterior of the difference at observed means (mu_c, mu_c + cut)
    prec = 1 / 9 + 30 / 4
    mt = (30 * (0.0 + cut) / 4) / prec
    mc = (30 * 0.0 / 4) / prec
    sd = math.sqrt(2 / prec)
    assert stats.norm.sf(0.5, mt - mc, sd) == pytest.approx(0.80, abs=1e-9)


def test_normal_unknown_freq_cutoff_uses_welch_df():
    rules = make_rules([(0.5, 80)], [(1.0, 20)])
    spec = normal_spec(rules, TwoArmEndpoint.NORMAL_DIFF_UNKNOWN,
                       arms=((25, 35),), sigmas=(2.0, 3.0))
    cut = two_arm.normal_diff_cutoff(spec)[0]
    vt, vc = 4 / 25, 9 / 35
    df = (vt + vc) ** 2 / (vt ** 2 / 24 + vc ** 2 / 34)
    se = math.sqrt(vt + vc)
    assert cut.go_boundary == pytest.approx(
        0.5 + stats.t.ppf(0.80, df) * se, rel=1e-10)


def test_normal_unknown_freq_oc_matches_welch_simulation_oracle():
    rules = make_rules([(0.5, 80)], [(1.0, 20)])
    spec = normal_spec(rules, TwoArmEndpoint.NORMAL_DIFF_UNKNOWN,
                       true_values=(1.2,), n_sims=20_000)
    row = two_arm.normal_diff_oc(spec).rows[0]
    # independent oracle simulation with scipy's RNG
    rng = np.random.default_rng(7)
    nt = nc = 30
    xt = rng.normal(1.2, 2 / math.sqrt(nt), 40_000)
    xc = rng.normal(0.0, 2 / math.sqrt(nc), 40_000)
    s2t = 4 * rng.chisquare(nt - 1, 40_000) / (nt - 1)
    s2c = 4 * rng.chisquare(nc - 1, 40_000) / (nc - 1)
    vt, vc = s2t / nt, s2c / nc
    se = np.sqrt(vt + vc)
    df = (vt + vc) ** 2 / (vt ** 2 / (nt - 1) + vc ** 2 / (nc - 1))
    d = xt - xc
    go = d - stats.t.ppf(0.80, df) * se >= 0.5
    nogo = ~(d - stats.t.ppf(0.20, df) * se >= 1.0)
    p_go_oracle = go.mean()
    p_nogo_oracle = (nogo & ~go).mean()
    tol = 4 * (row.mc_se + 0.5 / math.sqrt(40_000))
    assert row.p_go == pytest.approx(p_go_oracle, abs=tol)
    assert row.p_nogo == pytest.approx(p_nogo_oracle, abs=tol)


def test_normal_unknown_bayes_deterministic_across_workers():
    from gonogo.kernels import NormalGammaParams
    rules = make_rules([(0.5, 80)], [(1.0, 20)])
    priors = {"treatment": NormalGammaParams(0.0, 0.01, 1.0, 1.0),
              "control": NormalGammaParams(0.0, 0.01, 1.0, 1.0)}
    kw = dict(framework=Framework.BAYESIAN, priors=priors, true_values=(1.2,),
              n_sims=512)
    r1 = two_arm.normal_diff_oc(
        normal_spec(rules, TwoArmEndpoint.NORMAL_DIFF_UNKNOWN, workers=1,
                    **kw)).rows[0]
    r4 = two_arm.normal_diff_oc(
        normal_spec(rules, TwoArmEndpoint.NORMAL_DIFF_UNKNOWN, workers=4,
                    **kw)).rows[0]
    assert (r1.p_go, r1.p_nogo) == (r4.p_go, r4.p_nogo)


# ------------------------------------------------------------- validation ---

def test_validation_errors(example2_rules):
    with pytest.raises(ValidationError):
        two_arm.validate_spec(hr_spec(example2_rules, events=()))
    with pytest.raises(ValidationError):
        two_arm.validate_spec(hr_spec(example2_rules, true_values=(-0.5,)))
    with pytest.raises(ValidationError):
        two_arm.validate_spec(hr_spec(example2_rules,
                                      framework=Framework.BAYESIAN))
    rules = make_rules([(0.1, 80)], [(0.15, 20)])
    with pytest.raises(ValidationError):
        two_arm.validate_spec(binary_spec(rules, control_rate=None))
    with pytest.raises(ValidationError):
        two_arm.validate_spec(binary_spec(rules, control_rate=0.9,
                                          true_values=(0.3,)))
    with pytest.raises(ValidationError):
        spec = normal_spec(rules, TwoArmEndpoint.NORMAL_DIFF_KNOWN)
        spec.sigmas = None
        two_arm.validate_spec(spec)
