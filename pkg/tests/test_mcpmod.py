"""Multi-arm dose-finding: contrasts, critical values, fitting, and
simulated operating characteristics."""

import numpy as np
import pytest
from scipy import stats

from gonogo.designs import mcpmod
from gonogo.designs.mcpmod import (
    DoseResponseModel,
    ModelFamily,
    MultiArmEndpoint,
    MultiArmSpec,
)
from gonogo.errors import DomainError, ValidationError
from tests.conftest import make_rules

DOSES = [0.0, 0.5, 1.0, 2.0]


def models():
    return [
        DoseResponseModel(ModelFamily.LINEAR, 0.2, 0.3),
        DoseResponseModel(ModelFamily.EMAX, 0.2, 0.3, {"ed50": 0.5}),
        DoseResponseModel(ModelFamily.EXPONENTIAL, 0.2, 0.3, {"delta": 1.0}),
    ]


def make_spec(true_model=None, n_per_arm=(20, 20, 20, 20), alpha=0.1,
              endpoint=MultiArmEndpoint.NORMAL, sigma=0.35, n_sims=2000,
              workers=1, rules=None, target_effect=0.15, **kw):
    return MultiArmSpec(
        doses=list(DOSES), n_per_arm=list(n_per_arm), endpoint=endpoint,
        candidate_models=models(), alpha=alpha, target_effect=target_effect,
        rules=rules or make_rules([(0.1, 60)], [(0.1, 20)]),
        true_model=true_model or models()[1], sigma=sigma, n_sims=n_sims,
        workers=workers, **kw)


# ----------------------------------------------------------- dose models ----

def test_model_means_anchor_placebo_and_peak():
    m = DoseResponseModel(ModelFamily.EMAX, 0.2, 0.3, {"ed50": 0.5})
    mu = m.means(np.array(DOSES))
    assert mu[0] == pytest.approx(0.2)
    assert mu.max() == pytest.approx(0.5)       # placebo + max effect
    assert np.all(np.diff(mu) > 0)


def test_flat_model_means_are_constant():
    m = DoseResponseModel(ModelFamily.LINEAR, 0.2, 0.0)
    assert np.allclose(m.means(np.array(DOSES)), 0.2)


def test_model_guesstimate_validation():
    with pytest.raises(ValidationError):
        DoseResponseModel(ModelFamily.EMAX, 0.0, 0.3)
    with pytest.raises(ValidationError):
        DoseResponseModel(ModelFamily.LOGISTIC, 0.0, 0.3, {"ed50": 1.0})
    with pytest.raises(ValidationError):
        DoseResponseModel(ModelFamily.QUADRATIC, 0.0, 0.3)


# ------------------------------------------------------------- contrasts ----

def _oracle_contrast(mu, n):
    """Independent linear-algebra route for the optimal contrast."""
    s = np.diag(1.0 / np.asarray(n, float))
    s_inv = np.linalg.inv(s)
    one = np.ones(len(mu))
    shift = (mu @ s_inv @ one) / (one @ s_inv @ one)
    c = s_inv @ (mu - shift * one)
    c = c / np.linalg.norm(c)
    return c if c @ mu >= 0 else -c


def test_optimal_contrasts_match_linear_algebra_oracle():
    spec = make_spec(n_per_arm=(25, 15, 20, 30))
    cons = mcpmod.optimal_contrasts(spec)
    for model, c in zip(spec.candidate_models, cons):
        mu = model.shape(np.array(DOSES))
        np.testing.assert_allclose(c, _oracle_contrast(mu, spec.n_per_arm),
                                   atol=1e-12)
        assert abs(c.sum()) < 1e-12
        assert np.linalg.norm(c) == pytest.approx(1.0, abs=1e-12)


def test_flat_candidate_model_rejected_as_singular():
    spec = make_spec()
    spec.candidate_models = [DoseResponseModel(ModelFamily.LINEAR, 0.2, 0.3)]
    # force a flat shape by collapsing the dose range to one point repeated
    flat = DoseResponseModel(ModelFamily.QUADRATIC, 0.2, 0.3, {"delta": 0.0})
    flat.shape = lambda d: np.zeros(np.asarray(d).shape)  # type: ignore
    spec.candidate_models = [flat]
    with pytest.raises(DomainError) as e:
        mcpmod.optimal_contrasts(spec)
    assert e.value.code == "SINGULAR"


def test_contrast_correlation_matches_direct_formula():
    spec = make_spec(n_per_arm=(25, 15, 20, 30))
    cons = mcpmod.optimal_contrasts(spec)
    corr = mcpmod.contrast_correlation(cons, spec.n_per_arm)
    s = np.diag(1.0 / np.array(spec.n_per_arm, float))
    cov = cons @ s @ cons.T
    d = np.sqrt(np.diag(cov))
    np.testing.assert_allclose(corr, cov / np.outer(d, d), atol=1e-12)
    np.testing.assert_allclose(np.diag(corr), 1.0, atol=1e-12)


# --------------------------------------------------------- critical value ---

def test_critical_value_single_model_reduces_to_t():
    spec = make_spec()
    spec.candidate_models = [models()[0]]
    q = mcpmod.critical_value(spec)
    df = sum(spec.n_per_arm) - 4
    assert q == pytest.approx(stats.t.ppf(0.90, df), abs=0.02)


def test_critical_value_binary_single_model_reduces_to_normal():
    true = DoseResponseModel(ModelFamily.EMAX, 0.2, 0.2, {"ed50": 0.5})
    spec = make_spec(endpoint=MultiArmEndpoint.BINARY, sigma=None,
                     true_model=true)
    spec.candidate_models = [models()[0]]
    q = mcpmod.critical_value(spec)
    assert q == pytest.approx(stats.norm.ppf(0.90), abs=0.02)


def test_critical_value_multiple_models_exceeds_univariate():
    spec = make_spec()
    q_multi = mcpmod.critical_value(spec)
    df = sum(spec.n_per_arm) - 4
    assert q_multi > stats.t.ppf(0.90, df)


# ---------------------------------------------------------------- PoC -------

def test_poc_test_matches_hand_computation():
    spec = make_spec()
    cons = mcpmod.optimal_contrasts(spec)
    mu = spec.true_model.means(np.array(DOSES))
    var = np.full(4, 0.35 ** 2)
    res = mcpmod.poc_test(mu, var, spec.n_per_arm, cons, critical=2.0)
    n = np.array(spec.n_per_arm, float)
    t_oracle = (cons @ mu) / np.sqrt((cons ** 2 * (var / n)).sum(axis=1))
    assert res["max_t"] == pytest.approx(t_oracle.max(), rel=1e-12)
    assert res["best_model_index"] == int(np.argmax(t_oracle))
    assert res["significant"] == (t_oracle.max() >= 2.0)


# -------------------------------------------------------------- fitting -----

def test_fit_recovers_exact_emax_target_dose():
    doses = np.array(DOSES)
    true = DoseResponseModel(ModelFamily.EMAX, 0.2, 0.3, {"ed50": 0.5})
    # exact effect curve: 0.3 * d / (0.5 + d) after rescaling to peak at dmax
    y = true.means(doses)
    fit = mcpmod.fit_and_target(doses, y, np.full(4, 1e-3), true, 0.15)
    assert fit is not None and fit["target_dose"] is not None
    # analytic inversion of the rescaled curve at effect 0.15
    scale = 0.3 / (2.0 / 2.5)
    # solve scale * d/(0.5+d) = 0.15
    d_star = 0.15 * 0.5 / (scale - 0.15)
    assert fit["target_dose"] == pytest.approx(d_star, abs=2e-3)


def test_fit_reports_unattainable_target():
    doses = np.array(DOSES)
    true = DoseResponseModel(ModelFamily.LINEAR, 0.2, 0.05)
    y = true.means(doses)
    fit = mcpmod.fit_and_target(doses, y, np.full(4, 1e-3), true, 0.5)
    assert fit is not None
    assert fit["target_dose"] is None


def test_effect_and_se_delta_method_on_linear_fit():
    doses = np.array(DOSES)
    y = 0.2 + 0.1 * doses
    model = DoseResponseModel(ModelFamily.LINEAR, 0.2, 0.2)
    fit = mcpmod.fit_and_target(doses, y, np.full(4, 0.05), model, 0.15)
    eff = mcpmod._effect_and_se(fit, 1.5)
    assert eff is not None
    assert eff[0] == pytest.approx(0.15, abs=1e-6)
    # linear model: effect(d) = slope * d, var = d^2 var(slope)
    se_oracle = 1.5 * np.sqrt(fit["cov"][1, 1])
    assert eff[1] == pytest.approx(se_oracle, rel=1e-3)


# ------------------------------------------------------------- simulation ---

def test_null_poc_rate_calibrated_to_alpha():
    flat = DoseResponseModel(ModelFamily.LINEAR, 0.2, 0.0)
    spec = make_spec(true_model=flat, n_sims=2000)
    res = mcpmod.simulate_oc(spec)
    se = np.sqrt(0.1 * 0.9 / 2000)
    assert res.poc_rate == pytest.approx(0.1, abs=4 * se)
    assert res.p_go <= res.poc_rate


def test_strong_effect_beats_null_and_dose_estimate_is_sane():
    strong = DoseResponseModel(ModelFamily.EMAX, 0.2, 0.45, {"ed50": 0.5})
    spec = make_spec(true_model=strong, n_sims=1000)
    res_strong = mcpmod.simulate_oc(spec)
    flat = DoseResponseModel(ModelFamily.LINEAR, 0.2, 0.0)
    res_null = mcpmod.simulate_oc(make_spec(true_model=flat, n_sims=1000))
    assert res_strong.p_go > res_null.p_go
    assert res_strong.poc_rate > 0.9
    if res_strong.mean_target_dose is not None:
        assert 0.0 <= res_strong.mean_target_dose <= 2.0
    assert res_strong.p_go + res_strong.p_nogo + res_strong.p_inconclusive \
        == pytest.approx(1.0, abs=1e-12)


def test_simulation_deterministic_across_workers():
    spec1 = make_spec(n_sims=512, workers=1)
    spec4 = make_spec(n_sims=512, workers=4)
    r1 = mcpmod.simulate_oc(spec1)
    r4 = mcpmod.simulate_oc(spec4)
    assert (r1.p_go, r1.p_nogo, r1.poc_rate, r1.fit_failures) == \
        (r4.p_go, r4.p_nogo, r4.poc_rate, r4.fit_failures)
    assert r1.critical_value == r4.critical_value


def test_binary_endpoint_runs_and_is_calibrated_under_null():
    flat = DoseResponseModel(ModelFamily.LINEAR, 0.3, 0.0)
    spec = make_spec(true_model=flat, endpoint=MultiArmEndpoint.BINARY,
                     sigma=None, n_sims=2000,
                     n_per_arm=(40, 40, 40, 40))
    res = mcpmod.simulate_oc(spec)
    se = np.sqrt(0.1 * 0.9 / 2000)
    # plug-in variance makes the binary test approximate; allow a wider band
    assert res.poc_rate == pytest.approx(0.1, abs=6 * se + 0.02)


# ------------------------------------------------------------- validation ---

def test_validation_errors():
    with pytest.raises(ValidationError):
        mcpmod.validate_spec(make_spec(n_per_arm=(20, 20)))
    spec = make_spec()
    spec.doses = [0.5, 1.0, 2.0, 3.0]
    with pytest.raises(ValidationError):
        mcpmod.validate_spec(spec)
    spec = make_spec()
    spec.alpha = 1.5
    with pytest.raises(ValidationError):
        mcpmod.validate_spec(spec)
    spec = make_spec()
    spec.sigma = None
    with pytest.raises(ValidationError):
        mcpmod.validate_spec(spec)
    bad = DoseResponseModel(ModelFamily.LINEAR, 0.9, 0.4)
    with pytest.raises(ValidationError):
        mcpmod.validate_spec(make_spec(endpoint=MultiArmEndpoint.BINARY,
                                       sigma=None, true_model=bad))
