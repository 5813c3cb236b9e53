"""Multi-arm dose-finding via MCP-MOD.

The proof-of-concept (PoC) gate tests optimal model contrasts against an
equicoordinate multivariate-t critical value; when PoC holds, the best model
(largest contrast statistic) is fit by weighted least squares and the decision
rules are applied to the estimated effect at the estimated target dose.
Operating characteristics are simulated; frequentist only.
"""

import functools
import math
import warnings as _warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.optimize import curve_fit

from .. import kernels
from ..errors import DomainError, ValidationError
from ..rules import Direction, EvidenceProfile, RuleSet, evaluate, validate_rule_set
from . import _parallel

# substream reserved for the shared critical-value Monte Carlo; replicate
# chunks use small consecutive indices and never collide with it
_CRITICAL_STREAM = 2 ** 62


class ModelFamily(Enum):
    LINEAR = "linear"
    EMAX = "emax"
    EXPONENTIAL = "exponential"
    LOGISTIC = "logistic"
    QUADRATIC = "quadratic"


class MultiArmEndpoint(Enum):
    BINARY = "binary"
    NORMAL = "normal"


@dataclass
class DoseResponseModel:
    family: ModelFamily
    placebo_effect: float
    max_effect: float
    guesstimates: dict = field(default_factory=dict)

    def __post_init__(self):
        g = self.guesstimates
        if self.family is ModelFamily.EMAX:
            if g.get("ed50", 0.0) <= 0.0:
                raise ValidationError("EMAX requires guesstimate ed50 > 0")
        elif self.family is ModelFamily.EXPONENTIAL:
            if g.get("delta", 0.0) <= 0.0:
                raise ValidationError("EXPONENTIAL requires guesstimate delta > 0")
        elif self.family is ModelFamily.LOGISTIC:
            if g.get("ed50", 0.0) <= 0.0 or g.get("delta", 0.0) <= 0.0:
                raise ValidationError(
                    "LOGISTIC requires guesstimates ed50 > 0 and delta > 0")
        elif self.family is ModelFamily.QUADRATIC:
            if "delta" not in g:
                raise ValidationError("QUADRATIC requires guesstimate delta")

    def shape(self, doses: np.ndarray) -> np.ndarray:
        """Unscaled dose-response shape."""
        d = np.asarray(doses, dtype=float)
        g = self.guesstimates
        if self.family is ModelFamily.LINEAR:
            return d
        if self.family is ModelFamily.EMAX:
            return d / (g["ed50"] + d)
        if self.family is ModelFamily.EXPONENTIAL:
            return np.expm1(d / g["delta"])
        if self.family is ModelFamily.LOGISTIC:
            return 1.0 / (1.0 + np.exp((g["ed50"] - d) / g["delta"]))
        return d + g["delta"] * d ** 2

    def means(self, doses: np.ndarray) -> np.ndarray:
        """Arm means: placebo_effect at dose 0, placebo_effect + max_effect at
        the grid dose where the shape peaks."""
        d = np.asarray(doses, dtype=float)
        f = self.shape(d) - self.shape(np.array([0.0]))[0]
        denom = float(np.max(f))
        if abs(denom) < 1e-300 or self.max_effect == 0.0:
            return np.full(d.shape, self.placebo_effect)
        return self.placebo_effect + self.max_effect * f / denom


@dataclass
class MultiArmSpec:
    doses: list[float]
    n_per_arm: list[int]
    endpoint: MultiArmEndpoint
    candidate_models: list[DoseResponseModel]
    alpha: float
    target_effect: float
    rules: RuleSet
    true_model: DoseResponseModel
    sigma: float | None = None
    n_sims: int = 2000
    seed: int = 425
    workers: int = 1
    critical_draws: int = 200_000


@dataclass
class McpModResult:
    p_go: float
    p_nogo: float
    p_inconclusive: float
    mc_se: float
    poc_rate: float
    mean_target_dose: float | None
    fit_failures: int
    critical_value: float


def validate_spec(spec: MultiArmSpec) -> MultiArmSpec:
    if len(spec.doses) != len(spec.n_per_arm) or len(spec.doses) < 2:
        raise ValidationError("need matching doses and n_per_arm, at least 2 arms")
    if spec.doses[0] != 0.0 or any(
            b <= a for a, b in zip(spec.doses, spec.doses[1:])):
        raise ValidationError("doses must be strictly increasing from 0")
    if any(n < 1 for n in spec.n_per_arm):
        raise ValidationError("n_per_arm entries must be >= 1")
    if not 0.0 < spec.alpha < 1.0:
        raise ValidationError("alpha must lie in (0, 1)")
    if not spec.candidate_models:
        raise ValidationError("candidate_models must be nonempty")
    if spec.endpoint is MultiArmEndpoint.NORMAL and (
            spec.sigma is None or spec.sigma <= 0.0):
        raise ValidationError("normal endpoint requires sigma > 0")
    if spec.endpoint is MultiArmEndpoint.BINARY:
        mu = spec.true_model.means(np.array(spec.doses))
        if np.any(mu < 0.0) or np.any(mu > 1.0):
            raise ValidationError("true model response rates must lie in [0, 1]")
    validate_rule_set(spec.rules)
    return spec


# -------------------------------------------------------------- contrasts ---

def optimal_contrasts(spec: MultiArmSpec) -> np.ndarray:
    """One unit-norm zero-sum contrast row per candidate model."""
    validate_spec(spec)
    doses = np.array(spec.doses, dtype=float)
    n = np.array(spec.n_per_arm, dtype=float)
    s_inv = n  # S = diag(1/n) up to a common factor, which cancels
    rows = []
    for model in spec.candidate_models:
        mu = model.shape(doses)
        shift = float(s_inv @ mu) / float(s_inv.sum())
        c = s_inv * (mu - shift)
        norm = float(np.linalg.norm(c))
        if norm < 1e-12:
            raise DomainError(
                f"degenerate contrast for {model.family.value}: the model is "
                "flat over the dose design", code="SINGULAR")
        c = c / norm
        if float(c @ mu) < 0.0:
            c = -c
        rows.append(c)
    return np.array(rows)


def contrast_correlation(contrasts: np.ndarray, n_per_arm) -> np.ndarray:
    """Correlation of the contrast statistics under a common arm variance."""
    s = 1.0 / np.array(n_per_arm, dtype=float)
    cov = contrasts @ (contrasts * s).T
    d = np.sqrt(np.diag(cov))
    return cov / np.outer(d, d)


def critical_value(spec: MultiArmSpec) -> float:
    """Equicoordinate one-sided level-alpha critical value for the max
    contrast statistic."""
    contrasts = optimal_contrasts(spec)
    corr = contrast_correlation(contrasts, spec.n_per_arm)
    if spec.endpoint is MultiArmEndpoint.NORMAL:
        df = float(sum(spec.n_per_arm) - len(spec.n_per_arm))
    else:
        df = math.inf
    stream = kernels.rng_substream(spec.seed, _CRITICAL_STREAM)
    q, _ = kernels.equicoordinate_t_quantile(
        corr, df, 1.0 - spec.alpha, stream, n_draws=spec.critical_draws)
    return q


def poc_test(arm_means: np.ndarray, arm_variances: np.ndarray,
             n_per_arm, contrasts: np.ndarray, critical: float) -> dict:
    """Max-contrast test.  ``arm_variances`` is the per-arm response variance
    (a common pooled value for the normal endpoint, plug-in p(1-p) for
    binary)."""
    n = np.array(n_per_arm, dtype=float)
    se = np.sqrt((contrasts ** 2 * (arm_variances / n)).sum(axis=1))
    t = (contrasts @ arm_means) / se
    i = int(np.argmax(t))
    return {"significant": bool(t[i] >= critical), "max_t": float(t[i]),
            "critical": critical, "best_model_index": i}


# -------------------------------------------------------------- fitting -----

def _fit_family(family: ModelFamily, doses: np.ndarray, y: np.ndarray,
                w_sd: np.ndarray, guess: dict):
    """Weighted least squares; returns (predict_fn, params, covariance)."""
    dmax = float(doses[-1])
    if family is ModelFamily.LINEAR:
        def f(d, e0, slope):
            return e0 + slope * d
        p0 = [y[0], (y[-1] - y[0]) / dmax]
    elif family is ModelFamily.QUADRATIC:
        def f(d, e0, b1, b2):
            return e0 + b1 * d + b2 * d ** 2
        p0 = [y[0], (y[-1] - y[0]) / dmax, 0.0]
    elif family is ModelFamily.EMAX:
        def f(d, e0, emax, ed50):
            return e0 + emax * d / (np.abs(ed50) + d)
        p0 = [y[0], y[-1] - y[0], guess.get("ed50", dmax / 2.0)]
    elif family is ModelFamily.EXPONENTIAL:
        def f(d, e0, e1, delta):
            return e0 + e1 * np.expm1(d / np.abs(delta))
        p0 = [y[0], y[-1] - y[0], guess.get("delta", dmax / 2.0)]
    else:  # LOGISTIC
        def f(d, e0, emax, ed50, delta):
            return e0 + emax / (1.0 + np.exp((ed50 - d) / np.abs(delta)))
        p0 = [y[0], y[-1] - y[0], guess.get("ed50", dmax / 2.0),
              guess.get("delta", dmax / 10.0)]
    with _warnings.catch_warnings():
        _warnings.simplefilter("ignore")
        params, cov = curve_fit(f, doses, y, p0=p0, sigma=w_sd,
                                absolute_sigma=True, maxfev=2000)
    return f, params, cov


def fit_and_target(doses: np.ndarray, arm_means: np.ndarray,
                   arm_sds: np.ndarray, model: DoseResponseModel,
                   target_effect: float) -> dict | None:
    """Fit the selected family and locate the smallest dose achieving the
    target effect over placebo.  Returns None on fit failure; the target_dose
    key is None when the effect is unattainable within the dose range."""
    try:
        f, params, cov = _fit_family(model.family, doses, arm_means, arm_sds,
                                     model.guesstimates)
        if not np.all(np.isfinite(params)) or not np.all(np.isfinite(cov)):
            return None
    except (RuntimeError, ValueError, TypeError):
        return None
    grid = np.linspace(0.0, float(doses[-1]), 201)
    eff = f(grid, *params) - f(np.array([0.0]), *params)[0]
    hits = np.nonzero(eff >= target_effect)[0]
    if hits.size == 0:
        return {"params": params, "cov": cov, "predict": f,
                "target_dose": None}
    i = int(hits[0])
    lo = grid[i - 1] if i > 0 else 0.0
    hi = grid[i]
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        e = f(np.array([mid]), *params)[0] - f(np.array([0.0]), *params)[0]
        if e >= target_effect:
            hi = mid
        else:
            lo = mid
    return {"params": params, "cov": cov, "predict": f,
            "target_dose": 0.5 * (lo + hi)}


def _effect_and_se(fit: dict, dose: float) -> tuple[float, float] | None:
    """Fitted effect over placebo at ``dose`` and its delta-method SE."""
    f, params, cov = fit["predict"], fit["params"], fit["cov"]
    base = np.array([dose, 0.0])
    est = f(base, *params)
    effect = float(est[0] - est[1])
    grad = np.zeros(len(params))
    for j in range(len(params)):
        h = 1e-6 * max(1.0, abs(params[j]))
        bumped = np.array(params, dtype=float)
        bumped[j] += h
        e = f(base, *bumped)
        grad[j] = ((e[0] - e[1]) - effect) / h
    var = float(grad @ cov @ grad)
    if not math.isfinite(var) or var < 0.0:
        return None
    return effect, math.sqrt(var)


# -------------------------------------------------------------- simulation --

def _rule_decision(rules: RuleSet, est: float, se: float):
    """Frequentist rule evaluation on a normal effect estimate."""
    ge = rules.direction is Direction.GREATER_OR_EQUAL
    probs = {}
    for t in set(rules.go.thresholds + rules.nogo.thresholds):
        tail = 1.0 - kernels.normal_cdf((t - est) / se) if se > 0.0 else float(est >= t)
        probs[t] = min(max(tail if ge else 1.0 - tail, 0.0), 1.0)
    return evaluate(rules, EvidenceProfile(probs))


def _simulate_chunk(spec: MultiArmSpec, contrasts: np.ndarray, critical: float,
                    chunk_idx: int, size: int):
    gen = kernels.rng_substream(spec.seed, chunk_idx).generator()
    doses = np.array(spec.doses, dtype=float)
    n = np.array(spec.n_per_arm, dtype=float)
    mu = spec.true_model.means(doses)
    df_pool = float(n.sum() - len(n))
    go = nogo = poc = fit_fail = 0
    dose_sum = 0.0
    for _ in range(size):
        if spec.endpoint is MultiArmEndpoint.NORMAL:
            ybar = gen.normal(mu, spec.sigma / np.sqrt(n))
            s2 = spec.sigma ** 2 * gen.chisquare(df_pool) / df_pool
            arm_var = np.full(len(n), s2)
        else:
            x = gen.binomial(spec.n_per_arm, mu)
            ybar = x / n
            arm_var = np.clip(ybar * (1.0 - ybar), 1e-12, None)
        res = poc_test(ybar, arm_var, spec.n_per_arm, contrasts, critical)
        if not res["significant"]:
            nogo += 1
            continue
        poc += 1
        model = spec.candidate_models[res["best_model_index"]]
        fit = fit_and_target(doses, ybar, np.sqrt(arm_var / n), model,
                             spec.target_effect)
        if fit is None:
            fit_fail += 1
            continue
        if fit["target_dose"] is None:
            continue
        eff = _effect_and_se(fit, fit["target_dose"])
        if eff is None:
            fit_fail += 1
            continue
        dec = _rule_decision(spec.rules, eff[0], eff[1])
        if dec.value.value == "go":
            go += 1
            dose_sum += fit["target_dose"]
        elif dec.value.value == "nogo":
            nogo += 1
    return go, nogo, poc, fit_fail, dose_sum


def simulate_oc(spec: MultiArmSpec) -> McpModResult:
    validate_spec(spec)
    contrasts = optimal_contrasts(spec)
    crit = critical_value(spec)
    fn = functools.partial(_simulate_chunk, spec, contrasts, crit)
    parts = _parallel.run_chunks(fn, spec.n_sims, spec.workers)
    go = sum(p[0] for p in parts)
    nogo = sum(p[1] for p in parts)
    poc = sum(p[2] for p in parts)
    fit_fail = sum(p[3] for p in parts)
    dose_sum = sum(p[4] for p in parts)
    total = spec.n_sims
    p_go, p_nogo = go / total, nogo / total
    p_inc = 1.0 - p_go - p_nogo
    se = max(math.sqrt(p * (1.0 - p) / total) for p in (p_go, p_nogo, p_inc))
    return McpModResult(
        p_go=p_go, p_nogo=p_nogo, p_inconclusive=p_inc, mc_se=se,
        poc_rate=poc / total,
        mean_target_dose=(dose_sum / go) if go else None,
        fit_failures=fit_fail, critical_value=crit)
