"""Two-arm comparisons: difference in proportions, difference in means,
and hazard ratio.

Boundary searches on the comparison scale use the declared stop tolerance;
frequentist binary cutoffs resolve the SE-depends-on-data circularity by
fixed-point iteration, and Bayesian posterior probabilities of a difference
are computed by deterministic Gauss-Legendre quadrature.
"""

import functools
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .. import kernels
from ..errors import DomainError, NonConvergenceError, ValidationError
from ..rules import (
    Criterion,
    Direction,
    EvidenceProfile,
    RuleSet,
    evaluate,
    validate_rule_set,
)
from . import _parallel
from .common import (
    DECISION_GO,
    DECISION_NOGO,
    CutoffResult,
    Framework,
    OCRow,
    OperatingCharacteristics,
    continuous_overlap,
    continuous_region_probs,
    decision_code,
    fold_cutoffs,
    fold_flags,
    mc_probs,
)


class TwoArmEndpoint(Enum):
    BINARY_DIFF = "binary_diff"
    NORMAL_DIFF_KNOWN = "normal_diff_known"
    NORMAL_DIFF_UNKNOWN = "normal_diff_unknown"
    SURVIVAL_HR = "survival_hr"


@dataclass
class TwoArmSpec:
    endpoint: TwoArmEndpoint
    framework: Framework
    rules: RuleSet
    true_values: list[float]                 # p_t - p_c, mu_t - mu_c, or HR
    arms: list[tuple[int, int]] | None = None      # (n_t, n_c) per scenario size
    events: list[tuple[int, int]] | None = None    # (m_t, m_c), survival only
    sigmas: tuple[float, float] | None = None      # per-arm sampling sd (normal)
    priors: dict | None = None               # {"treatment": ..., "control": ...}
    hr_prior: kernels.NormalParams | None = None   # prior on log HR
    control_rate: float | None = None         # assumed control response rate
    control_mean: float | None = None          # assumed control mean
    stop_tol: float = 1e-4
    seed: int = 425
    n_sims: int = 2000
    workers: int = 1


def validate_spec(spec: TwoArmSpec) -> TwoArmSpec:
    if not spec.true_values:
        raise ValidationError("true_values must be nonempty")
    if spec.stop_tol <= 0.0:
        raise ValidationError("stop_tol must be > 0")
    hazard = spec.endpoint is TwoArmEndpoint.SURVIVAL_HR
    validate_rule_set(spec.rules, hazard_scale=hazard)
    if hazard:
        if not spec.events or any(m < 1 for pair in spec.events for m in pair):
            raise ValidationError("survival requires per-arm event counts >= 1")
        if any(v <= 0.0 for v in spec.true_values):
            raise ValidationError("true hazard ratios must be > 0")
        if spec.framework is Framework.BAYESIAN and spec.hr_prior is None:
            raise ValidationError("Bayesian hazard-ratio analysis requires a "
                                  "normal prior on log HR")
    else:
        if not spec.arms or any(n < 1 for pair in spec.arms for n in pair):
            raise ValidationError("per-arm sample sizes must be >= 1")
    if spec.endpoint is TwoArmEndpoint.BINARY_DIFF:
        if spec.control_rate is None or not 0.0 <= spec.control_rate <= 1.0:
            raise ValidationError("binary two-arm designs require an assumed "
                                  "control_rate in [0, 1]")
        for d in spec.true_values:
            if not 0.0 <= spec.control_rate + d <= 1.0:
                raise ValidationError(
                    f"true difference {d} pushes the treatment rate outside "
                    "[0, 1] at the assumed control rate")
    if spec.endpoint in (TwoArmEndpoint.NORMAL_DIFF_KNOWN,
                         TwoArmEndpoint.NORMAL_DIFF_UNKNOWN):
        if spec.sigmas is None or any(s <= 0.0 for s in spec.sigmas):
            raise ValidationError("normal two-arm designs require per-arm "
                                  "sigmas > 0")
        if spec.control_mean is None:
            raise ValidationError("normal two-arm designs require an assumed "
                                  "control_mean")
    if spec.framework is Framework.BAYESIAN and not hazard and spec.priors is None:
        raise ValidationError("Bayesian analysis requires per-arm priors")
    return spec


# ------------------------------------------------------------ quadrature ----

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(256)


def _beta_diff_tail(post_t: kernels.BetaParams, post_c: kernels.BetaParams,
                    threshold: float) -> float:
    """Pr(p_t - p_c >= threshold) under independent Beta posteriors."""
    v = 0.5 * (_GL_NODES + 1.0)          # control-rate grid on (0, 1)
    w = 0.5 * _GL_WEIGHTS
    fc = kernels.vec(kernels.beta_pdf, v, post_c.a, post_c.b)
    u = np.clip(v + threshold, 0.0, 1.0)
    ft = kernels.vec(kernels.beta_cdf, u, post_t.a, post_t.b)
    return float(np.sum(w * fc * (1.0 - ft)))


def _t_diff_tail(marg_t, marg_c, threshold: float) -> float:
    """Pr(mu_t - mu_c >= threshold) for independent Student-t marginals."""
    half = 40.0 * marg_c.scale
    v = marg_c.loc + half * _GL_NODES
    w = half * _GL_WEIGHTS
    fc = kernels.vec(kernels.t_pdf, (v - marg_c.loc) / marg_c.scale,
                     marg_c.df) / marg_c.scale
    st = 1.0 - kernels.vec(kernels.t_cdf,
                           (v + threshold - marg_t.loc) / marg_t.scale,
                           marg_t.df)
    return float(np.sum(w * fc * st))


def _evidence(spec: TwoArmSpec, tail_fn) -> EvidenceProfile:
    """Evidence probabilities for every rule threshold, direction-aware.

    ``tail_fn(t)`` must return the 'greater-or-equal' tail probability; the
    LESS direction takes its complement.
    """
    probs = {}
    ge = spec.rules.direction is Direction.GREATER_OR_EQUAL
    for t in set(spec.rules.go.thresholds + spec.rules.nogo.thresholds):
        p = tail_fn(t)
        probs[t] = min(max(p if ge else 1.0 - p, 0.0), 1.0)
    return EvidenceProfile(probs)


# -------------------------------------------------------------- binary ------

def _binary_se(pt: np.ndarray, pc: np.ndarray, nt: int, nc: int) -> np.ndarray:
    return np.sqrt(pt * (1.0 - pt) / nt + pc * (1.0 - pc) / nc)


def _binary_freq_criterion_cutoff(spec: TwoArmSpec, nt: int, nc: int,
                                  crit: Criterion) -> float:
    """Fixed-point boundary on the observed difference for one criterion."""
    z = kernels.normal_quantile(crit.confidence_pct / 100.0)
    pc = spec.control_rate
    ge = spec.rules.direction is Direction.GREATER_OR_EQUAL
    d = crit.threshold
    for _ in range(500):
        pt = min(max(pc + d, 0.0), 1.0)
        se = float(_binary_se(np.array(pt), np.array(pc), nt, nc))
        d_new = crit.threshold + z * se if ge else crit.threshold - z * se
        if abs(d_new - d) < spec.stop_tol:
            return d_new
        d = d_new
    raise NonConvergenceError(
        "binary cutoff fixed point did not converge", last_iterate=d)


def binary_diff_cutoff(spec: TwoArmSpec) -> list[CutoffResult]:
    validate_spec(spec)
    out = []
    for nt, nc in spec.arms:
        if spec.framework is Framework.FREQUENTIST:
            solver = functools.partial(_binary_freq_criterion_cutoff, spec,
                                       nt, nc)
        else:
            solver = functools.partial(_binary_bayes_criterion_cutoff, spec,
                                       nt, nc)
        go_cuts = [solver(c) for c in spec.rules.go.criteria]
        nogo_cuts = [solver(c) for c in spec.rules.nogo.criteria]
        warns = []
        go_b = (None if any(c is None for c in go_cuts) else
                fold_cutoffs(go_cuts, spec.rules.go.combinator,
                             spec.rules.direction, nogo=False))
        nogo_b = (None if any(c is None for c in nogo_cuts) else
                  fold_cutoffs(nogo_cuts, spec.rules.nogo.combinator,
                               spec.rules.direction, nogo=True))
        if go_b is None:
            warns.append("NO_GO_REGION")
        if nogo_b is None:
            warns.append("NO_NOGO_REGION")
        out.append(CutoffResult(
            n=nt + nc, go_boundary=go_b, nogo_boundary=nogo_b,
            overlap=continuous_overlap(go_b, nogo_b, spec.rules.direction),
            boundary_statistic="DIFFERENCE", warnings=warns))
    return out


def _binary_priors(spec: TwoArmSpec) -> tuple[kernels.BetaParams, kernels.BetaParams]:
    pt, pc = spec.priors["treatment"], spec.priors["control"]
    if not (isinstance(pt, kernels.BetaParams)
            and isinstance(pc, kernels.BetaParams)):
        raise ValidationError("binary Bayesian analysis requires Beta priors")
    return pt, pc


def _binary_bayes_prob(spec: TwoArmSpec, nt: int, nc: int, xt: float,
                       xc: float, threshold: float) -> float:
    prior_t, prior_c = _binary_priors(spec)
    post_t = kernels.BetaParams(prior_t.a + xt, prior_t.b + nt - xt)
    post_c = kernels.BetaParams(prior_c.a + xc, prior_c.b + nc - xc)
    return _beta_diff_tail(post_t, post_c, threshold)


def _binary_bayes_criterion_cutoff(spec: TwoArmSpec, nt: int, nc: int,
                                   crit: Criterion) -> float | None:
    """Bisection on the observed difference; the control arm is pinned at the
    assumed control rate (fractional pseudo-counts are fine for the Beta
    posterior)."""
    conf = crit.confidence_pct / 100.0
    ge = spec.rules.direction is Direction.GREATER_OR_EQUAL
    xc = spec.control_rate * nc

    def excess(d: float) -> float:
        xt = min(max((spec.control_rate + d), 0.0), 1.0) * nt
        p = _binary_bayes_prob(spec, nt, nc, xt, xc, crit.threshold)
        return (p if ge else 1.0 - p) - conf

    lo, hi = -1.0, 1.0
    f_lo, f_hi = excess(lo), excess(hi)
    if f_lo == f_hi or (f_lo > 0.0) == (f_hi > 0.0):
        return None
    rising = f_hi > f_lo
    while hi - lo > spec.stop_tol:
        mid = 0.5 * (lo + hi)
        if (excess(mid) < 0.0) == rising:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def binary_diff_oc(spec: TwoArmSpec,
                   cutoffs: list[CutoffResult] | None = None
                   ) -> OperatingCharacteristics:
    validate_spec(spec)
    rows = []
    for nt, nc in spec.arms:
        if spec.framework is Framework.FREQUENTIST:
            codes = _binary_freq_codes(spec, nt, nc)
            go_mask = codes == DECISION_GO
            nogo_mask = codes == DECISION_NOGO
            for d in spec.true_values:
                pt_true = spec.control_rate + d
                joint = np.outer(kernels.binom_pmf_vector(nt, pt_true),
                                 kernels.binom_pmf_vector(nc, spec.control_rate))
                p_go = float(joint[go_mask].sum())
                p_nogo = float(joint[nogo_mask].sum())
                rows.append(OCRow(n=nt + nc, true_value=d, p_go=p_go,
                                  p_nogo=p_nogo,
                                  p_inconclusive=1.0 - p_go - p_nogo))
        else:
            for d in spec.true_values:
                fn = functools.partial(_binary_bayes_chunk, spec, nt, nc, d)
                parts = _parallel.run_chunks(fn, spec.n_sims, spec.workers)
                go = sum(p[0] for p in parts)
                nogo = sum(p[1] for p in parts)
                p_go, p_nogo, p_inc, se = mc_probs(go, nogo, spec.n_sims)
                rows.append(OCRow(n=nt + nc, true_value=d, p_go=p_go,
                                  p_nogo=p_nogo, p_inconclusive=p_inc,
                                  mc_se=se))
    return OperatingCharacteristics(rows)


def _binary_freq_codes(spec: TwoArmSpec, nt: int, nc: int) -> np.ndarray:
    """Decision code for every joint outcome (x_t, x_c)."""
    pt = (np.arange(nt + 1, dtype=float) / nt)[:, None]
    pc = (np.arange(nc + 1, dtype=float) / nc)[None, :]
    d = pt - pc
    se = _binary_se(pt, pc, nt, nc)
    ge = spec.rules.direction is Direction.GREATER_OR_EQUAL

    def cleared(crit: Criterion) -> np.ndarray:
        z = kernels.normal_quantile(crit.confidence_pct / 100.0)
        if ge:
            return d - z * se >= crit.threshold
        return d + z * se <= crit.threshold

    go = fold_flags(spec.rules.go, [cleared(c) for c in spec.rules.go.criteria])
    nogo = fold_flags(spec.rules.nogo,
                      [~cleared(c) for c in spec.rules.nogo.criteria])
    return decision_code(go, nogo, spec.rules.dominated)


def _binary_bayes_chunk(spec: TwoArmSpec, nt: int, nc: int, d: float,
                        chunk_idx: int, size: int) -> tuple[int, int]:
    gen = kernels.rng_substream(spec.seed, chunk_idx).generator()
    pt_true = spec.control_rate + d
    xt = gen.binomial(nt, pt_true, size=size)
    xc = gen.binomial(nc, spec.control_rate, size=size)
    go, nogo = 0, 0
    for i in range(size):
        ev = _evidence(spec, lambda t: _binary_bayes_prob(
            spec, nt, nc, float(xt[i]), float(xc[i]), t))
        dec = evaluate(spec.rules, ev)
        if dec.value.value == "go":
            go += 1
        elif dec.value.value == "nogo":
            nogo += 1
    return go, nogo


# -------------------------------------------------------------- normal ------

def _normal_se(spec: TwoArmSpec, nt: int, nc: int) -> float:
    st, sc = spec.sigmas
    return math.sqrt(st ** 2 / nt + sc ** 2 / nc)


def _normal_priors(spec: TwoArmSpec):
    return spec.priors["treatment"], spec.priors["control"]


def _normal_known_posterior_diff(spec: TwoArmSpec, nt: int, nc: int,
                                 xbar_t: float, xbar_c: float
                                 ) -> tuple[float, float]:
    """Posterior (mean, sd) of mu_t - mu_c with known sampling sds."""
    prior_t, prior_c = _normal_priors(spec)
    st, sc = spec.sigmas
    post_t = kernels.posterior_normal_known_var(xbar_t, nt, st, prior_t)
    post_c = kernels.posterior_normal_known_var(xbar_c, nc, sc, prior_c)
    return (post_t.mean - post_c.mean,
            math.sqrt(post_t.sd ** 2 + post_c.sd ** 2))


def _normal_criterion_cutoff(spec: TwoArmSpec, nt: int, nc: int,
                             crit: Criterion) -> float | None:
    conf = crit.confidence_pct / 100.0
    z = kernels.normal_quantile(conf)
    ge = spec.rules.direction is Direction.GREATER_OR_EQUAL
    if spec.framework is Framework.FREQUENTIST:
        if spec.endpoint is TwoArmEndpoint.NORMAL_DIFF_KNOWN:
            se = _normal_se(spec, nt, nc)
            return crit.threshold + z * se if ge else crit.threshold - z * se
        # unknown variance: Welch-style plug-in t reference at the planning sds
        df = _welch_df(spec, nt, nc)
        tq = kernels.t_quantile(conf, df)
        se = _normal_se(spec, nt, nc)
        return crit.threshold + tq * se if ge else crit.threshold - tq * se
    if spec.endpoint is TwoArmEndpoint.NORMAL_DIFF_KNOWN:
        # invert the normal posterior of the difference analytically
        prior_t, prior_c = _normal_priors(spec)
        st, sc = spec.sigmas
        prec_t = 1.0 / prior_t.sd ** 2 + nt / st ** 2
        prec_c = 1.0 / prior_c.sd ** 2 + nc / sc ** 2
        sd_diff = math.sqrt(1.0 / prec_t + 1.0 / prec_c)
        target = (crit.threshold + z * sd_diff if ge
                  else crit.threshold - z * sd_diff)
        # posterior means are affine in the observed means
        b_t = (nt / st ** 2) / prec_t
        a_t = (prior_t.mean / prior_t.sd ** 2) / prec_t
        b_c = (nc / sc ** 2) / prec_c
        a_c = (prior_c.mean / prior_c.sd ** 2) / prec_c
        xc = spec.control_mean
        # solve a_t + b_t (xc + d) - (a_c + b_c xc) = target for d
        return (target - a_t + a_c + (b_c - b_t) * xc) / b_t
    # unknown variance: bisection on d against the t-difference tail
    prior_t, prior_c = _normal_priors(spec)
    st, sc = spec.sigmas
    ge_tail = ge

    def excess(d: float) -> float:
        _, marg_t = kernels.posterior_normal_gamma(
            spec.control_mean + d, st ** 2, nt, prior_t)
        _, marg_c = kernels.posterior_normal_gamma(
            spec.control_mean, sc ** 2, nc, prior_c)
        p = _t_diff_tail(marg_t, marg_c, crit.threshold)
        return (p if ge_tail else 1.0 - p) - conf

    span = 50.0 * _normal_se(spec, nt, nc) + 10.0
    lo, hi = crit.threshold - span, crit.threshold + span
    f_lo, f_hi = excess(lo), excess(hi)
    if (f_lo > 0.0) == (f_hi > 0.0):
        return None
    rising = f_hi > f_lo
    while hi - lo > spec.stop_tol:
        mid = 0.5 * (lo + hi)
        if (excess(mid) < 0.0) == rising:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _welch_df(spec: TwoArmSpec, nt: int, nc: int) -> float:
    st, sc = spec.sigmas
    vt, vc = st ** 2 / nt, sc ** 2 / nc
    return (vt + vc) ** 2 / (vt ** 2 / (nt - 1) + vc ** 2 / (nc - 1))


def normal_diff_cutoff(spec: TwoArmSpec) -> list[CutoffResult]:
    validate_spec(spec)
    out = []
    for nt, nc in spec.arms:
        go_cuts = [_normal_criterion_cutoff(spec, nt, nc, c)
                   for c in spec.rules.go.criteria]
        nogo_cuts = [_normal_criterion_cutoff(spec, nt, nc, c)
                     for c in spec.rules.nogo.criteria]
        warns = []
        go_b = (None if any(c is None for c in go_cuts) else
                fold_cutoffs(go_cuts, spec.rules.go.combinator,
                             spec.rules.direction, nogo=False))
        nogo_b = (None if any(c is None for c in nogo_cuts) else
                  fold_cutoffs(nogo_cuts, spec.rules.nogo.combinator,
                               spec.rules.direction, nogo=True))
        if go_b is None:
            warns.append("NO_GO_REGION")
        if nogo_b is None:
            warns.append("NO_NOGO_REGION")
        out.append(CutoffResult(
            n=nt + nc, go_boundary=go_b, nogo_boundary=nogo_b,
            overlap=continuous_overlap(go_b, nogo_b, spec.rules.direction),
            boundary_statistic="MEAN_DIFFERENCE", warnings=warns))
    return out


def _normal_bayes_known_chunk(spec: TwoArmSpec, nt: int, nc: int, d: float,
                              chunk_idx: int, size: int) -> tuple[int, int]:
    gen = kernels.rng_substream(spec.seed, chunk_idx).generator()
    st, sc = spec.sigmas
    mu_c = spec.control_mean
    xbar_t = gen.normal(mu_c + d, st / math.sqrt(nt), size=size)
    xbar_c = gen.normal(mu_c, sc / math.sqrt(nc), size=size)
    go, nogo = 0, 0
    for i in range(size):
        m, sd = _normal_known_posterior_diff(spec, nt, nc,
                                             float(xbar_t[i]), float(xbar_c[i]))
        ev = _evidence(spec,
                       lambda t: 1.0 - kernels.normal_cdf((t - m) / sd))
        dec = evaluate(spec.rules, ev)
        if dec.value.value == "go":
            go += 1
        elif dec.value.value == "nogo":
            nogo += 1
    return go, nogo


def _normal_unknown_chunk(spec: TwoArmSpec, nt: int, nc: int, d: float,
                          chunk_idx: int, size: int) -> tuple[int, int]:
    gen = kernels.rng_substream(spec.seed, chunk_idx).generator()
    st, sc = spec.sigmas
    mu_c = spec.control_mean
    xbar_t = gen.normal(mu_c + d, st / math.sqrt(nt), size=size)
    xbar_c = gen.normal(mu_c, sc / math.sqrt(nc), size=size)
    s2_t = st ** 2 * gen.chisquare(nt - 1, size=size) / (nt - 1)
    s2_c = sc ** 2 * gen.chisquare(nc - 1, size=size) / (nc - 1)
    if spec.framework is Framework.BAYESIAN:
        prior_t, prior_c = _normal_priors(spec)
    go, nogo = 0, 0
    for i in range(size):
        if spec.framework is Framework.BAYESIAN:
            _, marg_t = kernels.posterior_normal_gamma(
                float(xbar_t[i]), float(s2_t[i]), nt, prior_t)
            _, marg_c = kernels.posterior_normal_gamma(
                float(xbar_c[i]), float(s2_c[i]), nc, prior_c)
            ev = _evidence(spec, lambda t: _t_diff_tail(marg_t, marg_c, t))
        else:
            # Welch t interval at the replicate's sample variances; the tail
            # function returns the frequentist confidence that the true
            # difference exceeds the threshold
            diff = float(xbar_t[i] - xbar_c[i])
            vt, vc = float(s2_t[i]) / nt, float(s2_c[i]) / nc
            se = math.sqrt(vt + vc)
            df = (vt + vc) ** 2 / (vt ** 2 / (nt - 1) + vc ** 2 / (nc - 1))
            ev = _evidence(spec, lambda t: 1.0 - kernels.t_cdf(
                (t - diff) / se, df))
        dec = evaluate(spec.rules, ev)
        if dec.value.value == "go":
            go += 1
        elif dec.value.value == "nogo":
            nogo += 1
    return go, nogo


def normal_diff_oc(spec: TwoArmSpec,
                   cutoffs: list[CutoffResult] | None = None
                   ) -> OperatingCharacteristics:
    validate_spec(spec)
    if cutoffs is None:
        cutoffs = normal_diff_cutoff(spec)
    rows = []
    known = spec.endpoint is TwoArmEndpoint.NORMAL_DIFF_KNOWN
    for (nt, nc), cut in zip(spec.arms, cutoffs):
        se = _normal_se(spec, nt, nc)
        for d in spec.true_values:
            if known and spec.framework is Framework.FREQUENTIST:
                cdf = lambda v: kernels.normal_cdf((v - d) / se)  # noqa: E731
                p_go, p_nogo, p_inc = continuous_region_probs(
                    cut.go_boundary, cut.nogo_boundary, spec.rules.direction,
                    spec.rules.dominated, cdf)
                rows.append(OCRow(n=nt + nc, true_value=d, p_go=p_go,
                                  p_nogo=p_nogo, p_inconclusive=p_inc))
                continue
            chunk = (_normal_bayes_known_chunk if known
                     else _normal_unknown_chunk)
            fn = functools.partial(chunk, spec, nt, nc, d)
            parts = _parallel.run_chunks(fn, spec.n_sims, spec.workers)
            go = sum(p[0] for p in parts)
            nogo = sum(p[1] for p in parts)
            p_go, p_nogo, p_inc, mse = mc_probs(go, nogo, spec.n_sims)
            rows.append(OCRow(n=nt + nc, true_value=d, p_go=p_go,
                              p_nogo=p_nogo, p_inconclusive=p_inc, mc_se=mse))
    return OperatingCharacteristics(rows)


# ------------------------------------------------------------- survival -----

def _hr_sigma(mt: int, mc: int) -> float:
    return math.sqrt(1.0 / mt + 1.0 / mc)


def _hr_criterion_cutoff(spec: TwoArmSpec, sigma: float,
                         crit: Criterion) -> float:
    """Boundary on the observed hazard ratio for one criterion."""
    conf = crit.confidence_pct / 100.0
    z = kernels.normal_quantile(conf)
    if crit.threshold <= 0.0:
        raise DomainError("hazard-ratio thresholds must be > 0")
    if spec.framework is Framework.FREQUENTIST:
        if spec.rules.direction is Direction.LESS:
            return crit.threshold * math.exp(-z * sigma)
        return crit.threshold * math.exp(z * sigma)
    prior = spec.hr_prior
    prec = 1.0 / prior.sd ** 2 + 1.0 / sigma ** 2
    sd_post = math.sqrt(1.0 / prec)
    lt = math.log(crit.threshold)
    if spec.rules.direction is Direction.LESS:
        m = lt - z * sd_post
    else:
        m = lt + z * sd_post
    # posterior mean is affine in the observed log HR
    obs = (m * prec - prior.mean / prior.sd ** 2) * sigma ** 2
    return math.exp(obs)


def survival_hr_cutoff(spec: TwoArmSpec) -> list[CutoffResult]:
    validate_spec(spec)
    out = []
    for mt, mc in spec.events:
        sigma = _hr_sigma(mt, mc)
        go_cuts = [_hr_criterion_cutoff(spec, sigma, c)
                   for c in spec.rules.go.criteria]
        nogo_cuts = [_hr_criterion_cutoff(spec, sigma, c)
                     for c in spec.rules.nogo.criteria]
        go_b = fold_cutoffs(go_cuts, spec.rules.go.combinator,
                            spec.rules.direction, nogo=False)
        nogo_b = fold_cutoffs(nogo_cuts, spec.rules.nogo.combinator,
                              spec.rules.direction, nogo=True)
        out.append(CutoffResult(
            n=mt + mc, go_boundary=go_b, nogo_boundary=nogo_b,
            overlap=continuous_overlap(go_b, nogo_b, spec.rules.direction),
            boundary_statistic="HAZARD_RATIO", warnings=[]))
    return out


def _hr_bayes_chunk(spec: TwoArmSpec, mt: int, mc: int, hr: float,
                    chunk_idx: int, size: int) -> tuple[int, int]:
    gen = kernels.rng_substream(spec.seed, chunk_idx).generator()
    sigma = _hr_sigma(mt, mc)
    obs = gen.normal(math.log(hr), sigma, size=size)
    prior = spec.hr_prior
    prec = 1.0 / prior.sd ** 2 + 1.0 / sigma ** 2
    sd_post = math.sqrt(1.0 / prec)
    go, nogo = 0, 0
    for i in range(size):
        m = (prior.mean / prior.sd ** 2 + obs[i] / sigma ** 2) / prec
        ev = _evidence(spec, lambda t: 1.0 - kernels.normal_cdf(
            (math.log(t) - m) / sd_post))
        dec = evaluate(spec.rules, ev)
        if dec.value.value == "go":
            go += 1
        elif dec.value.value == "nogo":
            nogo += 1
    return go, nogo


def survival_hr_oc(spec: TwoArmSpec,
                   cutoffs: list[CutoffResult] | None = None
                   ) -> OperatingCharacteristics:
    validate_spec(spec)
    if cutoffs is None:
        cutoffs = survival_hr_cutoff(spec)
    rows = []
    for (mt, mc), cut in zip(spec.events, cutoffs):
        sigma = _hr_sigma(mt, mc)
        for hr in spec.true_values:
            if spec.framework is Framework.FREQUENTIST:
                mu = math.log(hr)
                cdf = lambda v: (0.0 if v <= 0.0 else  # noqa: E731
                                 kernels.normal_cdf((math.log(v) - mu) / sigma))
                p_go, p_nogo, p_inc = continuous_region_probs(
                    cut.go_boundary, cut.nogo_boundary, spec.rules.direction,
                    spec.rules.dominated, cdf)
                rows.append(OCRow(n=mt + mc, true_value=hr, p_go=p_go,
                                  p_nogo=p_nogo, p_inconclusive=p_inc))
            else:
                fn = functools.partial(_hr_bayes_chunk, spec, mt, mc, hr)
                parts = _parallel.run_chunks(fn, spec.n_sims, spec.workers)
                go = sum(p[0] for p in parts)
                nogo = sum(p[1] for p in parts)
                p_go, p_nogo, p_inc, se = mc_probs(go, nogo, spec.n_sims)
                rows.append(OCRow(n=mt + mc, true_value=hr, p_go=p_go,
                                  p_nogo=p_nogo, p_inconclusive=p_inc,
                                  mc_se=se))
    return OperatingCharacteristics(rows)


# -------------------------------------------------------------- dispatch ----

def cutoffs(spec: TwoArmSpec) -> list[CutoffResult]:
    if spec.endpoint is TwoArmEndpoint.BINARY_DIFF:
        return binary_diff_cutoff(spec)
    if spec.endpoint is TwoArmEndpoint.SURVIVAL_HR:
        return survival_hr_cutoff(spec)
    return normal_diff_cutoff(spec)


def oc(spec: TwoArmSpec,
       cuts: list[CutoffResult] | None = None) -> OperatingCharacteristics:
    if spec.endpoint is TwoArmEndpoint.BINARY_DIFF:
        return binary_diff_oc(spec, cuts)
    if spec.endpoint is TwoArmEndpoint.SURVIVAL_HR:
        return survival_hr_oc(spec, cuts)
    return normal_diff_oc(spec, cuts)
