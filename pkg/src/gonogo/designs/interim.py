"""One interim futility look wrapped around a single-arm or two-arm design.

Per replicate the interim-stage data is evaluated against the futility rule
(a No-Go-style test: stop when the evidence falls short per the rule's
combinator); stopped replicates are No-Go.  Surviving replicates accrue the
remaining data, pool both stages, and are classified by the base design's
final rules.  Everything is simulated, deterministic under the seed, and
bit-identical across worker counts.
"""

import functools
import math
from dataclasses import dataclass

import numpy as np

from .. import kernels
from ..errors import ValidationError
from ..rules import (
    Direction,
    EvidenceProfile,
    Rule,
    RuleSet,
    evaluate,
    fold,
    rule_fired,
)
from . import _parallel, single_arm, two_arm
from .common import Framework, OCRow, OperatingCharacteristics
from .single_arm import SingleArmEndpoint, SingleArmSpec, SurvivalMode
from .two_arm import TwoArmEndpoint, TwoArmSpec


@dataclass
class InterimSpec:
    base: SingleArmSpec | TwoArmSpec
    information_fraction: float
    interim_rule: Rule
    n_sims: int = 2000
    seed: int = 425
    workers: int = 1


def _stage_size(frac: float, n: int) -> int:
    return max(1, math.floor(frac * n))


def validate_spec(spec: InterimSpec) -> InterimSpec:
    if not 0.0 < spec.information_fraction < 1.0:
        raise ValidationError("information_fraction must lie in (0, 1)")
    if isinstance(spec.base, SingleArmSpec):
        single_arm.validate_spec(spec.base)
        if (spec.base.endpoint is SingleArmEndpoint.SURVIVAL
                and spec.base.survival_mode is SurvivalMode.EXPONENTIAL_RATE):
            raise ValidationError(
                "interim looks are not supported for the exponential-rate "
                "survival summary; use the landmark formulation",
                code="UNSUPPORTED_INTERIM")
    else:
        two_arm.validate_spec(spec.base)
        if spec.base.endpoint is TwoArmEndpoint.NORMAL_DIFF_UNKNOWN:
            raise ValidationError(
                "interim looks are not supported for the unknown-variance "
                "two-arm design", code="UNSUPPORTED_INTERIM")
    return spec


# ----------------------------------------------------- evidence utilities ---

def _ge_probs(rules_direction: Direction, thresholds, ge_tail) -> EvidenceProfile:
    probs = {}
    ge = rules_direction is Direction.GREATER_OR_EQUAL
    for t in thresholds:
        p = ge_tail(t)
        probs[t] = min(max(p if ge else 1.0 - p, 0.0), 1.0)
    return EvidenceProfile(probs)


def _all_thresholds(rules: RuleSet, interim: Rule) -> tuple[float, ...]:
    return tuple(set(rules.go.thresholds + rules.nogo.thresholds
                     + tuple(c.threshold for c in interim.criteria)))


# ------------------------------------------------------- single-arm paths ---

def _binary_stop_table(spec: InterimSpec, base: SingleArmSpec,
                       n1: int) -> np.ndarray:
    """stop[x1] for the futility rule at the interim count."""
    prior = (base.prior if base.framework is Framework.BAYESIAN else None)
    flags = [~single_arm.binary_criterion_cleared(
        n1, c, base.rules.direction, base.framework, prior)
        for c in spec.interim_rule.criteria]
    out = flags[0]
    for f in flags[1:]:
        out = (out & f) if spec.interim_rule.combinator.value == "and" else (out | f)
    return out


def _binary_chunk(spec: InterimSpec, base: SingleArmSpec, n: int, p: float,
                  stop_table: np.ndarray, final_codes: np.ndarray,
                  chunk_idx: int, size: int):
    gen = kernels.rng_substream(spec.seed, chunk_idx).generator()
    n1 = stop_table.size - 1
    x1 = gen.binomial(n1, p, size=size)
    x2 = gen.binomial(n - n1, p, size=size) if n > n1 else np.zeros(size, int)
    stopped = stop_table[x1]
    codes = final_codes[x1 + x2]
    go = int(np.sum(~stopped & (codes == 1)))
    nogo = int(np.sum(stopped | (codes == -1)))
    return go, nogo, int(np.sum(stopped))


def _single_normal_evidence(base: SingleArmSpec, thresholds, xbar: float,
                            s2: float, n: int) -> EvidenceProfile:
    known = base.endpoint is SingleArmEndpoint.NORMAL_KNOWN_VAR

    def ge_tail(t: float) -> float:
        if base.framework is Framework.FREQUENTIST:
            if known:
                return 1.0 - kernels.normal_cdf(
                    (t - xbar) / (base.sigma / math.sqrt(n)))
            if s2 <= 0.0:
                return float(xbar >= t)
            return 1.0 - kernels.t_cdf((t - xbar) / math.sqrt(s2 / n), n - 1)
        if known:
            post = kernels.posterior_normal_known_var(xbar, n, base.sigma,
                                                      base.prior)
            return 1.0 - kernels.normal_cdf((t - post.mean) / post.sd)
        _, marginal = kernels.posterior_normal_gamma(xbar, s2, n, base.prior)
        return marginal.sf(t)

    return _ge_probs(base.rules.direction, thresholds, ge_tail)


def _normal_chunk(spec: InterimSpec, base: SingleArmSpec, n: int, mu: float,
                  chunk_idx: int, size: int):
    gen = kernels.rng_substream(spec.seed, chunk_idx).generator()
    n1 = _stage_size(spec.information_fraction, n)
    n2 = n - n1
    sd = base.sigma
    xb1 = gen.normal(mu, sd / math.sqrt(n1), size=size)
    s21 = (sd ** 2 * gen.chisquare(n1 - 1, size=size) / (n1 - 1)
           if n1 > 1 else np.zeros(size))
    if n2 >= 1:
        xb2 = gen.normal(mu, sd / math.sqrt(n2), size=size)
        s22 = (sd ** 2 * gen.chisquare(n2 - 1, size=size) / (n2 - 1)
               if n2 > 1 else np.zeros(size))
    thresholds = _all_thresholds(base.rules, spec.interim_rule)
    go = nogo = stopped = 0
    for i in range(size):
        ev1 = _single_normal_evidence(base, thresholds, float(xb1[i]),
                                      float(s21[i]), n1)
        if rule_fired(spec.interim_rule, ev1, nogo=True):
            stopped += 1
            nogo += 1
            continue
        if n2 >= 1:
            xbar = (n1 * xb1[i] + n2 * xb2[i]) / n
            s2 = (((n1 - 1) * s21[i] + (n2 - 1) * s22[i]
                   + n1 * n2 / n * (xb1[i] - xb2[i]) ** 2) / (n - 1)
                  if n > 1 else 0.0)
        else:
            xbar, s2 = xb1[i], s21[i]
        ev = _single_normal_evidence(base, thresholds, float(xbar),
                                     float(s2), n)
        dec = evaluate(base.rules, ev)
        if dec.value.value == "go":
            go += 1
        elif dec.value.value == "nogo":
            nogo += 1
    return go, nogo, stopped


# --------------------------------------------------------- two-arm paths ----

def _two_binary_evidence(base: TwoArmSpec, thresholds, xt: int, nt: int,
                         xc: int, nc: int) -> EvidenceProfile:
    if base.framework is Framework.BAYESIAN:
        def ge_tail(t: float) -> float:
            return two_arm._binary_bayes_prob(base, nt, nc, float(xt),
                                              float(xc), t)
    else:
        pt, pc = xt / nt, xc / nc
        d = pt - pc
        se = math.sqrt(pt * (1 - pt) / nt + pc * (1 - pc) / nc)

        def ge_tail(t: float) -> float:
            if se == 0.0:
                return float(d >= t)
            return 1.0 - kernels.normal_cdf((t - d) / se)
    return _ge_probs(base.rules.direction, thresholds, ge_tail)


def _two_binary_chunk(spec: InterimSpec, base: TwoArmSpec, nt: int, nc: int,
                      d: float, chunk_idx: int, size: int):
    gen = kernels.rng_substream(spec.seed, chunk_idx).generator()
    nt1 = _stage_size(spec.information_fraction, nt)
    nc1 = _stage_size(spec.information_fraction, nc)
    pt, pc = base.control_rate + d, base.control_rate
    xt1 = gen.binomial(nt1, pt, size=size)
    xc1 = gen.binomial(nc1, pc, size=size)
    xt2 = gen.binomial(nt - nt1, pt, size=size) if nt > nt1 else np.zeros(size, int)
    xc2 = gen.binomial(nc - nc1, pc, size=size) if nc > nc1 else np.zeros(size, int)
    thresholds = _all_thresholds(base.rules, spec.interim_rule)
    go = nogo = stopped = 0
    for i in range(size):
        ev1 = _two_binary_evidence(base, thresholds, int(xt1[i]), nt1,
                                   int(xc1[i]), nc1)
        if rule_fired(spec.interim_rule, ev1, nogo=True):
            stopped += 1
            nogo += 1
            continue
        ev = _two_binary_evidence(base, thresholds, int(xt1[i] + xt2[i]), nt,
                                  int(xc1[i] + xc2[i]), nc)
        dec = evaluate(base.rules, ev)
        if dec.value.value == "go":
            go += 1
        elif dec.value.value == "nogo":
            nogo += 1
    return go, nogo, stopped


def _two_normal_evidence(base: TwoArmSpec, thresholds, xbar_t: float, nt: int,
                         xbar_c: float, nc: int) -> EvidenceProfile:
    if base.framework is Framework.BAYESIAN:
        m, sd = two_arm._normal_known_posterior_diff(base, nt, nc, xbar_t,
                                                     xbar_c)
    else:
        m = xbar_t - xbar_c
        st, sc = base.sigmas
        sd = math.sqrt(st ** 2 / nt + sc ** 2 / nc)
    return _ge_probs(base.rules.direction, thresholds,
                     lambda t: 1.0 - kernels.normal_cdf((t - m) / sd))


def _two_normal_chunk(spec: InterimSpec, base: TwoArmSpec, nt: int, nc: int,
                      d: float, chunk_idx: int, size: int):
    gen = kernels.rng_substream(spec.seed, chunk_idx).generator()
    nt1 = _stage_size(spec.information_fraction, nt)
    nc1 = _stage_size(spec.information_fraction, nc)
    st, sc = base.sigmas
    mu_c = base.control_mean
    xt1 = gen.normal(mu_c + d, st / math.sqrt(nt1), size=size)
    xc1 = gen.normal(mu_c, sc / math.sqrt(nc1), size=size)
    nt2, nc2 = nt - nt1, nc - nc1
    xt2 = gen.normal(mu_c + d, st / math.sqrt(max(nt2, 1)), size=size)
    xc2 = gen.normal(mu_c, sc / math.sqrt(max(nc2, 1)), size=size)
    thresholds = _all_thresholds(base.rules, spec.interim_rule)
    go = nogo = stopped = 0
    for i in range(size):
        ev1 = _two_normal_evidence(base, thresholds, float(xt1[i]), nt1,
                                   float(xc1[i]), nc1)
        if rule_fired(spec.interim_rule, ev1, nogo=True):
            stopped += 1
            nogo += 1
            continue
        xbt = (nt1 * xt1[i] + nt2 * xt2[i]) / nt if nt2 else xt1[i]
        xbc = (nc1 * xc1[i] + nc2 * xc2[i]) / nc if nc2 else xc1[i]
        ev = _two_normal_evidence(base, thresholds, float(xbt), nt,
                                  float(xbc), nc)
        dec = evaluate(base.rules, ev)
        if dec.value.value == "go":
            go += 1
        elif dec.value.value == "nogo":
            nogo += 1
    return go, nogo, stopped


def _hr_evidence(base: TwoArmSpec, thresholds, obs_log_hr: float,
                 sigma: float) -> EvidenceProfile:
    if base.framework is Framework.BAYESIAN:
        prior = base.hr_prior
        prec = 1.0 / prior.sd ** 2 + 1.0 / sigma ** 2
        m = (prior.mean / prior.sd ** 2 + obs_log_hr / sigma ** 2) / prec
        sd = math.sqrt(1.0 / prec)
    else:
        m, sd = obs_log_hr, sigma
    return _ge_probs(base.rules.direction, thresholds,
                     lambda t: 1.0 - kernels.normal_cdf((math.log(t) - m) / sd))


def _hr_chunk(spec: InterimSpec, base: TwoArmSpec, mt: int, mc: int,
              hr: float, chunk_idx: int, size: int):
    gen = kernels.rng_substream(spec.seed, chunk_idx).generator()
    mt1 = _stage_size(spec.information_fraction, mt)
    mc1 = _stage_size(spec.information_fraction, mc)
    mt2, mc2 = mt - mt1, mc - mc1
    s1 = math.sqrt(1.0 / mt1 + 1.0 / mc1)
    s_full = math.sqrt(1.0 / mt + 1.0 / mc)
    # independent information increments on the log-HR scale
    i1, i_full = 1.0 / s1 ** 2, 1.0 / s_full ** 2
    i2 = i_full - i1
    log_hr = math.log(hr)
    obs1 = gen.normal(log_hr, s1, size=size)
    obs2 = (gen.normal(log_hr, 1.0 / math.sqrt(i2), size=size)
            if i2 > 0.0 else np.zeros(size))
    thresholds = _all_thresholds(base.rules, spec.interim_rule)
    go = nogo = stopped = 0
    for i in range(size):
        ev1 = _hr_evidence(base, thresholds, float(obs1[i]), s1)
        if rule_fired(spec.interim_rule, ev1, nogo=True):
            stopped += 1
            nogo += 1
            continue
        obs = ((i1 * obs1[i] + i2 * obs2[i]) / i_full if i2 > 0.0
               else float(obs1[i]))
        ev = _hr_evidence(base, thresholds, float(obs), s_full)
        dec = evaluate(base.rules, ev)
        if dec.value.value == "go":
            go += 1
        elif dec.value.value == "nogo":
            nogo += 1
    return go, nogo, stopped


# ------------------------------------------------------------- dispatch -----

def simulate_interim_oc(spec: InterimSpec) -> OperatingCharacteristics:
    validate_spec(spec)
    base = spec.base
    rows = []
    if isinstance(base, SingleArmSpec):
        if (base.endpoint is SingleArmEndpoint.SURVIVAL
                and base.survival_mode is SurvivalMode.BINOMIAL_LANDMARK):
            base = single_arm._landmark_binary_spec(base)
        if base.endpoint is SingleArmEndpoint.BINARY:
            for n in base.sample_sizes:
                n1 = _stage_size(spec.information_fraction, n)
                stop_table = _binary_stop_table(spec, base, n1)
                final_codes = single_arm.binary_decision_codes(base, n)
                for p in base.true_values:
                    fn = functools.partial(_binary_chunk, spec, base, n, p,
                                           stop_table, final_codes)
                    rows.append(_aggregate(spec, fn, n, p))
        else:
            for n in base.sample_sizes:
                for mu in base.true_values:
                    fn = functools.partial(_normal_chunk, spec, base, n, mu)
                    rows.append(_aggregate(spec, fn, n, mu))
    else:
        if base.endpoint is TwoArmEndpoint.SURVIVAL_HR:
            for mt, mc in base.events:
                for hr in base.true_values:
                    fn = functools.partial(_hr_chunk, spec, base, mt, mc, hr)
                    rows.append(_aggregate(spec, fn, mt + mc, hr))
        elif base.endpoint is TwoArmEndpoint.BINARY_DIFF:
            for nt, nc in base.arms:
                for d in base.true_values:
                    fn = functools.partial(_two_binary_chunk, spec, base,
                                           nt, nc, d)
                    rows.append(_aggregate(spec, fn, nt + nc, d))
        else:
            for nt, nc in base.arms:
                for d in base.true_values:
                    fn = functools.partial(_two_normal_chunk, spec, base,
                                           nt, nc, d)
                    rows.append(_aggregate(spec, fn, nt + nc, d))
    return OperatingCharacteristics(rows)


def _aggregate(spec: InterimSpec, fn, n: int, true_value: float) -> OCRow:
    parts = _parallel.run_chunks(fn, spec.n_sims, spec.workers)
    go = sum(p[0] for p in parts)
    nogo = sum(p[1] for p in parts)
    stopped = sum(p[2] for p in parts)
    total = spec.n_sims
    p_go, p_nogo = go / total, nogo / total
    p_inc = 1.0 - p_go - p_nogo
    se = max(math.sqrt(p * (1.0 - p) / total) for p in (p_go, p_nogo, p_inc))
    return OCRow(n=n, true_value=true_value, p_go=p_go, p_nogo=p_nogo,
                 p_inconclusive=p_inc, mc_se=se,
                 p_stop_interim=stopped / total)
