"""Single-arm designs: binary, normal (known/unknown variance), survival.

Cutoffs locate the decision boundaries on the observed statistic (responder
count, sample mean, or event rate); operating characteristics are exact where
the statistic's sampling distribution is tractable and simulated otherwise.
"""

import functools
import math
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .. import kernels
from ..errors import DomainError, ValidationError
from ..kernels import BetaParams, NormalGammaParams, NormalParams
from ..rules import Criterion, Direction, DominatedRule, RuleSet, validate_rule_set
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


class SingleArmEndpoint(Enum):
    BINARY = "binary"
    NORMAL_KNOWN_VAR = "normal_known_var"
    NORMAL_UNKNOWN_VAR = "normal_unknown_var"
    SURVIVAL = "survival"


class SurvivalMode(Enum):
    EXPONENTIAL_RATE = "exponential_rate"
    BINOMIAL_LANDMARK = "binomial_landmark"


@dataclass
class SingleArmSpec:
    endpoint: SingleArmEndpoint
    framework: Framework
    sample_sizes: list[int]
    rules: RuleSet
    true_values: list[float]
    sigma: float | None = None          # sampling sd (normal); also the
                                        # generating sd for unknown-variance OC
    prior: BetaParams | NormalParams | NormalGammaParams | None = None
    survival_mode: SurvivalMode = SurvivalMode.BINOMIAL_LANDMARK
    landmark_time: float | None = None
    stop_tol: float = 1e-4
    seed: int = 425
    n_sims: int = 10_000
    workers: int = 1


def validate_spec(spec: SingleArmSpec) -> SingleArmSpec:
    if not spec.sample_sizes or any(n < 1 for n in spec.sample_sizes):
        raise ValidationError("sample_sizes must be nonempty, each >= 1")
    if not spec.true_values:
        raise ValidationError("true_values must be nonempty")
    rate_scale = spec.endpoint in (SingleArmEndpoint.BINARY,
                                   SingleArmEndpoint.SURVIVAL)
    validate_rule_set(spec.rules, rate_scale=rate_scale)
    if rate_scale and any(not 0.0 <= v <= 1.0 for v in spec.true_values):
        raise ValidationError("true_values must lie in [0, 1] for this endpoint")
    if spec.framework is Framework.BAYESIAN:
        if spec.prior is None:
            raise ValidationError("Bayesian analysis requires a prior")
        want = {SingleArmEndpoint.BINARY: BetaParams,
                SingleArmEndpoint.SURVIVAL: BetaParams,
                SingleArmEndpoint.NORMAL_KNOWN_VAR: NormalParams,
                SingleArmEndpoint.NORMAL_UNKNOWN_VAR: NormalGammaParams}
        if not isinstance(spec.prior, want[spec.endpoint]):
            raise ValidationError(
                f"{spec.endpoint.value} Bayesian analysis requires a "
                f"{want[spec.endpoint].__name__} prior")
    if spec.framework is Framework.FREQUENTIST and spec.prior is not None:
        raise ValidationError("frequentist analysis takes no prior")
    if spec.endpoint in (SingleArmEndpoint.NORMAL_KNOWN_VAR,
                         SingleArmEndpoint.NORMAL_UNKNOWN_VAR):
        if spec.sigma is None or spec.sigma <= 0.0:
            raise ValidationError("normal endpoints require sigma > 0")
    if spec.endpoint is SingleArmEndpoint.SURVIVAL:
        if spec.landmark_time is None or spec.landmark_time <= 0.0:
            raise DomainError("survival endpoint requires landmark_time > 0")
    if spec.stop_tol <= 0.0:
        raise ValidationError("stop_tol must be > 0")
    return spec


# ---------------------------------------------------------------- binary ----

def _binary_prior(spec: SingleArmSpec) -> BetaParams | None:
    if spec.framework is not Framework.BAYESIAN:
        return None
    if not isinstance(spec.prior, BetaParams):
        raise ValidationError("binary Bayesian analysis requires a Beta prior")
    return spec.prior


def binary_criterion_cleared(n: int, crit: Criterion, direction: Direction,
                             framework: Framework,
                             prior: BetaParams | None) -> np.ndarray:
    """Boolean array over x = 0..n: does the criterion hold at x?

    Frequentist: the one-sided Clopper-Pearson bound at the criterion's
    confidence clears the threshold.  Bayesian: the Beta posterior tail
    probability reaches the confidence.
    """
    conf = crit.confidence_pct / 100.0
    t = crit.threshold
    out = np.empty(n + 1, dtype=bool)
    if framework is Framework.FREQUENTIST:
        for x in range(n + 1):
            if direction is Direction.GREATER_OR_EQUAL:
                out[x] = kernels.clopper_pearson_lower(x, n, conf) >= t
            else:
                out[x] = kernels.clopper_pearson_upper(x, n, conf) <= t
    else:
        for x in range(n + 1):
            post = kernels.posterior_beta(x, n, prior)
            tail = kernels.beta_cdf(t, post.a, post.b)
            if direction is Direction.GREATER_OR_EQUAL:
                out[x] = (1.0 - tail) >= conf
            else:
                out[x] = tail >= conf
    return out


def binary_fired(spec: SingleArmSpec, n: int) -> tuple[np.ndarray, np.ndarray]:
    """(go_fired, nogo_fired) boolean arrays over x = 0..n."""
    prior = _binary_prior(spec)
    go_flags = [binary_criterion_cleared(n, c, spec.rules.direction,
                                         spec.framework, prior)
                for c in spec.rules.go.criteria]
    nogo_flags = [~binary_criterion_cleared(n, c, spec.rules.direction,
                                            spec.framework, prior)
                  for c in spec.rules.nogo.criteria]
    return (fold_flags(spec.rules.go, go_flags),
            fold_flags(spec.rules.nogo, nogo_flags))


def binary_decision_codes(spec: SingleArmSpec, n: int) -> np.ndarray:
    go_fired, nogo_fired = binary_fired(spec, n)
    return decision_code(go_fired, nogo_fired, spec.rules.dominated)


def _count_boundaries(go_fired: np.ndarray, nogo_fired: np.ndarray,
                      direction: Direction) -> tuple[int | None, int | None,
                                                     bool, list[str]]:
    warnings = []
    go_idx = np.flatnonzero(go_fired)
    nogo_idx = np.flatnonzero(nogo_fired)
    if direction is Direction.GREATER_OR_EQUAL:
        go_b = int(go_idx.min()) if go_idx.size else None
        nogo_b = int(nogo_idx.max()) if nogo_idx.size else None
        overlap = go_b is not None and nogo_b is not None and go_b <= nogo_b
    else:
        go_b = int(go_idx.max()) if go_idx.size else None
        nogo_b = int(nogo_idx.min()) if nogo_idx.size else None
        overlap = go_b is not None and nogo_b is not None and nogo_b <= go_b
    if go_b is None:
        warnings.append("NO_GO_REGION")
    if nogo_b is None:
        warnings.append("NO_NOGO_REGION")
    return go_b, nogo_b, overlap, warnings


def binary_cutoffs(spec: SingleArmSpec,
                   statistic: str = "RESPONDERS") -> list[CutoffResult]:
    validate_spec(spec)
    out = []
    for n in spec.sample_sizes:
        go_fired, nogo_fired = binary_fired(spec, n)
        go_b, nogo_b, overlap, warns = _count_boundaries(
            go_fired, nogo_fired, spec.rules.direction)
        out.append(CutoffResult(n=n, go_boundary=go_b, nogo_boundary=nogo_b,
                                overlap=overlap, boundary_statistic=statistic,
                                warnings=warns))
    return out


def binary_oc(spec: SingleArmSpec, cutoffs=None) -> OperatingCharacteristics:
    validate_spec(spec)
    rows = []
    for n in spec.sample_sizes:
        codes = binary_decision_codes(spec, n)
        go_mask = codes == DECISION_GO
        nogo_mask = codes == DECISION_NOGO
        for p in spec.true_values:
            pmf = kernels.binom_pmf_vector(n, p)
            p_go = float(pmf[go_mask].sum())
            p_nogo = float(pmf[nogo_mask].sum())
            rows.append(OCRow(n=n, true_value=p, p_go=p_go, p_nogo=p_nogo,
                              p_inconclusive=1.0 - p_go - p_nogo))
    return OperatingCharacteristics(rows)


# ---------------------------------------------------------------- normal ----

def _normal_prior(spec: SingleArmSpec):
    if spec.framework is not Framework.BAYESIAN:
        return None
    want = (NormalParams if spec.endpoint is SingleArmEndpoint.NORMAL_KNOWN_VAR
            else NormalGammaParams)
    if not isinstance(spec.prior, want):
        raise ValidationError(
            f"{spec.endpoint.value} Bayesian analysis requires a "
            f"{want.__name__} prior")
    return spec.prior


def normal_criterion_cutoff(spec: SingleArmSpec, n: int,
                            crit: Criterion) -> float | None:
    """Boundary on the sample mean at which the criterion exactly holds."""
    conf = crit.confidence_pct / 100.0
    t = crit.threshold
    z = kernels.normal_quantile(conf)
    ge = spec.rules.direction is Direction.GREATER_OR_EQUAL
    sigma = spec.sigma
    if spec.framework is Framework.FREQUENTIST:
        if spec.endpoint is SingleArmEndpoint.NORMAL_KNOWN_VAR:
            shift = z * sigma / math.sqrt(n)
        else:
            # plug-in sample sd at the planning sigma
            shift = kernels.t_quantile(conf, n - 1) * sigma / math.sqrt(n)
        return t + shift if ge else t - shift
    prior = _normal_prior(spec)
    if spec.endpoint is SingleArmEndpoint.NORMAL_KNOWN_VAR:
        prec = 1.0 / prior.sd ** 2 + n / sigma ** 2
        m = t + z / math.sqrt(prec) if ge else t - z / math.sqrt(prec)
        return (m * prec - prior.mean / prior.sd ** 2) * sigma ** 2 / n
    # unknown variance: invert the posterior Student-t tail at plug-in s2
    s2 = sigma ** 2

    def excess(xbar: float) -> float:
        _, marg = kernels.posterior_normal_gamma(xbar, s2, n, prior)
        tail = marg.sf(t) if ge else marg.cdf(t)
        return tail - conf

    scale = sigma / math.sqrt(n)
    lo = t - 100.0 * scale - abs(prior.mean) - 1.0
    hi = t + 100.0 * scale + abs(prior.mean) + 1.0
    f_lo, f_hi = excess(lo), excess(hi)
    if ge:
        if f_hi < 0.0 or f_lo > 0.0:
            return None
    else:
        if f_lo < 0.0 or f_hi > 0.0:
            return None
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f = excess(mid)
        rising = f_hi > f_lo
        if (f < 0.0) == rising:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-12 * max(1.0, abs(mid)):
            break
    return 0.5 * (lo + hi)


def normal_cutoffs(spec: SingleArmSpec,
                   statistic: str = "SAMPLE_MEAN") -> list[CutoffResult]:
    validate_spec(spec)
    out = []
    for n in spec.sample_sizes:
        go_cuts = [normal_criterion_cutoff(spec, n, c)
                   for c in spec.rules.go.criteria]
        nogo_cuts = [normal_criterion_cutoff(spec, n, c)
                     for c in spec.rules.nogo.criteria]
        warns = []
        if any(c is None for c in go_cuts):
            go_b, warns = None, warns + ["NO_GO_REGION"]
        else:
            go_b = fold_cutoffs(go_cuts, spec.rules.go.combinator,
                                spec.rules.direction, nogo=False)
        if any(c is None for c in nogo_cuts):
            nogo_b = None
            warns.append("NO_NOGO_REGION")
        else:
            nogo_b = fold_cutoffs(nogo_cuts, spec.rules.nogo.combinator,
                                  spec.rules.direction, nogo=True)
        out.append(CutoffResult(
            n=n, go_boundary=go_b, nogo_boundary=nogo_b,
            overlap=continuous_overlap(go_b, nogo_b, spec.rules.direction),
            boundary_statistic=statistic, warnings=warns))
    return out


def _normal_unknown_chunk(spec: SingleArmSpec, n: int, mu: float,
                          chunk_idx: int, size: int) -> tuple[int, int]:
    gen = kernels.rng_substream(spec.seed, chunk_idx).generator()
    sigma = spec.sigma
    xbar = gen.normal(mu, sigma / math.sqrt(n), size=size)
    s2 = sigma ** 2 * gen.chisquare(n - 1, size=size) / (n - 1)
    ge = spec.rules.direction is Direction.GREATER_OR_EQUAL
    go, nogo = 0, 0
    prior = _normal_prior(spec)
    for i in range(size):
        if spec.framework is Framework.BAYESIAN:
            _, marg = kernels.posterior_normal_gamma(float(xbar[i]),
                                                     float(s2[i]), n, prior)

            def cleared(c: Criterion) -> bool:
                tail = marg.sf(c.threshold) if ge else marg.cdf(c.threshold)
                return tail >= c.confidence_pct / 100.0
        else:
            s = math.sqrt(s2[i])

            def cleared(c: Criterion) -> bool:
                tq = kernels.t_quantile(c.confidence_pct / 100.0, n - 1)
                shift = tq * s / math.sqrt(n)
                if ge:
                    return xbar[i] - shift >= c.threshold
                return xbar[i] + shift <= c.threshold

        go_fired = fold_flags(spec.rules.go,
                              [np.array([cleared(c)])
                               for c in spec.rules.go.criteria])[0]
        nogo_fired = fold_flags(spec.rules.nogo,
                                [np.array([not cleared(c)])
                                 for c in spec.rules.nogo.criteria])[0]
        code = decision_code(go_fired, nogo_fired, spec.rules.dominated)
        if code == DECISION_GO:
            go += 1
        elif code == DECISION_NOGO:
            nogo += 1
    return go, nogo


def normal_oc(spec: SingleArmSpec, cutoffs: list[CutoffResult] | None = None
              ) -> OperatingCharacteristics:
    validate_spec(spec)
    if cutoffs is None:
        cutoffs = normal_cutoffs(spec)
    rows = []
    if spec.endpoint is SingleArmEndpoint.NORMAL_KNOWN_VAR:
        for cut in cutoffs:
            n = cut.n
            sd = spec.sigma / math.sqrt(n)
            for mu in spec.true_values:
                cdf = lambda v: kernels.normal_cdf((v - mu) / sd)  # noqa: E731
                p_go, p_nogo, p_inc = continuous_region_probs(
                    cut.go_boundary, cut.nogo_boundary, spec.rules.direction,
                    spec.rules.dominated, cdf)
                rows.append(OCRow(n=n, true_value=mu, p_go=p_go, p_nogo=p_nogo,
                                  p_inconclusive=p_inc))
        return OperatingCharacteristics(rows)
    # unknown variance: replicate simulation evaluating the rules directly
    for n in spec.sample_sizes:
        for mu in spec.true_values:
            fn = functools.partial(_normal_unknown_chunk, spec, n, mu)
            parts = _parallel.run_chunks(fn, spec.n_sims, spec.workers)
            go = sum(p[0] for p in parts)
            nogo = sum(p[1] for p in parts)
            p_go, p_nogo, p_inc, se = mc_probs(go, nogo, spec.n_sims)
            rows.append(OCRow(n=n, true_value=mu, p_go=p_go, p_nogo=p_nogo,
                              p_inconclusive=p_inc, mc_se=se))
    return OperatingCharacteristics(rows)


# -------------------------------------------------------------- survival ----

def _landmark_binary_spec(spec: SingleArmSpec) -> SingleArmSpec:
    return replace(spec, endpoint=SingleArmEndpoint.BINARY,
                   survival_mode=SurvivalMode.BINOMIAL_LANDMARK,
                   landmark_time=None)


def _exp_rate_criterion_cutoff(n: int, crit: Criterion, direction: Direction,
                               landmark: float) -> float:
    """Cutoff on the observed event rate (events / total time) for one
    criterion stated on the landmark survival probability."""
    conf = crit.confidence_pct / 100.0
    sp = crit.threshold
    if not 0.0 < sp < 1.0:
        raise DomainError("exponential-rate criteria need SP thresholds in (0, 1)")
    lam_t = -math.log(sp) / landmark
    if direction is Direction.GREATER_OR_EQUAL:
        # SP >= sp favorable <=> lambda <= lam_t; cleared when the upper
        # gamma bound on lambda sits below lam_t
        return n * lam_t / kernels.gamma_quantile(conf, float(n), 1.0)
    return n * lam_t / kernels.gamma_quantile(1.0 - conf, float(n), 1.0)


def _rate_direction(direction: Direction) -> Direction:
    # low event rate is the favorable side when high SP is favorable
    return (Direction.LESS if direction is Direction.GREATER_OR_EQUAL
            else Direction.GREATER_OR_EQUAL)


def survival_cutoffs(spec: SingleArmSpec) -> list[CutoffResult]:
    validate_spec(spec)
    if (spec.survival_mode is SurvivalMode.BINOMIAL_LANDMARK
            or spec.framework is Framework.BAYESIAN):
        return binary_cutoffs(_landmark_binary_spec(spec),
                              statistic="SURVIVAL_PROB")
    rate_dir = _rate_direction(spec.rules.direction)
    out = []
    for n in spec.sample_sizes:
        go_cuts = [_exp_rate_criterion_cutoff(n, c, spec.rules.direction,
                                              spec.landmark_time)
                   for c in spec.rules.go.criteria]
        nogo_cuts = [_exp_rate_criterion_cutoff(n, c, spec.rules.direction,
                                                spec.landmark_time)
                     for c in spec.rules.nogo.criteria]
        go_b = fold_cutoffs(go_cuts, spec.rules.go.combinator, rate_dir,
                            nogo=False)
        nogo_b = fold_cutoffs(nogo_cuts, spec.rules.nogo.combinator, rate_dir,
                              nogo=True)
        out.append(CutoffResult(
            n=n, go_boundary=go_b, nogo_boundary=nogo_b,
            overlap=continuous_overlap(go_b, nogo_b, rate_dir),
            boundary_statistic="EVENT_RATE", warnings=[]))
    return out


def survival_oc(spec: SingleArmSpec,
                cutoffs: list[CutoffResult] | None = None
                ) -> OperatingCharacteristics:
    validate_spec(spec)
    if (spec.survival_mode is SurvivalMode.BINOMIAL_LANDMARK
            or spec.framework is Framework.BAYESIAN):
        return binary_oc(_landmark_binary_spec(spec))
    if cutoffs is None:
        cutoffs = survival_cutoffs(spec)
    rate_dir = _rate_direction(spec.rules.direction)
    rows = []
    for cut in cutoffs:
        n = cut.n
        for sp in spec.true_values:
            if not 0.0 < sp < 1.0:
                raise DomainError("exponential-rate scenarios need SP in (0, 1)")
            lam = -math.log(sp) / spec.landmark_time

            def rate_cdf(v: float) -> float:
                # rate = n / S with S ~ Gamma(n, lam)
                if v <= 0.0:
                    return 0.0
                return 1.0 - kernels.gamma_cdf(n / v, float(n), lam)

            p_go, p_nogo, p_inc = continuous_region_probs(
                cut.go_boundary, cut.nogo_boundary, rate_dir,
                spec.rules.dominated, rate_cdf)
            rows.append(OCRow(n=n, true_value=sp, p_go=p_go, p_nogo=p_nogo,
                              p_inconclusive=p_inc))
    return OperatingCharacteristics(rows)


# -------------------------------------------------------------- dispatch ----

def cutoffs(spec: SingleArmSpec) -> list[CutoffResult]:
    if spec.endpoint is SingleArmEndpoint.BINARY:
        return binary_cutoffs(spec)
    if spec.endpoint is SingleArmEndpoint.SURVIVAL:
        return survival_cutoffs(spec)
    return normal_cutoffs(spec)


def oc(spec: SingleArmSpec,
       cuts: list[CutoffResult] | None = None) -> OperatingCharacteristics:
    if spec.endpoint is SingleArmEndpoint.BINARY:
        return binary_oc(spec, cuts)
    if spec.endpoint is SingleArmEndpoint.SURVIVAL:
        return survival_oc(spec, cuts)
    return normal_oc(spec, cuts)
