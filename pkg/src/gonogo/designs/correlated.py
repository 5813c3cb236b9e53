"""Single-arm designs with two correlated endpoints.

Binary-binary pairs are driven by a 2x2 multinomial over the per-subject
outcome cells; normal-normal pairs by a bivariate normal.  Cutoffs are always
marginal (delegated to the single-arm machinery); the joint operating
characteristics combine the per-endpoint decisions under a BOTH or EITHER
policy: BOTH needs every endpoint Go for an overall Go and any endpoint No-Go
forces an overall No-Go; EITHER mirrors that.
"""

import functools
import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .. import kernels
from ..errors import ValidationError
from ..rules import Direction, EvidenceProfile, RuleSet, evaluate
from . import _parallel, single_arm
from .common import (
    DECISION_GO,
    DECISION_INCONCLUSIVE,
    DECISION_NOGO,
    CutoffResult,
    Framework,
    OCRow,
    OperatingCharacteristics,
    mc_probs,
)
from .single_arm import SingleArmEndpoint, SingleArmSpec


class JointGo(Enum):
    BOTH = "both"
    EITHER = "either"


def cells_from_marginals(px: float, py: float, rho: float
                         ) -> tuple[float, float, float, float]:
    """(p00, p01, p10, p11) matching the marginals and correlation.

    Moment matching: p11 = px*py + rho*sqrt(px(1-px)py(1-py)); the result must
    respect the Frechet bounds or the correlation is infeasible.
    """
    if not (0.0 <= px <= 1.0 and 0.0 <= py <= 1.0):
        raise ValidationError("marginal rates must lie in [0, 1]")
    p11 = px * py + rho * math.sqrt(px * (1.0 - px) * py * (1.0 - py))
    p10 = px - p11
    p01 = py - p11
    p00 = 1.0 - px - py + p11
    cells = (p00, p01, p10, p11)
    if any(c < -1e-12 for c in cells):
        raise ValidationError(
            f"correlation {rho} is infeasible for marginals ({px}, {py}): "
            "a cell probability would be negative")
    return tuple(max(c, 0.0) for c in cells)


@dataclass
class CorrelatedBinarySpec:
    n: int
    cells: tuple[float, float, float, float]   # (p00, p01, p10, p11)
    rules_x: RuleSet
    rules_y: RuleSet
    joint_go: JointGo
    framework: Framework
    prior_x: kernels.BetaParams | None = None
    prior_y: kernels.BetaParams | None = None
    seed: int = 425
    n_sims: int = 10_000
    workers: int = 1


@dataclass
class CorrelatedNormalSpec:
    n: int
    means: tuple[float, float]
    sds: tuple[float, float]
    rho: float
    rules_x: RuleSet
    rules_y: RuleSet
    joint_go: JointGo
    framework: Framework
    known_variance: bool = True
    prior_x: kernels.NormalParams | kernels.NormalGammaParams | None = None
    prior_y: kernels.NormalParams | kernels.NormalGammaParams | None = None
    seed: int = 425
    n_sims: int = 10_000
    workers: int = 1


def validate_binary_spec(spec: CorrelatedBinarySpec) -> CorrelatedBinarySpec:
    if spec.n < 1:
        raise ValidationError("n must be >= 1")
    if len(spec.cells) != 4 or any(c < 0.0 for c in spec.cells):
        raise ValidationError("cells must be 4 nonnegative probabilities")
    if abs(sum(spec.cells) - 1.0) > 1e-12:
        raise ValidationError("cell probabilities must sum to 1")
    return spec


def validate_normal_spec(spec: CorrelatedNormalSpec) -> CorrelatedNormalSpec:
    if spec.n < 1:
        raise ValidationError("n must be >= 1")
    if any(s <= 0.0 for s in spec.sds):
        raise ValidationError("sds must be > 0")
    if not -1.0 < spec.rho < 1.0:
        raise ValidationError("rho must lie in (-1, 1)")
    return spec


def binary_marginals(cells) -> tuple[float, float]:
    p00, p01, p10, p11 = cells
    return p10 + p11, p01 + p11


# --------------------------------------------------------- marginal specs ---

def _binary_endpoint_spec(spec: CorrelatedBinarySpec, which: str
                          ) -> SingleArmSpec:
    px, py = binary_marginals(spec.cells)
    rules = spec.rules_x if which == "x" else spec.rules_y
    prior = spec.prior_x if which == "x" else spec.prior_y
    return SingleArmSpec(
        endpoint=SingleArmEndpoint.BINARY, framework=spec.framework,
        sample_sizes=[spec.n], rules=rules,
        true_values=[px if which == "x" else py],
        prior=prior if spec.framework is Framework.BAYESIAN else None,
        seed=spec.seed, n_sims=spec.n_sims)


def _normal_endpoint_spec(spec: CorrelatedNormalSpec, which: str
                          ) -> SingleArmSpec:
    i = 0 if which == "x" else 1
    rules = spec.rules_x if which == "x" else spec.rules_y
    prior = spec.prior_x if which == "x" else spec.prior_y
    endpoint = (SingleArmEndpoint.NORMAL_KNOWN_VAR if spec.known_variance
                else SingleArmEndpoint.NORMAL_UNKNOWN_VAR)
    return SingleArmSpec(
        endpoint=endpoint, framework=spec.framework,
        sample_sizes=[spec.n], rules=rules, true_values=[spec.means[i]],
        sigma=spec.sds[i],
        prior=prior if spec.framework is Framework.BAYESIAN else None,
        seed=spec.seed, n_sims=spec.n_sims)


def marginal_cutoffs(spec) -> dict[str, CutoffResult]:
    """Per-endpoint cutoffs from the endpoint's marginal distribution."""
    if isinstance(spec, CorrelatedBinarySpec):
        validate_binary_spec(spec)
        builder = _binary_endpoint_spec
    else:
        validate_normal_spec(spec)
        builder = _normal_endpoint_spec
    return {w: single_arm.cutoffs(builder(spec, w))[0] for w in ("x", "y")}


# ------------------------------------------------------------ combination ---

def combine_codes(code_x, code_y, joint_go: JointGo):
    """Overall decision from per-endpoint decisions (vectorized)."""
    cx = np.asarray(code_x, dtype=np.int8)
    cy = np.asarray(code_y, dtype=np.int8)
    out = np.full(np.broadcast(cx, cy).shape, DECISION_INCONCLUSIVE,
                  dtype=np.int8)
    if joint_go is JointGo.BOTH:
        out[(cx == DECISION_GO) & (cy == DECISION_GO)] = DECISION_GO
        out[(cx == DECISION_NOGO) | (cy == DECISION_NOGO)] = DECISION_NOGO
    else:
        out[(cx == DECISION_GO) | (cy == DECISION_GO)] = DECISION_GO
        out[(cx == DECISION_NOGO) & (cy == DECISION_NOGO)] = DECISION_NOGO
    return out


# ------------------------------------------------------------- binary -------

def joint_success_pmf(n: int, cells) -> np.ndarray:
    """pmf of the per-endpoint success counts (X, Y) as an (n+1, n+1) matrix.

    Convolves the per-subject 4-cell kernel one subject at a time; each step
    is a vectorized shift-and-add, so the total cost is O(n^3) flops in numpy.
    """
    p00, p01, p10, p11 = cells
    pmf = np.zeros((n + 1, n + 1))
    pmf[0, 0] = 1.0
    for _ in range(n):
        nxt = p00 * pmf
        nxt[1:, :] += p10 * pmf[:-1, :]
        nxt[:, 1:] += p01 * pmf[:, :-1]
        nxt[1:, 1:] += p11 * pmf[:-1, :-1]
        pmf = nxt
    return pmf


def binary_joint_oc(spec: CorrelatedBinarySpec,
                    method: str = "enumerate") -> OperatingCharacteristics:
    validate_binary_spec(spec)
    code_x = single_arm.binary_decision_codes(
        _binary_endpoint_spec(spec, "x"), spec.n)
    code_y = single_arm.binary_decision_codes(
        _binary_endpoint_spec(spec, "y"), spec.n)
    joint = combine_codes(code_x[:, None], code_y[None, :], spec.joint_go)
    px, _ = binary_marginals(spec.cells)
    if method == "enumerate":
        pmf = joint_success_pmf(spec.n, spec.cells)
        p_go = float(pmf[joint == DECISION_GO].sum())
        p_nogo = float(pmf[joint == DECISION_NOGO].sum())
        row = OCRow(n=spec.n, true_value=px, p_go=p_go, p_nogo=p_nogo,
                    p_inconclusive=1.0 - p_go - p_nogo)
    elif method == "simulate":
        fn = functools.partial(_binary_sim_chunk, spec, joint)
        parts = _parallel.run_chunks(fn, spec.n_sims, spec.workers)
        go = sum(p[0] for p in parts)
        nogo = sum(p[1] for p in parts)
        p_go, p_nogo, p_inc, se = mc_probs(go, nogo, spec.n_sims)
        row = OCRow(n=spec.n, true_value=px, p_go=p_go, p_nogo=p_nogo,
                    p_inconclusive=p_inc, mc_se=se)
    else:
        raise ValidationError(f"unknown method {method!r}")
    return OperatingCharacteristics([row])


def _binary_sim_chunk(spec: CorrelatedBinarySpec, joint_codes: np.ndarray,
                      chunk_idx: int, size: int) -> tuple[int, int]:
    gen = kernels.rng_substream(spec.seed, chunk_idx).generator()
    counts = gen.multinomial(spec.n, list(spec.cells), size=size)
    x = counts[:, 2] + counts[:, 3]
    y = counts[:, 1] + counts[:, 3]
    codes = joint_codes[x, y]
    return int(np.sum(codes == DECISION_GO)), int(np.sum(codes == DECISION_NOGO))


# ------------------------------------------------------------- normal -------

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(256)


def decision_intervals(cut: CutoffResult, direction: Direction, dominated
                       ) -> dict[int, tuple[float, float]]:
    """Disjoint statistic intervals per decision code, after resolving any
    contested region in favor of the dominated (winning) rule."""
    from ..rules import DominatedRule

    g, ng = cut.go_boundary, cut.nogo_boundary
    inf = math.inf
    if direction is Direction.GREATER_OR_EQUAL:
        go_lo = inf if g is None else (
            g if (ng is None or dominated is DominatedRule.GO) else max(g, ng))
        nogo_hi = -inf if ng is None else (
            ng if (g is None or dominated is DominatedRule.NOGO)
            else min(ng, g))
        return {DECISION_GO: (go_lo, inf),
                DECISION_NOGO: (-inf, nogo_hi),
                DECISION_INCONCLUSIVE: (nogo_hi, go_lo)}
    go_hi = -inf if g is None else (
        g if (ng is None or dominated is DominatedRule.GO) else min(g, ng))
    nogo_lo = inf if ng is None else (
        ng if (g is None or dominated is DominatedRule.NOGO) else max(ng, g))
    return {DECISION_GO: (-inf, go_hi),
            DECISION_NOGO: (nogo_lo, inf),
            DECISION_INCONCLUSIVE: (go_hi, nogo_lo)}


def bivariate_normal_rectangle(ax: float, bx: float, ay: float, by: float,
                               mx: float, my: float, sx: float, sy: float,
                               rho: float) -> float:
    """P(ax <= X < bx, ay <= Y < by) for a bivariate normal, by quadrature of
    the conditional normal over X."""
    lo = max(ax, mx - 12.0 * sx)
    hi = min(bx, mx + 12.0 * sx)
    if hi <= lo:
        return 0.0
    mid, half = 0.5 * (hi + lo), 0.5 * (hi - lo)
    x = mid + half * _GL_NODES
    w = half * _GL_WEIGHTS
    fx = kernels.vec(kernels.normal_pdf, (x - mx) / sx) / sx
    cm = my + rho * sy / sx * (x - mx)
    cs = sy * math.sqrt(1.0 - rho * rho)
    upper = kernels.vec(kernels.normal_cdf, (min(by, my + 12.0 * sy) - cm) / cs)
    lower = kernels.vec(kernels.normal_cdf, (max(ay, my - 12.0 * sy) - cm) / cs)
    return float(np.sum(w * fx * np.clip(upper - lower, 0.0, 1.0)))


def normal_joint_oc(spec: CorrelatedNormalSpec) -> OperatingCharacteristics:
    validate_normal_spec(spec)
    if not spec.known_variance:
        return _normal_joint_oc_sim(spec)
    cuts = marginal_cutoffs(spec)
    iv_x = decision_intervals(cuts["x"], spec.rules_x.direction,
                              spec.rules_x.dominated)
    iv_y = decision_intervals(cuts["y"], spec.rules_y.direction,
                              spec.rules_y.dominated)
    sx = spec.sds[0] / math.sqrt(spec.n)
    sy = spec.sds[1] / math.sqrt(spec.n)
    p = {DECISION_GO: 0.0, DECISION_NOGO: 0.0, DECISION_INCONCLUSIVE: 0.0}
    for cx, (ax, bx) in iv_x.items():
        for cy, (ay, by) in iv_y.items():
            if bx <= ax or by <= ay:
                continue
            overall = int(combine_codes(cx, cy, spec.joint_go))
            p[overall] += bivariate_normal_rectangle(
                ax, bx, ay, by, spec.means[0], spec.means[1], sx, sy, spec.rho)
    total = sum(p.values())
    row = OCRow(n=spec.n, true_value=spec.means[0],
                p_go=p[DECISION_GO] / total, p_nogo=p[DECISION_NOGO] / total,
                p_inconclusive=1.0 - (p[DECISION_GO] + p[DECISION_NOGO]) / total)
    return OperatingCharacteristics([row])


def _normal_evidence(rules: RuleSet, framework: Framework, prior, xbar: float,
                     s2: float, n: int) -> EvidenceProfile:
    """GE-tail evidence for every rule threshold from one endpoint's summary
    statistics (unknown-variance path)."""
    ge = rules.direction is Direction.GREATER_OR_EQUAL
    probs = {}
    if framework is Framework.BAYESIAN:
        _, marginal = kernels.posterior_normal_gamma(xbar, s2, n, prior)
    for t in set(rules.go.thresholds + rules.nogo.thresholds):
        if framework is Framework.BAYESIAN:
            tail = marginal.sf(t)
        else:
            se = math.sqrt(s2 / n)
            tail = 1.0 - kernels.t_cdf((t - xbar) / se, n - 1)
        probs[t] = min(max(tail if ge else 1.0 - tail, 0.0), 1.0)
    return EvidenceProfile(probs)


def _normal_sim_chunk(spec: CorrelatedNormalSpec, chunk_idx: int,
                      size: int) -> tuple[int, int]:
    gen = kernels.rng_substream(spec.seed, chunk_idx).generator()
    sx, sy = spec.sds
    cov = [[sx * sx, spec.rho * sx * sy], [spec.rho * sx * sy, sy * sy]]
    go = nogo = 0
    for _ in range(size):
        data = gen.multivariate_normal(spec.means, cov, size=spec.n)
        stats = []
        for col, rules, prior in ((0, spec.rules_x, spec.prior_x),
                                  (1, spec.rules_y, spec.prior_y)):
            xbar = float(data[:, col].mean())
            s2 = float(data[:, col].var(ddof=1)) if spec.n > 1 else 0.0
            ev = _normal_evidence(rules, spec.framework, prior, xbar, s2,
                                  spec.n)
            dec = evaluate(rules, ev)
            stats.append({"go": DECISION_GO, "nogo": DECISION_NOGO,
                          "inconclusive": DECISION_INCONCLUSIVE}[dec.value.value])
        overall = int(combine_codes(stats[0], stats[1], spec.joint_go))
        if overall == DECISION_GO:
            go += 1
        elif overall == DECISION_NOGO:
            nogo += 1
    return go, nogo


def _normal_joint_oc_sim(spec: CorrelatedNormalSpec) -> OperatingCharacteristics:
    fn = functools.partial(_normal_sim_chunk, spec)
    parts = _parallel.run_chunks(fn, spec.n_sims, spec.workers)
    go = sum(p[0] for p in parts)
    nogo = sum(p[1] for p in parts)
    p_go, p_nogo, p_inc, se = mc_probs(go, nogo, spec.n_sims)
    return OperatingCharacteristics([OCRow(
        n=spec.n, true_value=spec.means[0], p_go=p_go, p_nogo=p_nogo,
        p_inconclusive=p_inc, mc_se=se)])


def joint_oc(spec, cutoffs=None, method: str = "enumerate"
             ) -> OperatingCharacteristics:
    if isinstance(spec, CorrelatedBinarySpec):
        return binary_joint_oc(spec, method=method)
    return normal_joint_oc(spec)
