"""Conjugate posterior updates: Beta-binomial, Normal-normal, Normal-Gamma."""

import math
from dataclasses import dataclass

from . import special


@dataclass(frozen=True)
class BetaParams:
    a: float
    b: float

    def __post_init__(self):
        if not (self.a > 0.0 and self.b > 0.0):
            raise ValueError("BetaParams requires a > 0 and b > 0")


@dataclass(frozen=True)
class NormalParams:
    mean: float
    sd: float

    def __post_init__(self):
        if not self.sd > 0.0:
            raise ValueError("NormalParams requires sd > 0")


@dataclass(frozen=True)
class NormalGammaParams:
    mean: float
    kappa: float
    shape: float
    rate: float

    def __post_init__(self):
        if not (self.kappa > 0.0 and self.shape > 0.0 and self.rate > 0.0):
            raise ValueError("NormalGammaParams requires kappa, shape, rate > 0")


@dataclass(frozen=True)
class StudentT:
    """Location-scale Student-t, the marginal posterior of a Normal-Gamma mean."""

    loc: float
    scale: float
    df: float

    def cdf(self, x: float) -> float:
        return special.t_cdf((x - self.loc) / self.scale, self.df)

    def sf(self, x: float) -> float:
        return 1.0 - self.cdf(x)


def jeffreys_beta() -> BetaParams:
    return BetaParams(0.5, 0.5)


def posterior_beta(x: int, n: int, prior: BetaParams) -> BetaParams:
    if not 0 <= x <= n:
        raise ValueError("posterior_beta requires 0 <= x <= n")
    return BetaParams(prior.a + x, prior.b + (n - x))


def posterior_normal_known_var(xbar: float, n: int, sigma: float,
                               prior: NormalParams) -> NormalParams:
    """Precision-weighted update for a normal mean with known sampling sd."""
    if n < 1:
        raise ValueError("posterior_normal_known_var requires n >= 1")
    if sigma <= 0.0:
        raise ValueError("posterior_normal_known_var requires sigma > 0")
    prec = 1.0 / prior.sd ** 2 + n / sigma ** 2
    mean = (prior.mean / prior.sd ** 2 + n * xbar / sigma ** 2) / prec
    return NormalParams(mean, math.sqrt(1.0 / prec))


def posterior_normal_gamma(xbar: float, s2: float, n: int,
                           prior: NormalGammaParams) -> tuple[NormalGammaParams, StudentT]:
    """Normal-Gamma conjugate update; also returns the marginal t for the mean.

    ``s2`` is the unbiased sample variance (requires n >= 2 to be defined,
    n = 1 is accepted with s2 = 0).
    """
    if n < 1:
        raise ValueError("posterior_normal_gamma requires n >= 1")
    if s2 < 0.0:
        raise ValueError("posterior_normal_gamma requires s2 >= 0")
    kappa_n = prior.kappa + n
    mean_n = (prior.kappa * prior.mean + n * xbar) / kappa_n
    shape_n = prior.shape + n / 2.0
    rate_n = (prior.rate + 0.5 * (n - 1) * s2
              + prior.kappa * n * (xbar - prior.mean) ** 2 / (2.0 * kappa_n))
    post = NormalGammaParams(mean_n, kappa_n, shape_n, rate_n)
    marginal = StudentT(loc=mean_n,
                        scale=math.sqrt(rate_n / (shape_n * kappa_n)),
                        df=2.0 * shape_n)
    return post, marginal
