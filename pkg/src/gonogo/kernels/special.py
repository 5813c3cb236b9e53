"""Scalar special-function API plus vectorized helpers and exact bounds."""

import numpy as np

from . import _impl

log_gamma = _impl.log_gamma
normal_cdf = _impl.normal_cdf
normal_pdf = _impl.normal_pdf
normal_quantile = _impl.normal_quantile
beta_cdf = _impl.beta_cdf
beta_pdf = _impl.beta_pdf
beta_quantile = _impl.beta_quantile
gamma_cdf = _impl.gamma_cdf
gamma_quantile = _impl.gamma_quantile
t_pdf = _impl.t_pdf
t_cdf = _impl.t_cdf
t_quantile = _impl.t_quantile
binom_pmf = _impl.binom_pmf
binom_cdf = _impl.binom_cdf
binom_sf = _impl.binom_sf


def vec(fn, *args) -> np.ndarray:
    """Broadcast a scalar kernel over numpy arguments."""
    return np.frompyfunc(fn, len(args), 1)(*args).astype(float)


def binom_pmf_vector(n: int, p: float) -> np.ndarray:
    """pmf over the full support x = 0..n, computed in log space."""
    if p == 0.0:
        out = np.zeros(n + 1)
        out[0] = 1.0
        return out
    if p == 1.0:
        out = np.zeros(n + 1)
        out[n] = 1.0
        return out
    x = np.arange(n + 1, dtype=float)
    logc = (log_gamma(n + 1.0)
            - vec(log_gamma, x + 1.0)
            - vec(log_gamma, n - x + 1.0))
    return np.exp(logc + x * np.log(p) + (n - x) * np.log1p(-p))


def clopper_pearson_lower(x: int, n: int, conf: float) -> float:
    """Exact one-sided lower bound for a binomial proportion; 0 at x = 0."""
    if not 0 <= x <= n:
        raise ValueError("clopper_pearson_lower requires 0 <= x <= n")
    if not 0.0 < conf < 1.0:
        raise ValueError("clopper_pearson_lower requires conf in (0, 1)")
    if x == 0:
        return 0.0
    return beta_quantile(1.0 - conf, float(x), float(n - x + 1))


def clopper_pearson_upper(x: int, n: int, conf: float) -> float:
    """Exact one-sided upper bound for a binomial proportion; 1 at x = n."""
    if not 0 <= x <= n:
        raise ValueError("clopper_pearson_upper requires 0 <= x <= n")
    if not 0.0 < conf < 1.0:
        raise ValueError("clopper_pearson_upper requires conf in (0, 1)")
    if x == n:
        return 1.0
    return beta_quantile(conf, float(x + 1), float(n - x))
