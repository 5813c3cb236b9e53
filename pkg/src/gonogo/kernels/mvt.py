"""Equicoordinate quantile of the multivariate t by Monte Carlo."""

import math

import numpy as np

from .rng import RngStream


class NotPositiveSemidefiniteError(ValueError):
    code = "NOT_PSD"


def _psd_factor(corr: np.ndarray) -> np.ndarray:
    corr = np.asarray(corr, dtype=float)
    if corr.ndim != 2 or corr.shape[0] != corr.shape[1]:
        raise NotPositiveSemidefiniteError("correlation matrix must be square")
    if not np.allclose(corr, corr.T, atol=1e-10):
        raise NotPositiveSemidefiniteError("correlation matrix must be symmetric")
    if not np.allclose(np.diag(corr), 1.0, atol=1e-10):
        raise NotPositiveSemidefiniteError("correlation matrix must have unit diagonal")
    w, v = np.linalg.eigh(corr)
    if w.min() < -1e-10:
        raise NotPositiveSemidefiniteError("correlation matrix is not PSD")
    w = np.clip(w, 0.0, None)
    return v * np.sqrt(w)


def equicoordinate_t_quantile(corr: np.ndarray, df: float, conf: float,
                              stream: RngStream,
                              n_draws: int = 200_000) -> tuple[float, float]:
    """c with Pr(max_k T_k <= c) = conf, plus its Monte Carlo standard error.

    ``df = inf`` gives the multivariate-normal reference.
    """
    if not 0.0 < conf < 1.0:
        raise ValueError("conf must be in (0, 1)")
    if df < 1:
        raise ValueError("df must be >= 1")
    factor = _psd_factor(corr)
    m = factor.shape[0]
    rng = stream.generator()
    z = rng.standard_normal((n_draws, m)) @ factor.T
    if math.isfinite(df):
        w = rng.chisquare(df, size=n_draws) / df
        z = z / np.sqrt(w)[:, None]
    mx = np.sort(z.max(axis=1))
    c = float(np.quantile(mx, conf))
    # order-statistic CI on the quantile -> standard error
    half = 1.959963984540054 * math.sqrt(conf * (1.0 - conf) / n_draws)
    ilo = max(0, int(math.floor((conf - half) * n_draws)))
    ihi = min(n_draws - 1, int(math.ceil((conf + half) * n_draws)))
    se = float(mx[ihi] - mx[ilo]) / (2.0 * 1.959963984540054)
    return c, se
