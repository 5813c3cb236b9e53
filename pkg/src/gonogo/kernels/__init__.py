"""Numerical substrate: special functions, exact bounds, posteriors, RNG.

The scalar special functions come from a compiled Cython extension when it
built, falling back to a pure-Python twin of the same algorithms.  Set
``GONOGO_PURE_PYTHON=1`` to force the fallback (used by the backend benchmark
and the cross-checking tests).
"""

import os

from . import _special_py

if os.environ.get("GONOGO_PURE_PYTHON") == "1":
    _impl = _special_py
    BACKEND = "python"
else:
    try:
        from . import _special_cy as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _impl = _special_py
        BACKEND = "python"

from .special import (  # noqa: E402
    beta_cdf,
    beta_pdf,
    beta_quantile,
    binom_cdf,
    binom_pmf,
    binom_pmf_vector,
    binom_sf,
    clopper_pearson_lower,
    clopper_pearson_upper,
    gamma_cdf,
    gamma_quantile,
    log_gamma,
    normal_cdf,
    normal_pdf,
    normal_quantile,
    t_cdf,
    t_pdf,
    t_quantile,
    vec,
)
from .posteriors import (  # noqa: E402
    BetaParams,
    NormalGammaParams,
    NormalParams,
    StudentT,
    jeffreys_beta,
    posterior_beta,
    posterior_normal_gamma,
    posterior_normal_known_var,
)
from .rng import RngStream, rng_substream, substream_generators  # noqa: E402
from .mvt import equicoordinate_t_quantile  # noqa: E402

__all__ = [
    "BACKEND",
    "BetaParams",
    "NormalGammaParams",
    "NormalParams",
    "RngStream",
    "StudentT",
    "beta_cdf",
    "beta_pdf",
    "beta_quantile",
    "binom_cdf",
    "binom_pmf",
    "binom_pmf_vector",
    "binom_sf",
    "clopper_pearson_lower",
    "clopper_pearson_upper",
    "equicoordinate_t_quantile",
    "gamma_cdf",
    "gamma_quantile",
    "jeffreys_beta",
    "log_gamma",
    "normal_cdf",
    "normal_pdf",
    "normal_quantile",
    "posterior_beta",
    "posterior_normal_gamma",
    "posterior_normal_known_var",
    "rng_substream",
    "substream_generators",
    "t_cdf",
    "t_pdf",
    "t_quantile",
    "vec",
]
