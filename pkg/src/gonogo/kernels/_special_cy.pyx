# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled scalar special functions.

Twin of ``_special_py`` with identical algorithms; selected at import when the
extension built. Keep the two files in sync — the test suite asserts
agreement between backends on dense grids.
"""

from libc.math cimport log, log1p, exp, sqrt, sin, isnan, isfinite, INFINITY, M_PI

cdef double _EPS = 1e-15
cdef double _FPMIN = 1e-300
cdef double _LN_SQRT_2PI = 0.9189385332046727417803297

cdef double[9] _LANCZOS
_LANCZOS[0] = 0.99999999999980993
_LANCZOS[1] = 676.5203681218851
_LANCZOS[2] = -1259.1392167224028
_LANCZOS[3] = 771.32342877765313
_LANCZOS[4] = -176.61502916214059
_LANCZOS[5] = 12.507343278686905
_LANCZOS[6] = -0.13857109526572012
_LANCZOS[7] = 9.9843695780195716e-6
_LANCZOS[8] = 1.5056327351493116e-7


cdef double _log_gamma(double x) except? -1e308:
    cdef double a, t
    cdef int i
    if x <= 0.0:
        raise ValueError("log_gamma requires x > 0")
    if x < 0.5:
        return log(M_PI / sin(M_PI * x)) - _log_gamma(1.0 - x)
    x -= 1.0
    a = _LANCZOS[0]
    t = x + 7.5
    for i in range(1, 9):
        a += _LANCZOS[i] / (x + i)
    return _LN_SQRT_2PI + (x + 0.5) * log(t) - t + log(a)


def log_gamma(double x):
    return _log_gamma(x)


def log_beta(double a, double b):
    return _log_gamma(a) + _log_gamma(b) - _log_gamma(a + b)


cdef double _gamma_p_series(double a, double x):
    cdef double ap = a
    cdef double term = 1.0 / a
    cdef double total = term
    cdef int i
    for i in range(1000):
        ap += 1.0
        term *= x / ap
        total += term
        if term < total * _EPS and term > -total * _EPS:
            break
    return total * exp(-x + a * log(x) - _log_gamma(a))


cdef double _gamma_q_cf(double a, double x):
    cdef double b = x + 1.0 - a
    cdef double c = 1.0 / _FPMIN
    cdef double d = 1.0 / b
    cdef double h = d
    cdef double an, delta
    cdef int i
    for i in range(1, 1000):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if d < _FPMIN and d > -_FPMIN:
            d = _FPMIN
        c = b + an / c
        if c < _FPMIN and c > -_FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if delta - 1.0 < _EPS and delta - 1.0 > -_EPS:
            break
    return h * exp(-x + a * log(x) - _log_gamma(a))


cdef double _reg_gamma_p(double a, double x) except? -1:
    if a <= 0.0 or x < 0.0:
        raise ValueError("reg_gamma_p requires a > 0, x >= 0")
    if x == 0.0:
        return 0.0
    if x < a + 1.0:
        return _gamma_p_series(a, x)
    return 1.0 - _gamma_q_cf(a, x)


cdef double _reg_gamma_q(double a, double x) except? -1:
    if a <= 0.0 or x < 0.0:
        raise ValueError("reg_gamma_q requires a > 0, x >= 0")
    if x == 0.0:
        return 1.0
    if x < a + 1.0:
        return 1.0 - _gamma_p_series(a, x)
    return _gamma_q_cf(a, x)


def reg_gamma_p(double a, double x):
    return _reg_gamma_p(a, x)


def reg_gamma_q(double a, double x):
    return _reg_gamma_q(a, x)


cdef double _normal_pdf(double z):
    return exp(-0.5 * z * z - _LN_SQRT_2PI)


def normal_pdf(double z):
    return _normal_pdf(z)


cdef double _normal_cdf(double z) except? -1:
    cdef double u
    if isnan(z):
        raise ValueError("normal_cdf at NaN")
    if z == 0.0:
        return 0.5
    u = 0.5 * z * z
    if z < 0.0:
        if z < -1.0:
            return 0.5 * _reg_gamma_q(0.5, u)
        return 0.5 - 0.5 * _reg_gamma_p(0.5, u)
    if z > 1.0:
        return 1.0 - 0.5 * _reg_gamma_q(0.5, u)
    return 0.5 + 0.5 * _reg_gamma_p(0.5, u)


def normal_cdf(double z):
    return _normal_cdf(z)


cdef double _acklam(double p):
    cdef double q, r
    cdef double p_low = 0.02425
    if p < p_low:
        q = sqrt(-2.0 * log(p))
        return (((((-7.784894002430293e-03 * q - 3.223964580411365e-01) * q
                   - 2.400758277161838e+00) * q - 2.549732539343734e+00) * q
                 + 4.374664141464968e+00) * q + 2.938163982698783e+00) / \
               ((((7.784695709041462e-03 * q + 3.224671290700398e-01) * q
                  + 2.445134137142996e+00) * q + 3.754408661907416e+00) * q + 1.0)
    if p > 1.0 - p_low:
        return -_acklam(1.0 - p)
    q = p - 0.5
    r = q * q
    return (((((-3.969683028665376e+01 * r + 2.209460984245205e+02) * r
               - 2.759285104469687e+02) * r + 1.383577518672690e+02) * r
             - 3.066479806614716e+01) * r + 2.506628277459239e+00) * q / \
           (((((-5.447609879822406e+01 * r + 1.615858368580409e+02) * r
               - 1.556989798598866e+02) * r + 6.680131188771972e+01) * r
             - 1.328068155288572e+01) * r + 1.0)


cdef double _normal_quantile(double p) except? -1e308:
    cdef double z, e, d, u
    cdef int i
    if p <= 0.0 or p >= 1.0:
        raise ValueError("normal_quantile requires p in (0, 1)")
    z = _acklam(p)
    for i in range(2):
        e = _normal_cdf(z) - p
        d = _normal_pdf(z)
        if d <= 0.0:
            break
        u = e / d
        z -= u / (1.0 + 0.5 * z * u)
    return z


def normal_quantile(double p):
    return _normal_quantile(p)


cdef double _betacf(double a, double b, double x):
    cdef double qab = a + b
    cdef double qap = a + 1.0
    cdef double qam = a - 1.0
    cdef double c = 1.0
    cdef double d = 1.0 - qab * x / qap
    cdef double h, aa, delta
    cdef int m, m2
    if d < _FPMIN and d > -_FPMIN:
        d = _FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, 500):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if d < _FPMIN and d > -_FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if c < _FPMIN and c > -_FPMIN:
            c = _FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if d < _FPMIN and d > -_FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if c < _FPMIN and c > -_FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if delta - 1.0 < _EPS and delta - 1.0 > -_EPS:
            break
    return h


cdef double _reg_inc_beta(double a, double b, double x) except? -1:
    cdef double front
    if a <= 0.0 or b <= 0.0:
        raise ValueError("reg_inc_beta requires a, b > 0")
    if x < 0.0 or x > 1.0:
        raise ValueError("reg_inc_beta requires x in [0, 1]")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    front = exp(a * log(x) + b * log1p(-x)
                - (_log_gamma(a) + _log_gamma(b) - _log_gamma(a + b)))
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def reg_inc_beta(double a, double b, double x):
    return _reg_inc_beta(a, b, x)


def beta_cdf(double x, double a, double b):
    return _reg_inc_beta(a, b, x)


cdef double _beta_pdf(double x, double a, double b) except? -1:
    if x <= 0.0 or x >= 1.0:
        if (x == 0.0 and a >= 1.0) or (x == 1.0 and b >= 1.0):
            if x == 0.0 and a == 1.0:
                return b
            if x == 1.0 and b == 1.0:
                return a
            return 0.0
        raise ValueError("beta_pdf requires x in (0, 1)")
    return exp((a - 1.0) * log(x) + (b - 1.0) * log1p(-x)
               - (_log_gamma(a) + _log_gamma(b) - _log_gamma(a + b)))


def beta_pdf(double x, double a, double b):
    return _beta_pdf(x, a, b)


cdef double _beta_quantile(double q, double a, double b) except? -1:
    cdef double lo, hi, mean, sd, x, f, d, step, xn, diff
    cdef int i
    if q <= 0.0 or q >= 1.0:
        if q == 0.0:
            return 0.0
        if q == 1.0:
            return 1.0
        raise ValueError("beta_quantile requires q in [0, 1]")
    lo = 0.0
    hi = 1.0
    mean = a / (a + b)
    sd = sqrt(a * b / ((a + b) * (a + b) * (a + b + 1.0)))
    x = mean + sd * _acklam(q)
    if not (lo < x < hi):
        x = mean
    for i in range(200):
        f = _reg_inc_beta(a, b, x) - q
        if f > 0.0:
            hi = x
        else:
            lo = x
        if 0.0 < x < 1.0:
            d = _beta_pdf(x, a, b)
        else:
            d = 0.0
        if d > 0.0:
            xn = x - f / d
        else:
            xn = 0.5 * (lo + hi)
        if not (lo < xn < hi):
            xn = 0.5 * (lo + hi)
        diff = xn - x
        if diff < 0.0:
            diff = -diff
        if diff < 1e-16 + 1e-14 * (xn if xn > 0 else -xn):
            x = xn
            break
        x = xn
    return x


def beta_quantile(double q, double a, double b):
    return _beta_quantile(q, a, b)


def gamma_cdf(double x, double shape, double rate):
    if rate <= 0.0:
        raise ValueError("gamma_cdf requires rate > 0")
    if x <= 0.0:
        return 0.0
    return _reg_gamma_p(shape, rate * x)


def gamma_quantile(double q, double shape, double rate):
    cdef double z, h, x, lo, hi, f, d, xn, diff
    cdef int i
    if q <= 0.0 or q >= 1.0:
        raise ValueError("gamma_quantile requires q in (0, 1)")
    if rate <= 0.0 or shape <= 0.0:
        raise ValueError("gamma_quantile requires shape, rate > 0")
    z = _acklam(q)
    h = 2.0 / (9.0 * shape)
    x = shape * (1.0 - h + z * sqrt(h)) ** 3
    if x <= 0.0:
        x = shape * exp((log(q) + _log_gamma(shape + 1.0)) / shape)
    lo = 0.0
    hi = INFINITY
    for i in range(200):
        f = _reg_gamma_p(shape, x) - q
        if f > 0.0:
            hi = x
        else:
            lo = x
        d = exp((shape - 1.0) * log(x) - x - _log_gamma(shape))
        if d > 0.0:
            xn = x - f / d
        else:
            xn = 0.5 * (lo + hi) if isfinite(hi) else 2.0 * x
        if not (lo < xn < hi):
            xn = 0.5 * (lo + hi) if isfinite(hi) else 2.0 * x
        diff = xn - x
        if diff < 0.0:
            diff = -diff
        if diff < 1e-16 + 1e-14 * (xn if xn > 0 else -xn):
            x = xn
            break
        x = xn
    return x / rate


def t_pdf(double x, double df):
    if df <= 0.0:
        raise ValueError("t_pdf requires df > 0")
    return exp(_log_gamma((df + 1.0) / 2.0) - _log_gamma(df / 2.0)
               - 0.5 * log(df * M_PI)
               - 0.5 * (df + 1.0) * log1p(x * x / df))


cdef double _t_cdf(double x, double df) except? -1:
    cdef double tail
    if df <= 0.0:
        raise ValueError("t_cdf requires df > 0")
    if x == 0.0:
        return 0.5
    tail = 0.5 * _reg_inc_beta(df / 2.0, 0.5, df / (df + x * x))
    return tail if x < 0.0 else 1.0 - tail


def t_cdf(double x, double df):
    return _t_cdf(x, df)


def t_quantile(double p, double df):
    cdef double tail, z, x
    if p <= 0.0 or p >= 1.0:
        raise ValueError("t_quantile requires p in (0, 1)")
    if df <= 0.0:
        raise ValueError("t_quantile requires df > 0")
    if p == 0.5:
        return 0.0
    tail = p if p < 0.5 else 1.0 - p
    z = _beta_quantile(2.0 * tail, df / 2.0, 0.5)
    if z <= 0.0:
        return -INFINITY if p < 0.5 else INFINITY
    x = sqrt(df * (1.0 - z) / z)
    return -x if p < 0.5 else x


cdef double _binom_logpmf(long x, long n, double p) except? 1:
    cdef double logc
    if x < 0 or x > n:
        raise ValueError("binom_logpmf requires 0 <= x <= n")
    if p < 0.0 or p > 1.0:
        raise ValueError("binom_logpmf requires p in [0, 1]")
    if p == 0.0:
        return 0.0 if x == 0 else -INFINITY
    if p == 1.0:
        return 0.0 if x == n else -INFINITY
    logc = _log_gamma(n + 1.0) - _log_gamma(x + 1.0) - _log_gamma(n - x + 1.0)
    return logc + x * log(p) + (n - x) * log1p(-p)


def binom_logpmf(long x, long n, double p):
    return _binom_logpmf(x, n, p)


def binom_pmf(long x, long n, double p):
    cdef double lp = _binom_logpmf(x, n, p)
    return 0.0 if lp == -INFINITY else exp(lp)


def binom_cdf(long x, long n, double p):
    if x < 0 or x > n:
        raise ValueError("binom_cdf requires 0 <= x <= n")
    if p < 0.0 or p > 1.0:
        raise ValueError("binom_cdf requires p in [0, 1]")
    if x == n:
        return 1.0
    if p == 0.0:
        return 1.0
    if p == 1.0:
        return 0.0
    return _reg_inc_beta(n - x, x + 1.0, 1.0 - p)


def binom_sf(long x, long n, double p):
    if x <= 0:
        return 1.0
    if x > n:
        return 0.0
    if p == 0.0:
        return 0.0
    if p == 1.0:
        return 1.0
    return _reg_inc_beta(<double>x, n - x + 1.0, p)
