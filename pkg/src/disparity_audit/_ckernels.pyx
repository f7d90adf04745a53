# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled numeric kernels; mirrors _pykernels.py operation for operation."""

from libc.math cimport exp, fabs, log, isinf
from math import lgamma as _py_lgamma

cdef double EPS = 1e-16
cdef double TINY = 1e-300
cdef int MAX_ITER = 100000
cdef double TIE_SLACK = 1e-7


cdef double _lower_series(double s, double x, double log_pre) noexcept nogil:
    cdef double term = 1.0 / s
    cdef double total = term
    cdef double ap = s
    cdef int i
    for i in range(MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if fabs(term) < fabs(total) * EPS:
            break
    return total * exp(log_pre)


cdef double _upper_continued_fraction(double s, double x, double log_pre) noexcept nogil:
    cdef double b = x + 1.0 - s
    cdef double c = 1.0 / TINY
    cdef double d = 1.0 / b
    cdef double h = d
    cdef double an, delta
    cdef int i
    for i in range(1, MAX_ITER):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if fabs(d) < TINY:
            d = TINY
        c = b + an / c
        if fabs(c) < TINY:
            c = TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if fabs(delta - 1.0) < EPS:
            break
    return exp(log_pre) * h


cpdef double upper_gamma_q(double s, double x):
    cdef double q, log_pre
    if x == 0.0:
        return 1.0
    if isinf(x):
        return 0.0
    # CPython's lgamma, so both backends share the prefactor bit for bit
    log_pre = s * log(x) - x - <double>_py_lgamma(s)
    if x < s + 1.0:
        q = 1.0 - _lower_series(s, x, log_pre)
        return q if q > 0.0 else 0.0
    q = _upper_continued_fraction(s, x, log_pre)
    return q if q < 1.0 else 1.0


cdef double _weights_pass(
    long row0, long col0, long n, long lo, long hi, long a, double bound, double *w_obs
) noexcept nogil:
    """Sum weights <= bound (all weights when bound < 0); record the weight at a.

    Visits the mode, then downward, then upward, like the Python generator.
    """
    cdef long d0 = n - row0 - col0
    cdef long mode = (row0 + 1) * (col0 + 1) // (n + 2)
    cdef long x
    cdef double w
    cdef double total = 0.0
    if mode < lo:
        mode = lo
    if mode > hi:
        mode = hi
    w = 1.0
    if mode == a:
        w_obs[0] = w
    if bound < 0.0 or w <= bound:
        total += w
    x = mode
    while x > lo:
        w = w * <double>(x * (d0 + x)) / <double>((row0 - x + 1) * (col0 - x + 1))
        if w == 0.0:
            break
        if x - 1 == a:
            w_obs[0] = w
        if bound < 0.0 or w <= bound:
            total += w
        x -= 1
    w = 1.0
    x = mode
    while x < hi:
        w = w * <double>((row0 - x) * (col0 - x)) / <double>((x + 1) * (d0 + x + 1))
        if w == 0.0:
            break
        if x + 1 == a:
            w_obs[0] = w
        if bound < 0.0 or w <= bound:
            total += w
        x += 1
    return total


cpdef tuple fisher_two_sided(long a, long b, long c, long d):
    cdef long row0 = a + b
    cdef long col0 = a + c
    cdef long n = a + b + c + d
    cdef long lo = col0 - (c + d)
    cdef long hi = row0 if row0 < col0 else col0
    cdef double w_obs = 0.0
    cdef double total, tail, p
    if lo < 0:
        lo = 0
    with nogil:
        total = _weights_pass(row0, col0, n, lo, hi, a, -1.0, &w_obs)
        tail = _weights_pass(row0, col0, n, lo, hi, a, w_obs * (1.0 + TIE_SLACK), &w_obs)
    p = tail / total
    return w_obs / total, (p if p < 1.0 else 1.0)
