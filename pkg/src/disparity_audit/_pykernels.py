"""Pure-Python numeric kernels.

Same algorithms, constants and signatures as ``_ckernels.pyx``; used when
the compiled extension is not available.
"""

import math

EPS = 1e-16
TINY = 1e-300
MAX_ITER = 100000
TIE_SLACK = 1e-7


def _lower_series(s, x, log_pre):
    """P(s, x) by the power series; converges quickly for x < s + 1."""
    term = 1.0 / s
    total = term
    ap = s
    for _ in range(MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * EPS:
            break
    return total * math.exp(log_pre)


def _upper_continued_fraction(s, x, log_pre):
    """Q(s, x) by Legendre's continued fraction, modified Lentz evaluation."""
    b = x + 1.0 - s
    c = 1.0 / TINY
    d = 1.0 / b
    h = d
    for i in range(1, MAX_ITER):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < TINY:
            d = TINY
        c = b + an / c
        if abs(c) < TINY:
            c = TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < EPS:
            break
    return math.exp(log_pre) * h


def upper_gamma_q(s, x):
    """Regularized upper incomplete gamma Q(s, x); arguments pre-validated."""
    if x == 0.0:
        return 1.0
    if math.isinf(x):
        return 0.0
    # log(x**s * exp(-x) / Gamma(s))
    log_pre = s * math.log(x) - x - math.lgamma(s)
    if x < s + 1.0:
        return max(0.0, 1.0 - _lower_series(s, x, log_pre))
    return min(1.0, _upper_continued_fraction(s, x, log_pre))


def _hypergeom_weights(row0, col0, n, lo, hi):
    """Yield hypergeometric weights relative to the mode, mode first.

    Weights come from the ratio of successive terms, so no factorials or
    log-gamma values are involved; order: mode, then downward, then upward.
    """
    d0 = n - row0 - col0
    mode = (row0 + 1) * (col0 + 1) // (n + 2)
    mode = min(max(mode, lo), hi)
    yield mode, 1.0
    w = 1.0
    for x in range(mode, lo, -1):
        w = w * float(x * (d0 + x)) / float((row0 - x + 1) * (col0 - x + 1))
        if w == 0.0:
            break
        yield x - 1, w
    w = 1.0
    for x in range(mode, hi):
        w = w * float((row0 - x) * (col0 - x)) / float((x + 1) * (d0 + x + 1))
        if w == 0.0:
            break
        yield x + 1, w


def fisher_two_sided(a, b, c, d):
    """Two-sided Fisher exact test on [[a, b], [c, d]].

    Returns ``(observed point probability, p-value)``. Tables with the same
    margins whose point probability is at most the observed one (up to a
    relative slack of 1e-7) contribute to the p-value.
    """
    row0 = a + b
    col0 = a + c
    n = a + b + c + d
    lo = max(0, col0 - (c + d))
    hi = min(row0, col0)
    total = 0.0
    w_obs = 0.0
    for x, w in _hypergeom_weights(row0, col0, n, lo, hi):
        total += w
        if x == a:
            w_obs = w
    bound = w_obs * (1.0 + TIE_SLACK)
    tail = 0.0
    for _, w in _hypergeom_weights(row0, col0, n, lo, hi):
        if w <= bound:
            tail += w
    return w_obs / total, min(1.0, tail / total)
