"""Independent brute-force oracles: plain Python loops over index tuples.

These deliberately avoid the package's vectorized kernels so the two
routes stay independent.
"""
import itertools
from math import fsum


def jensen_naive(f, p, x):
    xbar = fsum(pi * xi for pi, xi in zip(p, x))
    return fsum(pi * f(xi) for pi, xi in zip(p, x)) - f(xbar)


def chebychev_naive(f, p, x):
    xbar = fsum(pi * xi for pi, xi in zip(p, x))
    return fsum(pi * (xi - xbar) * f(xi) for pi, xi in zip(p, x))


def _tuples(sizes):
    return itertools.product(*[range(n) for n in sizes])


def grand_mean_naive(groups, q):
    return fsum(
        qi * fsum(pij * xij for pij, xij in zip(p, x))
        for qi, (p, x) in zip(q, groups)
    )


def jensen_k_naive(f, groups, q):
    sizes = [len(p) for p, _ in groups]
    xbar = grand_mean_naive(groups, q)
    total = []
    for t in _tuples(sizes):
        w = 1.0
        s = 0.0
        for i, j in enumerate(t):
            p, x = groups[i]
            w *= p[j]
            s += q[i] * x[j]
        total.append(w * f(s))
    return fsum(total) - f(xbar)


def chebychev_k_naive(f, groups, q):
    sizes = [len(p) for p, _ in groups]
    xbar = grand_mean_naive(groups, q)
    total = []
    for t in _tuples(sizes):
        w = 1.0
        s = 0.0
        for i, j in enumerate(t):
            p, x = groups[i]
            w *= p[j]
            s += q[i] * x[j]
        total.append(w * (s - xbar) * f(s))
    return fsum(total)


def jensen_k_identical_naive(f, p, q, x):
    """Single-weight-system k-fold form: every group shares (p, x)."""
    n = len(p)
    k = len(q)
    xbar = fsum(pi * xi for pi, xi in zip(p, x))
    total = []
    for t in itertools.product(range(n), repeat=k):
        w = 1.0
        s = 0.0
        for i, j in enumerate(t):
            w *= p[j]
            s += q[i] * x[j]
        total.append(w * f(s))
    return fsum(total) - f(xbar)


def lower_bound_rhs_naive(f, groups, q):
    sizes = [len(p) for p, _ in groups]
    xbar = grand_mean_naive(groups, q)
    total = []
    for t in _tuples(sizes):
        w = 1.0
        s = 0.0
        for i, j in enumerate(t):
            p, x = groups[i]
            w *= p[j]
            s += q[i] * x[j]
        total.append(w * f(abs(s - xbar)))
    return fsum(total)


def ratio_extrema_naive(p_groups, r_groups):
    sizes = [len(p) for p in p_groups]
    ratios = []
    for t in _tuples(sizes):
        num = 1.0
        den = 1.0
        for i, j in enumerate(t):
            num *= p_groups[i][j]
            den *= r_groups[i][j]
        ratios.append(num / den)
    return min(ratios), max(ratios)
