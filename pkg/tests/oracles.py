"""Independent reference computations used only by the tests."""
import math

import numpy as np


def brute_modulus(values, k):
    """All-pairs scan: max |v_j - v_i| over 0 < j - i <= k."""
    best = 0.0
    n = len(values)
    for i in range(n):
        for j in range(i + 1, min(n, i + k + 1)):
            d = abs(values[j] - values[i])
            if d > best:
                best = d
    return best


def brute_profile(values):
    return np.array([brute_modulus(values, k) for k in range(len(values))])


def sorted_quantile(column, q):
    """ceil(q R)-th smallest by explicit sorting."""
    s = sorted(column)
    return s[max(math.ceil(q * len(s)), 1) - 1]


def brute_holder(values, g):
    """(sup, holder) by a double loop over lags and pairs."""
    sup = max(abs(v) for v in values)
    best = 0.0
    for k in range(1, len(values)):
        d = brute_modulus(values, k)
        root = math.sqrt(g[k])
        if root == 0:
            if d > 0:
                return sup, math.inf
            continue
        best = max(best, d / root)
    return sup, best


def random_table(rng, m, normalized=True):
    g = np.concatenate(([0.0], np.cumsum(rng.exponential(size=m))))
    if normalized:
        g = g / g[-1]
        g[-1] = 1.0
    return g
