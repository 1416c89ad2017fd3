"""One-tailed Mann-Whitney U test.

The statistic counts pairs where the first sample beats the second upward
(ties count half), so small U supports "first tends smaller". Groups of at
most eight points each get an exact permutation enumeration; larger groups
use the normal approximation with tie correction and continuity correction.
"""

from __future__ import annotations

import math
from collections import Counter
from itertools import combinations

EXACT_LIMIT = 8


def _u_statistic(a, b) -> float:
    u = 0.0
    for x in a:
        for y in b:
            if x > y:
                u += 1.0
            elif x == y:
                u += 0.5
    return u


def mann_whitney_u(a, b, alternative: str = "less") -> tuple[float, float]:
    """Return (U, p) for the alternative that `a` is stochastically less
    (or "greater") than `b`."""
    a = [float(v) for v in a]
    b = [float(v) for v in b]
    if not a or not b:
        raise ValueError("both samples must be nonempty")
    if alternative not in ("less", "greater"):
        raise ValueError(f"unknown alternative {alternative!r}")
    if alternative == "greater":
        u_rev, p = mann_whitney_u(b, a, "less")
        return len(a) * len(b) - u_rev, p
    u = _u_statistic(a, b)
    n, m = len(a), len(b)
    if n <= EXACT_LIMIT and m <= EXACT_LIMIT:
        pooled = a + b
        total = 0
        hits = 0
        for first in combinations(range(n + m), n):
            first_set = set(first)
            aa = [pooled[i] for i in first]
            bb = [pooled[i] for i in range(n + m) if i not in first_set]
            total += 1
            if _u_statistic(aa, bb) <= u:
                hits += 1
        return u, hits / total
    # normal approximation with tie correction
    big_n = n + m
    mean = n * m / 2.0
    tie_sum = sum(c**3 - c for c in Counter(a + b).values())
    var = (n * m / 12.0) * (big_n + 1.0 - tie_sum / (big_n * (big_n - 1.0)))
    if var <= 0.0:
        return u, 1.0 if u >= mean else 0.0
    z = (u + 0.5 - mean) / math.sqrt(var)
    p = 0.5 * math.erfc(-z / math.sqrt(2.0))
    return u, p
