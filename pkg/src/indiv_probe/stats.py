"""Pairwise significance testing between class proxy samples.

The default test is the two-sided Mann-Whitney U. Dispatch:

* exact path when the pooled size is at most EXACT_MAX (16) and the
  pooled values carry no ties: two-sided p = 2 * P(U >= max(U1, U2))
  over the exact permutation distribution, clipped at 1;
* otherwise the normal approximation with tie correction and a 0.5
  continuity correction.

Proxy-score distributions are unknown and class sizes are wildly
unequal, which is why a rank test is the default; a Welch t-test is
available for sensitivity analysis. P-values are raw (no multiple-
comparison correction) by default; `bonferroni=True` scales the
off-diagonal entries by the number of distinct pairs.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy import stats as sps

from .errors import ConfigError, DimensionMismatchError, EmptySampleError
from .metrics import ClassProxy, sig6

__all__ = [
    "EXACT_MAX",
    "PValueMatrix",
    "mann_whitney_p",
    "welch_p",
    "pvalue_matrix",
    "pvalues_to_csv",
    "parse_pvalue_csv",
]

EXACT_MAX = 16


def _validate_sample(name: str, sample) -> np.ndarray:
    a = np.asarray(sample, dtype=np.float64)
    if a.ndim != 1 or a.size == 0:
        raise EmptySampleError(f"sample {name} is empty or not flat")
    if not np.all(np.isfinite(a)):
        raise ConfigError(f"sample {name} has non-finite values")
    return a


@lru_cache(maxsize=None)
def _u_counts(n: int, m: int) -> tuple[int, ...]:
    """Exact null distribution of U for group sizes (n, m), no ties.

    counts[u] = number of rank labelings with U statistic u; classic
    recurrence f(n, m, u) = f(n-1, m, u-m) + f(n, m-1, u).
    """
    if n == 0 or m == 0:
        return (1,)
    shifted = _u_counts(n - 1, m)
    kept = _u_counts(n, m - 1)
    out = [0] * (n * m + 1)
    for u, c in enumerate(shifted):
        out[u + m] += c
    for u, c in enumerate(kept):
        out[u] += c
    return tuple(out)


def _mann_whitney_exact(u_big: float, n: int, m: int) -> float:
    counts = _u_counts(n, m)
    total = sum(counts)
    # no ties, so U1 and U2 are integers
    tail = sum(counts[int(u_big):])
    return min(1.0, (2 * tail) / total)


def _mann_whitney_normal(u_big: float, n: int, m: int, ranked: np.ndarray) -> float:
    big_n = n + m
    _, tie_sizes = np.unique(ranked, return_counts=True)
    tie_term = float(np.sum(tie_sizes.astype(np.float64) ** 3 - tie_sizes))
    var = (n * m / 12.0) * ((big_n + 1) - tie_term / (big_n * (big_n - 1)))
    if var <= 0.0:
        return 1.0  # every pooled value identical: indistinguishable
    z = (u_big - n * m / 2.0 - 0.5) / math.sqrt(var)
    return min(1.0, max(0.0, math.erfc(z / math.sqrt(2.0))))


def mann_whitney_p(x, y) -> float:
    """Two-sided Mann-Whitney U p-value (see module docstring for dispatch)."""
    a = _validate_sample("x", x)
    b = _validate_sample("y", y)
    n, m = a.size, b.size
    pooled = np.concatenate([a, b])
    ranks = sps.rankdata(pooled)  # average ranks for ties
    r1 = float(np.sum(ranks[:n]))
    u1 = r1 - n * (n + 1) / 2.0
    u2 = n * m - u1
    u_big = max(u1, u2)
    no_ties = np.unique(pooled).size == pooled.size
    if n + m <= EXACT_MAX and no_ties:
        return _mann_whitney_exact(u_big, n, m)
    return _mann_whitney_normal(u_big, n, m, pooled)


def welch_p(x, y) -> float:
    """Two-sided Welch t-test p-value (unequal variances)."""
    a = _validate_sample("x", x)
    b = _validate_sample("y", y)
    res = sps.ttest_ind(a, b, equal_var=False)
    p = float(res.pvalue)
    if math.isnan(p):
        # zero variance on both sides: degenerate, fall back on identity of means
        return 1.0 if float(np.mean(a)) == float(np.mean(b)) else 0.0
    return p


_TESTS = {"mannwhitney": mann_whitney_p, "welch": welch_p}


@dataclass(frozen=True)
class PValueMatrix:
    """Symmetric p-value matrix over classes ordered by descending mean proxy.

    Higher mean proxy = less individuated, so the least individuated
    class sits in the first row (on top) and the most individuated in
    the last.
    """

    classes: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        k = len(self.classes)
        if v.shape != (k, k):
            raise DimensionMismatchError(
                f"matrix shape {v.shape} does not match {k} classes"
            )
        if len(set(self.classes)) != k:
            raise ConfigError("class names must be distinct")
        if not np.array_equal(v, v.T):
            raise ConfigError("p-value matrix is not symmetric")
        if np.any(np.diagonal(v) != 1.0):
            raise ConfigError("p-value matrix diagonal must be 1.0")
        if np.any(v < 0.0) or np.any(v > 1.0):
            raise ConfigError("p-values must lie in [0, 1]")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)


def pvalue_matrix(
    classes: Sequence[ClassProxy],
    test: str = "mannwhitney",
    bonferroni: bool = False,
) -> PValueMatrix:
    """All-pairs significance matrix, rows/columns sorted by descending
    class mean (ties broken alphabetically)."""
    if len(classes) < 2:
        raise ConfigError("need at least two classes")
    if test not in _TESTS:
        raise ConfigError(f"unknown test {test!r} (use mannwhitney or welch)")
    test_fn = _TESTS[test]
    ordered = sorted(classes, key=lambda c: (-c.mean, c.category))
    k = len(ordered)
    values = np.eye(k)
    samples = [c.values for c in ordered]
    scale = k * (k - 1) // 2 if bonferroni else 1
    for i in range(k):
        for j in range(i + 1, k):
            p = min(1.0, test_fn(samples[i], samples[j]) * scale)
            values[i, j] = p
            values[j, i] = p
    return PValueMatrix(classes=tuple(c.category for c in ordered), values=values)


def pvalues_to_csv(m: PValueMatrix, fh) -> None:
    """CSV with class-name header row/column, values at 6 significant digits."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["class", *m.classes])
    for i, name in enumerate(m.classes):
        w.writerow([name, *[sig6(x) for x in m.values[i]]])


def parse_pvalue_csv(fh) -> PValueMatrix:
    """Inverse of pvalues_to_csv (used to re-run graph analysis offline)."""
    rows = list(csv.reader(fh))
    if not rows or rows[0][:1] != ["class"]:
        raise ConfigError("p-value CSV must start with a 'class' header row")
    names = tuple(rows[0][1:])
    if len(rows) != len(names) + 1:
        raise ConfigError("p-value CSV row count does not match header")
    values = np.ones((len(names), len(names)))
    for i, row in enumerate(rows[1:]):
        if len(row) != len(names) + 1 or row[0] != names[i]:
            raise ConfigError(f"p-value CSV row {i + 2} is malformed")
        values[i] = [float(x) for x in row[1:]]
    return PValueMatrix(classes=names, values=values)
