"""Sample estimator of the extended Gini index.

For a sample of size ``n`` the estimator averages ``X_{k:S} - X_{j:S}`` over
all size-``m`` subsets ``S`` and divides by the sample mean times ``m``:

    (m-1)! / ((n-1)(n-2)...(n-m+1)) * sum_S [X_{k:S} - X_{j:S}] / sum(X)

Sorting the sample turns the subset sum into a weighted sum of order
statistics: ``x_(t)`` is the k-th smallest of ``C(t-1, k-1) C(n-t, m-k)``
subsets. :func:`extended_gini_estimate` uses those weights (O(n log n));
:func:`extended_gini_estimate_naive` enumerates subsets and is kept as an
oracle.
"""

import itertools
import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import CapacityError, DegenerateSampleError, DomainError, InsufficientSampleError
from .special import binom, log_binom
from .theory import IndexSpec

# largest n for which subset weights are formed exactly in integers
EXACT_MAX_N = 60
NAIVE_MAX_SUBSETS = 10**7


@dataclass(frozen=True, eq=False)
class Sample:
    """Validated one-dimensional sample of non-negative finite observations."""

    values: np.ndarray

    def __post_init__(self):
        try:
            arr = np.array(self.values, dtype=float).ravel()
        except (TypeError, ValueError) as exc:
            raise DomainError(f"sample values must be numeric: {exc}") from None
        if arr.size < 1:
            raise DomainError("sample must contain at least one observation")
        if not np.all(np.isfinite(arr)):
            raise DomainError("sample values must be finite")
        if np.any(arr < 0):
            raise DomainError("sample values must be non-negative")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def n(self):
        return int(self.values.size)

    def sorted(self):
        return np.sort(self.values, kind="stable")

    @property
    def total(self):
        return math.fsum(self.values)

    @property
    def mean(self):
        return self.total / self.n

    def scaled(self, factor):
        return Sample(self.values * factor)

    def __len__(self):
        return self.n


def as_sample(data):
    return data if isinstance(data, Sample) else Sample(data)


@dataclass(frozen=True)
class EstimateResult:
    value: float
    spec: IndexSpec
    n: int
    method: Literal["fast", "naive"]

    def __float__(self):
        return float(self.value)


@dataclass(frozen=True)
class HeatmapGrid:
    """Estimates for every ``(m, j, k)`` with ``2 <= m <= m_max``, ``j <= k``."""

    rows: tuple

    def __post_init__(self):
        keys = [row[:3] for row in self.rows]
        if len(set(keys)) != len(keys):
            raise DomainError("duplicate (m, j, k) rows in heatmap grid")
        for m, j, k in keys:
            IndexSpec(m, j, k)

    def value(self, m, j, k):
        for row in self.rows:
            if row[:3] == (m, j, k):
                return row[3]
        raise KeyError((m, j, k))

    def matrix(self, m):
        """``m x m`` array with ``[j-1, k-1]`` filled for ``j <= k`` and NaN below."""
        out = np.full((m, m), np.nan)
        for mm, j, k, est in self.rows:
            if mm == m:
                out[j - 1, k - 1] = est
        return out


def _check(sample, spec):
    if not isinstance(spec, IndexSpec):
        raise DomainError("spec must be an IndexSpec")
    if sample.n < spec.m:
        raise InsufficientSampleError(f"need at least m = {spec.m} observations, got n = {sample.n}")
    total = sample.total
    if total <= 0.0:
        raise DegenerateSampleError("sample sums to zero; the index is undefined")
    return total


def rank_weights_exact(n, m, rank):
    """``[C(t-1, rank-1) C(n-t, m-rank) for t = 1..n]`` as exact integers.

    Built by the ratio recurrence in ``t``; every step divides exactly.
    """
    out = [0] * n
    left, right = 1, binom(n - rank, m - rank)
    for t in range(rank, n - (m - rank) + 1):
        out[t - 1] = left * right
        # advance to t + 1
        left = left * t // (t - rank + 1)
        if n - t > 0:
            right = right * (n - t - (m - rank)) // (n - t)
    return out


def rank_weights_scaled(n, m, rank):
    """``C(t-1, rank-1) C(n-t, m-rank) / C(n, m)`` for ``t = 1..n``, via log-gamma."""
    t = np.arange(1, n + 1)
    logw = log_binom(t - 1, rank - 1) + log_binom(n - t, m - rank) - log_binom(n, m)
    return np.exp(logw)


def order_statistic_coefficients(n, spec):
    """Coefficients ``c_t`` with ``estimate = sum_t c_t x_(t) / sum(x)``."""
    m, j, k = spec.as_tuple()
    if n <= EXACT_MAX_N:
        upper = rank_weights_exact(n, m, k)
        lower = rank_weights_exact(n, m, j)
        denom = m * binom(n, m)
        # int / int rounds correctly even for huge operands
        return np.array([n * (u - lo) / denom for u, lo in zip(upper, lower)])
    return n / m * (rank_weights_scaled(n, m, k) - rank_weights_scaled(n, m, j))


def extended_gini_estimate(sample, spec):
    """Extended Gini index estimate from sorted-sample combinatorial weights."""
    sample = as_sample(sample)
    total = _check(sample, spec)
    if spec.j == spec.k:
        return EstimateResult(0.0, spec, sample.n, "fast")
    coef = order_statistic_coefficients(sample.n, spec)
    value = math.fsum(coef * sample.sorted()) / total
    return EstimateResult(value, spec, sample.n, "fast")


def naive_normalizer(n, m):
    """``(m-1)! / ((n-1)(n-2)...(n-m+1))`` from exact integers."""
    return math.factorial(m - 1) / math.prod(range(n - m + 1, n))


def extended_gini_estimate_naive(sample, spec):
    """Literal enumeration of every size-``m`` subset. Test oracle only."""
    sample = as_sample(sample)
    total = _check(sample, spec)
    n, m = sample.n, spec.m
    if binom(n, m) > NAIVE_MAX_SUBSETS:
        raise CapacityError(f"C({n}, {m}) subsets exceeds the enumeration guard of {NAIVE_MAX_SUBSETS}")
    gaps = []
    for subset in itertools.combinations(sample.values.tolist(), m):
        ordered = sorted(subset)
        gaps.append(ordered[spec.k - 1] - ordered[spec.j - 1])
    value = naive_normalizer(n, m) * math.fsum(gaps) / total
    return EstimateResult(value, spec, n, "naive")


def gini_estimate(sample):
    """Standard Gini estimate, ``sum_{i<l} |x_i - x_l| / ((n-1) sum(x))``."""
    return extended_gini_estimate(sample, IndexSpec.gini())


def mth_gini_estimate(sample, m):
    """m-th Gini estimate: mean range of size-``m`` subsets over ``m`` times the mean."""
    return extended_gini_estimate(sample, IndexSpec.mth_gini(m))


def heatmap_grid(sample, m_max):
    """Estimates for all ``(m, j, k)`` up to ``m_max``, in lexicographic order."""
    sample = as_sample(sample)
    if isinstance(m_max, bool) or int(m_max) != m_max or not 2 <= m_max <= sample.n:
        raise DomainError(f"m_max must be an integer in [2, n = {sample.n}], got {m_max!r}")
    rows = []
    for m in range(2, int(m_max) + 1):
        for j in range(1, m + 1):
            for k in range(j, m + 1):
                est = extended_gini_estimate(sample, IndexSpec(m, j, k))
                rows.append((m, j, k, est.value))
    return HeatmapGrid(tuple(rows))
