"""Run-sample statistics: t confidence intervals, Mann-Whitney U, Friedman."""
import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import special

from .errors import StatisticsError
from .kernels import midranks

SIGNIFICANCE = 0.05
EXACT_THRESHOLD = 12


@dataclass
class SampleSet:
    label: str
    values: np.ndarray
    censored: np.ndarray = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 1 or self.values.size == 0:
            raise StatisticsError(f"sample {self.label!r} must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(self.values)):
            raise StatisticsError(f"sample {self.label!r} contains non-finite values")
        if self.censored is None:
            self.censored = np.zeros(self.values.size, dtype=bool)
        else:
            self.censored = np.asarray(self.censored, dtype=bool)
            if self.censored.shape != self.values.shape:
                raise StatisticsError("censored flags must match the values")

    def __len__(self):
        return self.values.size


class Description(NamedTuple):
    mean: float
    median: float
    ci99_halfwidth: float
    success_count: int


def t_quantile(p, df):
    """Quantile of Student's t through the inverse regularised incomplete beta."""
    if not 0.0 < p < 1.0:
        raise StatisticsError("p must lie in (0, 1)")
    if p == 0.5:
        return 0.0
    tail = 2.0 * min(p, 1.0 - p)
    x = special.betaincinv(0.5 * df, 0.5, tail)
    t = math.sqrt(df * (1.0 / x - 1.0))
    return t if p > 0.5 else -t


def describe(sample, level=0.99):
    """Mean, median, t-interval half-width and number of uncensored runs."""
    if not isinstance(sample, SampleSet):
        sample = SampleSet("sample", sample)
    v = sample.values
    if v.size < 2:
        raise StatisticsError("confidence interval needs at least two values")
    sd = float(np.std(v, ddof=1))
    half = t_quantile(0.5 + level / 2.0, v.size - 1) * sd / math.sqrt(v.size)
    return Description(
        float(np.mean(v)), float(np.median(v)), half, int(np.count_nonzero(~sample.censored))
    )


class MannWhitneyResult(NamedTuple):
    u: float
    p_value: float
    method: str
    significant: bool


def _values(s):
    return s.values if isinstance(s, SampleSet) else np.asarray(s, dtype=np.float64)


def mann_whitney_u(a, b, method="auto", exact_threshold=EXACT_THRESHOLD, alpha=SIGNIFICANCE):
    """Two-sided Wilcoxon rank-sum / Mann-Whitney U test.

    ``u`` is the statistic of ``a`` (midranks for ties). With ``method="auto"``
    the p-value is exact, by enumerating every split of the pooled ranks,
    when ``len(a) + len(b) <= exact_threshold``, and otherwise from the
    tie-corrected normal approximation with a 0.5 continuity correction.
    """
    x, y = _values(a), _values(b)
    na, nb = x.size, y.size
    if na == 0 or nb == 0:
        raise StatisticsError("both samples must be non-empty")
    pooled = np.concatenate([x, y])
    ranks = midranks(pooled)
    u = float(ranks[:na].sum() - na * (na + 1) / 2.0)
    if method == "auto":
        method = "exact" if na + nb <= exact_threshold else "normal"
    mean_u = na * nb / 2.0
    if np.all(pooled == pooled[0]):
        p = 1.0
    elif method == "exact":
        p = _exact_p(ranks, na, u)
    elif method == "normal":
        n = na + nb
        _, counts = np.unique(pooled, return_counts=True)
        tie = float(np.sum(counts ** 3 - counts)) / (n * (n - 1))
        var = na * nb / 12.0 * ((n + 1) - tie)
        # continuity correction keeps agreement with the exact test at small n
        z = max(abs(u - mean_u) - 0.5, 0.0) / math.sqrt(var)
        p = min(1.0, math.erfc(z / math.sqrt(2.0)))
    else:
        raise StatisticsError(f"unknown method {method!r}")
    return MannWhitneyResult(u, p, method, p < alpha)


def _exact_p(ranks, na, u_obs):
    n = ranks.size
    mean_u = na * (n - na) / 2.0
    obs = abs(u_obs - mean_u) - 1e-9
    offset = na * (na + 1) / 2.0
    hits = total = 0
    for idx in itertools.combinations(range(n), na):
        total += 1
        if abs(ranks[list(idx)].sum() - offset - mean_u) >= obs:
            hits += 1
    return hits / total


class FriedmanResult(NamedTuple):
    statistic: float
    p_value: float
    mean_ranks: np.ndarray


def friedman(matrix):
    """Friedman test on a ``(k treatments, n blocks)`` array.

    Ranks are taken within each block (midranks on ties) and the statistic
    is ``12 n / (k (k + 1)) * sum_j (Rbar_j - (k + 1) / 2)^2``, referred to
    chi-square with ``k - 1`` degrees of freedom.
    """
    m = np.asarray(matrix, dtype=np.float64)
    if m.ndim != 2:
        raise StatisticsError("Friedman test needs a 2-D (treatments x blocks) array")
    k, n = m.shape
    if k < 2 or n < 2:
        raise StatisticsError("Friedman test needs k >= 2 treatments and n >= 2 blocks")
    ranks = np.empty_like(m)
    for j in range(n):
        ranks[:, j] = midranks(m[:, j])
    rbar = ranks.mean(axis=1)
    stat = 12.0 * n / (k * (k + 1)) * float(np.sum((rbar - (k + 1) / 2.0) ** 2))
    stat = max(stat, 0.0)
    p = float(special.chdtrc(k - 1, stat)) if stat > 0 else 1.0
    return FriedmanResult(stat, p, rbar)
