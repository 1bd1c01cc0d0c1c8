"""
Two-sample and contingency tests
"""

# stdlib
import logging
from dataclasses import dataclass
from typing import Optional, Sequence

# library
import numpy as np
from scipy import stats

# module
from forum_innovators.exceptions import InsufficientDataError, ValidationError

LOG = logging.getLogger(__name__)


@dataclass(frozen=True)
class TestResult:
    """Statistic, degrees of freedom and two-sided p-value of a test"""

    __test__ = False

    statistic: float
    p_value: float
    df: Optional[float] = None
    mean_a: Optional[float] = None
    mean_b: Optional[float] = None
    n_a: Optional[int] = None
    n_b: Optional[int] = None


def _sample(values: Sequence[float], minimum: int, name: str) -> np.ndarray:
    array = np.asarray(values, dtype=float)
    if array.ndim != 1 or len(array) < minimum:
        raise InsufficientDataError(f"sample {name} needs at least {minimum} values")
    return array


def welch_t(a: Sequence[float], b: Sequence[float]) -> TestResult:
    """Welch's unequal variance t-test with Welch-Satterthwaite df"""
    a, b = _sample(a, 2, "a"), _sample(b, 2, "b")
    n_a, n_b = len(a), len(b)
    mean_a, mean_b = float(a.mean()), float(b.mean())
    var_a, var_b = a.var(ddof=1) / n_a, b.var(ddof=1) / n_b
    se_sq = var_a + var_b
    if se_sq == 0:
        if mean_a == mean_b:
            LOG.warning("Welch t-test on two constant, equal samples; t=0, p=1")
            return TestResult(0.0, 1.0, float(n_a + n_b - 2), mean_a, mean_b, n_a, n_b)
        t_value = float(np.copysign(np.inf, mean_a - mean_b))
        return TestResult(t_value, 0.0, float(n_a + n_b - 2), mean_a, mean_b, n_a, n_b)
    t_value = (mean_a - mean_b) / np.sqrt(se_sq)
    df = se_sq**2 / (var_a**2 / (n_a - 1) + var_b**2 / (n_b - 1))
    p_value = float(2 * stats.t.sf(abs(t_value), df))
    return TestResult(
        float(t_value), min(1.0, p_value), float(df), mean_a, mean_b, n_a, n_b
    )


def mann_whitney_u(a: Sequence[float], b: Sequence[float]) -> TestResult:
    """Mann-Whitney U of sample a with tie and continuity corrected normal p-value

    U counts pairs with a_i > b_j, ties counting one half
    """
    a, b = _sample(a, 1, "a"), _sample(b, 1, "b")
    n_a, n_b = len(a), len(b)
    ranks = stats.rankdata(np.concatenate([a, b]))
    u_a = float(ranks[:n_a].sum() - n_a * (n_a + 1) / 2)
    n = n_a + n_b
    _, ties = np.unique(ranks, return_counts=True)
    tie_term = float((ties**3 - ties).sum())
    variance = n_a * n_b / 12 * ((n + 1) - tie_term / (n * (n - 1)))
    mean_a, mean_b = float(a.mean()), float(b.mean())
    if variance <= 0:
        LOG.warning("Mann-Whitney U on identical values; p=1")
        return TestResult(u_a, 1.0, None, mean_a, mean_b, n_a, n_b)
    z = (abs(u_a - n_a * n_b / 2) - 0.5) / np.sqrt(variance)
    p_value = float(min(1.0, 2 * stats.norm.sf(z)))
    return TestResult(u_a, p_value, None, mean_a, mean_b, n_a, n_b)


def chi2_independence(table: np.ndarray) -> TestResult:
    """Pearson chi-squared test of independence, no continuity correction"""
    table = np.asarray(table, dtype=float)
    if table.ndim != 2 or min(table.shape) < 2:
        raise ValidationError("contingency table must be at least 2 x 2")
    if (table.sum(axis=0) == 0).any() or (table.sum(axis=1) == 0).any():
        raise ValidationError("contingency table has an all-zero row or column")
    statistic, p_value, df, _ = stats.chi2_contingency(table, correction=False)
    return TestResult(float(statistic), float(p_value), float(df))
