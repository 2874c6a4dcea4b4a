"""Statistical primitives for the evaluation mechanisms.

Pearson correlation, a two-tailed paired t-test, descending competition
ranking, and the rank averaging/negation step that makes human ranks
directionally comparable with similarity degrees.

The Student-t tail mass is computed through the regularized incomplete
beta function (continued-fraction evaluation), keeping this module free of
heavyweight numeric dependencies. Sample statistics use the n-1
denominator throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class LengthMismatch(ValueError):
    pass


class EmptyInput(ValueError):
    pass


class NoVariability(ValueError):
    """A series with zero variance cannot be correlated."""


class ZeroVariance(ValueError):
    """All paired differences are equal; the t statistic is undefined."""


@dataclass(frozen=True)
class TTestResult:
    t: float
    df: int
    p: float


@dataclass(frozen=True)
class RankVector:
    ranks: list[float]
    subjects: list[str] | None = None


def pearson(x: list[float], y: list[float]) -> float:
    """Sample Pearson correlation coefficient, in [-1, 1]."""
    if len(x) != len(y):
        raise LengthMismatch(f"series lengths differ: {len(x)} vs {len(y)}")
    n = len(x)
    if n < 2:
        raise NoVariability("need at least two observations to correlate")
    mean_x = sum(x) / n
    mean_y = sum(y) / n
    var_x = sum((v - mean_x) ** 2 for v in x)
    var_y = sum((v - mean_y) ** 2 for v in y)
    if var_x == 0.0:
        raise NoVariability("first series has no variability")
    if var_y == 0.0:
        raise NoVariability("second series has no variability")
    cov = sum((a - mean_x) * (b - mean_y) for a, b in zip(x, y))
    # sqrt before multiplying: the product of two tiny variances can
    # underflow to zero even when both are strictly positive
    denom = math.sqrt(var_x) * math.sqrt(var_y)
    if denom == 0.0:
        raise NoVariability("series variability is below float resolution")
    return min(1.0, max(-1.0, cov / denom))


def paired_t_test(x: list[float], y: list[float]) -> TTestResult:
    """Two-tailed paired t-test on the differences x - y."""
    if len(x) != len(y):
        raise LengthMismatch(f"series lengths differ: {len(x)} vs {len(y)}")
    n = len(x)
    if n < 2:
        raise EmptyInput("need at least two pairs")
    diffs = [a - b for a, b in zip(x, y)]
    mean_d = sum(diffs) / n
    var_d = sum((d - mean_d) ** 2 for d in diffs) / (n - 1)
    if var_d == 0.0:
        raise ZeroVariance("all paired differences are equal")
    t = mean_d / math.sqrt(var_d / n)
    df = n - 1
    return TTestResult(t, df, student_t_two_tailed_p(t, df))


def student_t_two_tailed_p(t: float, df: int) -> float:
    """P(|T| >= |t|) for Student's t with ``df`` degrees of freedom."""
    if df < 1:
        raise ValueError("degrees of freedom must be >= 1")
    x = df / (df + t * t)
    return _regularized_incomplete_beta(df / 2.0, 0.5, x)


def _regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                + a * math.log(x) + b * math.log1p(-x))
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_continued_fraction(a, b, x) / a
    return 1.0 - front * _beta_continued_fraction(b, a, 1.0 - x) / b


def _beta_continued_fraction(a: float, b: float, x: float) -> float:
    # Lentz's algorithm; converges to relative error well below 1e-8.
    max_iterations = 300
    eps = 1e-15
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, max_iterations + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            break
    return h


def rank_descending(values: list[float], subjects: list[str] | None = None) -> RankVector:
    """Competition ranking, highest value first.

    Ties share the smallest applicable rank and the following ranks are
    skipped: [80, 80, 60] -> [1, 1, 3].
    """
    if not values:
        raise EmptyInput("cannot rank an empty list")
    if subjects is not None and len(subjects) != len(values):
        raise LengthMismatch("subjects are not aligned with values")
    ranks = [1.0 + sum(1 for other in values if other > v) for v in values]
    return RankVector(ranks, subjects)


def negate_average_ranks(rankings: list[RankVector] | list[list[float]]) -> list[float]:
    """Element-wise mean across respondents, then negation.

    Negating makes "better rank" (lower number) come out as the larger
    value, matching the direction of similarity degrees.
    """
    rows = [r.ranks if isinstance(r, RankVector) else list(r) for r in rankings]
    if not rows or not rows[0]:
        raise EmptyInput("no rankings to average")
    width = len(rows[0])
    if any(len(row) != width for row in rows):
        raise LengthMismatch("rankings have differing lengths")
    return [-sum(row[i] for row in rows) / len(rows) for i in range(width)]
