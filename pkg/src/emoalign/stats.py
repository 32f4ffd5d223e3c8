"""Cohort statistics: summary tables and independent two-sample t-tests.

The two-sided p-value comes from the regularized incomplete beta function,
evaluated by a continued-fraction expansion. scipy is deliberately not used
here so the tests can check against it as an independent oracle.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

from .sentiment import CANONICAL_ORDER, ParticipantProfile, SentimentClass

DEFAULT_ALPHA = 0.05

# Row order for pairwise comparison tables.
TABLE_SENTIMENT_ORDER = (
    SentimentClass.HAPPINESS,
    SentimentClass.SADNESS,
    SentimentClass.ANGER,
    SentimentClass.NEUTRAL,
    SentimentClass.INTENSE_EMOTIONS,
)


class StatsError(ValueError):
    pass


class TooFewSamplesError(StatsError):
    pass


class Group(enum.Enum):
    IMAGES = "Images"
    TWEETS = "Tweets"
    FRIENDS = "Friends"


GROUP_PAIRS = (
    (Group.IMAGES, Group.TWEETS),
    (Group.IMAGES, Group.FRIENDS),
    (Group.TWEETS, Group.FRIENDS),
)


class Variant(enum.Enum):
    WELCH = "welch"
    POOLED = "pooled"


@dataclass(frozen=True)
class GroupSample:
    """Per-participant proportions of one sentiment within one group."""

    group: Group
    sentiment: SentimentClass
    values: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        for v in self.values:
            if not 0.0 <= v <= 1.0:
                raise StatsError(f"proportion {v} outside [0, 1]")


@dataclass(frozen=True)
class TTestResult:
    t_statistic: float
    df: float
    p_value: float
    significant: bool
    variant: Variant
    degenerate: bool = False
    sentiment: SentimentClass | None = None
    group1: str | None = None
    group2: str | None = None

    def __post_init__(self):
        if not 0.0 <= self.p_value <= 1.0:
            raise StatsError(f"p-value {self.p_value} outside [0, 1]")
        if math.isfinite(self.df) and self.df <= 0:
            raise StatsError(f"degrees of freedom must be positive, got {self.df}")

    def to_dict(self) -> dict:
        return {
            "sentiment": self.sentiment.value if self.sentiment else None,
            "group1": self.group1,
            "group2": self.group2,
            "t_statistic": self.t_statistic,
            "df": self.df,
            "p_value": self.p_value,
            "significant": self.significant,
            "variant": self.variant.value,
            "degenerate": self.degenerate,
        }


@dataclass(frozen=True)
class CellStats:
    mean: float
    std: float


@dataclass
class SummaryStats:
    """Mean/std of proportions per (group, sentiment), plus cohort size."""

    n: int
    cells: dict[Group, dict[SentimentClass, CellStats]]
    group_n: dict[Group, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "group_n": {g.value: self.group_n.get(g, self.n) for g in self.cells},
            "groups": {
                g.value: {
                    s.value: {"mean": c.mean, "std": c.std} for s, c in by_sentiment.items()
                }
                for g, by_sentiment in self.cells.items()
            },
        }


def mean_std(values: Sequence[float]) -> tuple[float, float]:
    """Sample mean and Bessel-corrected (n-1) standard deviation."""
    n = len(values)
    if n == 0:
        raise StatsError("empty sample")
    m = math.fsum(values) / n
    if n == 1:
        return m, 0.0
    var = math.fsum((v - m) ** 2 for v in values) / (n - 1)
    return m, math.sqrt(var)


def _profile_group_values(
    cohort: Sequence[ParticipantProfile], group: Group
) -> list[tuple[float, ...]]:
    if group is Group.TWEETS:
        return [p.tweet_dist.probs for p in cohort]
    if group is Group.FRIENDS:
        return [p.real_world_dist.probs for p in cohort]
    return [p.image_dist.probs for p in cohort if p.image_dist is not None]


def summary_stats(cohort: Sequence[ParticipantProfile]) -> SummaryStats:
    """Per-group, per-sentiment sample mean and standard deviation."""
    if not cohort:
        raise StatsError("empty cohort")
    cells: dict[Group, dict[SentimentClass, CellStats]] = {}
    group_n: dict[Group, int] = {}
    for group in Group:
        vectors = _profile_group_values(cohort, group)
        group_n[group] = len(vectors)
        cells[group] = {}
        for cls in CANONICAL_ORDER:
            if vectors:
                m, s = mean_std([vec[cls.index] for vec in vectors])
            else:
                m, s = 0.0, 0.0
            cells[group][cls] = CellStats(m, s)
    return SummaryStats(n=len(cohort), cells=cells, group_n=group_n)


def _betacf(a: float, b: float, x: float, tol: float = 1e-12, max_iter: int = 500) -> float:
    """Continued fraction for the regularized incomplete beta (Lentz's method)."""
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
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
        if abs(delta - 1.0) < tol:
            return h
    raise StatsError(f"incomplete beta did not converge for a={a}, b={b}, x={x}")


def betainc_reg(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b)."""
    if a <= 0 or b <= 0:
        raise StatsError("beta parameters must be positive")
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    log_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(x) + b * math.log1p(-x)
    )
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def student_t_p_value(t: float, df: float) -> float:
    """Two-sided p-value of a Student-t statistic: I_{df/(df+t^2)}(df/2, 1/2)."""
    if df <= 0:
        raise StatsError(f"degrees of freedom must be positive, got {df}")
    if math.isinf(t):
        return 0.0
    x = df / (df + t * t)
    p = betainc_reg(df / 2.0, 0.5, x)
    return min(max(p, 0.0), 1.0)


def ttest_from_summary(
    m1: float, s1: float, n1: int,
    m2: float, s2: float, n2: int,
    variant: Variant = Variant.WELCH,
    alpha: float = DEFAULT_ALPHA,
) -> TTestResult:
    """Independent two-sample t-test from summary statistics."""
    if n1 < 2 or n2 < 2:
        raise TooFewSamplesError(f"need at least 2 samples per group, got {n1} and {n2}")
    if s1 < 0 or s2 < 0:
        raise StatsError("standard deviations must be nonnegative")

    v1, v2 = s1 * s1, s2 * s2
    if v1 == 0.0 and v2 == 0.0:
        df = float(n1 + n2 - 2)
        if m1 == m2:
            return TTestResult(0.0, df, 1.0, False, variant, degenerate=True)
        t = math.inf if m1 > m2 else -math.inf
        return TTestResult(t, df, 0.0, True, variant, degenerate=True)

    if variant is Variant.WELCH:
        se2 = v1 / n1 + v2 / n2
        t = (m1 - m2) / math.sqrt(se2)
        df = se2 * se2 / ((v1 / n1) ** 2 / (n1 - 1) + (v2 / n2) ** 2 / (n2 - 1))
    else:
        pooled = ((n1 - 1) * v1 + (n2 - 1) * v2) / (n1 + n2 - 2)
        t = (m1 - m2) / math.sqrt(pooled * (1.0 / n1 + 1.0 / n2))
        df = float(n1 + n2 - 2)

    p = student_t_p_value(t, df)
    return TTestResult(t, df, p, p < alpha, variant)


def ttest_ind(
    xs: Sequence[float],
    ys: Sequence[float],
    variant: Variant = Variant.WELCH,
    alpha: float = DEFAULT_ALPHA,
) -> TTestResult:
    """Independent two-sample t-test on raw samples."""
    if len(xs) < 2 or len(ys) < 2:
        raise TooFewSamplesError(f"need at least 2 samples per group, got {len(xs)} and {len(ys)}")
    m1, s1 = mean_std(xs)
    m2, s2 = mean_std(ys)
    return ttest_from_summary(m1, s1, len(xs), m2, s2, len(ys), variant, alpha)


def pairwise_comparisons(
    cohort: Sequence[ParticipantProfile],
    variant: Variant = Variant.WELCH,
    alpha: float = DEFAULT_ALPHA,
) -> list[TTestResult]:
    """The 15 group-pair tests (5 sentiments x Images/Tweets, Images/Friends,
    Tweets/Friends), in canonical table row order."""
    if len(cohort) < 2:
        raise TooFewSamplesError("need at least 2 participants")
    samples: dict[Group, list[tuple[float, ...]]] = {
        group: _profile_group_values(cohort, group) for group in Group
    }
    results = []
    for cls in TABLE_SENTIMENT_ORDER:
        for g1, g2 in GROUP_PAIRS:
            xs = GroupSample(g1, cls, tuple(vec[cls.index] for vec in samples[g1]))
            ys = GroupSample(g2, cls, tuple(vec[cls.index] for vec in samples[g2]))
            base = ttest_ind(xs.values, ys.values, variant, alpha)
            results.append(
                TTestResult(
                    t_statistic=base.t_statistic,
                    df=base.df,
                    p_value=base.p_value,
                    significant=base.significant,
                    variant=base.variant,
                    degenerate=base.degenerate,
                    sentiment=cls,
                    group1=g1.value,
                    group2=g2.value,
                )
            )
    return results
