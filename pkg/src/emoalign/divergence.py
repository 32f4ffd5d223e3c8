"""Distances between sentiment distributions and the 0-100 similarity score.

Three candidate distances are provided; the pipeline's similarity uses only the
L1 form (``emd``). KL and JS are expressed in nats.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .sentiment import SentimentDistribution

EMD_MAX = 2.0
JS_MAX = math.log(2.0)
KL_EPSILON = 1e-10


class Metric(enum.Enum):
    EMD = "emd"
    KL = "kl"
    JS = "js"


@dataclass(frozen=True)
class DistanceValue:
    """A distance tagged with the metric that produced it."""

    metric: Metric
    value: float

    def __post_init__(self):
        if self.value < 0:
            raise ValueError(f"distance must be nonnegative, got {self.value}")
        if self.metric is Metric.EMD and self.value > EMD_MAX + 1e-12:
            raise ValueError(f"emd value {self.value} exceeds {EMD_MAX}")
        if self.metric is Metric.JS and self.value > JS_MAX + 1e-12:
            raise ValueError(f"js value {self.value} exceeds ln 2")


def emd(p: SentimentDistribution, q: SentimentDistribution) -> float:
    """Sum of absolute component differences (L1 distance), in [0, 2]."""
    return math.fsum(abs(a - b) for a, b in zip(p.probs, q.probs))


def _smooth(probs: tuple[float, ...], eps: float) -> list[float]:
    shifted = [x + eps for x in probs]
    total = math.fsum(shifted)
    return [x / total for x in shifted]


def _kl_terms(p, q) -> float:
    # 0 * log(0/q) contributes 0 by convention
    return math.fsum(a * math.log(a / b) for a, b in zip(p, q) if a > 0.0)


def kl(p: SentimentDistribution, q: SentimentDistribution, *, eps: float = KL_EPSILON) -> float:
    """Kullback-Leibler divergence in nats, with epsilon smoothing.

    ``eps`` is added to every component of both inputs (then renormalized) so
    the sum is defined even where q has zero support. Tiny negative rounding
    residue is clamped to 0.
    """
    ps = _smooth(p.probs, eps)
    qs = _smooth(q.probs, eps)
    return max(_kl_terms(ps, qs), 0.0)


def js(p: SentimentDistribution, q: SentimentDistribution) -> float:
    """Jensen-Shannon divergence in nats, bounded by ln 2.

    Uses the unsmoothed mixture form: m = (p+q)/2 is positive wherever either
    input is, so no smoothing is needed.
    """
    m = [(a + b) / 2.0 for a, b in zip(p.probs, q.probs)]
    value = 0.5 * (_kl_terms(p.probs, m) + _kl_terms(q.probs, m))
    return min(max(value, 0.0), JS_MAX)


def distance(metric: Metric, p: SentimentDistribution, q: SentimentDistribution) -> DistanceValue:
    """Compute a tagged distance value for the requested metric."""
    fn = {Metric.EMD: emd, Metric.KL: kl, Metric.JS: js}[metric]
    return DistanceValue(metric, fn(p, q))


def similarity_percent(p: SentimentDistribution, q: SentimentDistribution) -> float:
    """Map the L1 distance onto a 0-100 similarity: 100 * (1 - emd/2)."""
    value = 100.0 * (1.0 - emd(p, q) / EMD_MAX)
    return min(max(value, 0.0), 100.0)
