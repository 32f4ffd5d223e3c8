"""emoalign: measure the alignment between social-media sentiment and
real-world emotions reported by friends."""

from .divergence import DistanceValue, Metric, distance, emd, js, kl, similarity_percent
from .sentiment import (
    CANONICAL_ORDER,
    ExpressionVector7,
    ParticipantProfile,
    SentimentClass,
    SentimentDistribution,
    SurveyResponse,
    average_distributions,
    from_label_counts,
    map_expression_7to5,
    normalize,
    survey_to_distribution,
)

__version__ = "0.1.0"

__all__ = [
    "CANONICAL_ORDER",
    "DistanceValue",
    "ExpressionVector7",
    "Metric",
    "ParticipantProfile",
    "SentimentClass",
    "SentimentDistribution",
    "SurveyResponse",
    "average_distributions",
    "distance",
    "emd",
    "from_label_counts",
    "js",
    "kl",
    "map_expression_7to5",
    "normalize",
    "similarity_percent",
    "survey_to_distribution",
]
