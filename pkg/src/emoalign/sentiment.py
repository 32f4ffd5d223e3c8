"""Five-class sentiment domain and conversions into normalized distributions.

Everything downstream (distances, similarities, cohort statistics) consumes the
:class:`SentimentDistribution` produced here. Probabilities are stored as
dimensionless reals summing to 1; percentage rendering happens only at the
reporting boundary.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

SUM_TOLERANCE = 1e-9

# FER-style facial-expression class order used by expression vectors.
EXPRESSION_CLASSES = ("angry", "disgust", "fear", "happy", "sad", "surprise", "neutral")


class SentimentError(ValueError):
    """Base class for domain validation errors."""


class NegativeEntryError(SentimentError):
    pass


class AllZeroError(SentimentError):
    pass


class EmptyInputError(SentimentError):
    pass


class MixedParticipantsError(SentimentError):
    pass


class NoFaceError(SentimentError):
    pass


class SentimentClass(enum.Enum):
    """The five sentiment classes, in canonical vector/serialization order."""

    HAPPINESS = "happiness"
    SADNESS = "sadness"
    NEUTRAL = "neutral"
    ANGER = "anger"
    INTENSE_EMOTIONS = "intense_emotions"

    @property
    def index(self) -> int:
        return CANONICAL_ORDER.index(self)

    @classmethod
    def from_wire(cls, name: str) -> "SentimentClass":
        try:
            return cls(name)
        except ValueError:
            raise SentimentError(f"unknown sentiment class name: {name!r}") from None


CANONICAL_ORDER: tuple[SentimentClass, ...] = tuple(SentimentClass)
N_CLASSES = len(CANONICAL_ORDER)


@dataclass(frozen=True)
class SentimentDistribution:
    """Probability vector over the five classes, canonical order."""

    probs: tuple[float, float, float, float, float]

    def __post_init__(self):
        if len(self.probs) != N_CLASSES:
            raise SentimentError(f"expected {N_CLASSES} probabilities, got {len(self.probs)}")
        object.__setattr__(self, "probs", tuple(float(p) for p in self.probs))
        for p in self.probs:
            if not math.isfinite(p):
                raise SentimentError("probabilities must be finite")
            if p < 0:
                raise NegativeEntryError(f"negative probability: {p}")
        total = math.fsum(self.probs)
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise SentimentError(f"probabilities sum to {total}, expected 1")

    def __getitem__(self, key) -> float:
        if isinstance(key, SentimentClass):
            return self.probs[key.index]
        return self.probs[key]

    def as_list(self) -> list[float]:
        return list(self.probs)

    def as_percentages(self) -> list[float]:
        return [p * 100.0 for p in self.probs]

    @classmethod
    def uniform(cls) -> "SentimentDistribution":
        return cls(tuple([1.0 / N_CLASSES] * N_CLASSES))


@dataclass(frozen=True)
class ExpressionVector7:
    """Seven-class facial-expression probabilities in EXPRESSION_CLASSES order."""

    probs7: tuple[float, ...]
    face_found: bool

    def __post_init__(self):
        if len(self.probs7) != 7:
            raise SentimentError(f"expected 7 expression probabilities, got {len(self.probs7)}")
        object.__setattr__(self, "probs7", tuple(float(p) for p in self.probs7))
        if self.face_found:
            for p in self.probs7:
                if not math.isfinite(p) or p < 0:
                    raise SentimentError(f"invalid expression probability: {p}")
            total = math.fsum(self.probs7)
            if abs(total - 1.0) > SUM_TOLERANCE:
                raise SentimentError(f"expression probabilities sum to {total}, expected 1")


@dataclass(frozen=True)
class SurveyResponse:
    """One friend's 1-10 ratings of a participant, canonical class order."""

    participant_id: str
    respondent_hash: str
    scores: tuple[int, int, int, int, int]

    def __post_init__(self):
        if len(self.scores) != N_CLASSES:
            raise SentimentError(f"expected {N_CLASSES} scores, got {len(self.scores)}")
        object.__setattr__(self, "scores", tuple(int(s) for s in self.scores))
        for s in self.scores:
            if not 1 <= s <= 10:
                raise SentimentError(f"survey score {s} outside [1, 10]")


@dataclass(frozen=True)
class ParticipantProfile:
    """Per-participant distributions and their pairwise similarity scores.

    ``image_dist`` and the two image-based similarities are None when no face
    was detected in any of the participant's images.
    """

    participant_id: str
    tweet_dist: SentimentDistribution
    image_dist: SentimentDistribution | None
    real_world_dist: SentimentDistribution
    similarity_tweet_real: float
    similarity_image_real: float | None
    similarity_image_tweet: float | None

    def __post_init__(self):
        for value in (self.similarity_tweet_real, self.similarity_image_real,
                      self.similarity_image_tweet):
            if value is not None and not 0.0 <= value <= 100.0:
                raise SentimentError(f"similarity {value} outside [0, 100]")
        if (self.image_dist is None) != (self.similarity_image_real is None):
            raise SentimentError("image similarity must be absent iff image_dist is absent")
        if (self.image_dist is None) != (self.similarity_image_tweet is None):
            raise SentimentError("image similarity must be absent iff image_dist is absent")


def normalize(raw: Sequence[float]) -> SentimentDistribution:
    """Scale five nonnegative values into a probability distribution."""
    if len(raw) != N_CLASSES:
        raise SentimentError(f"expected {N_CLASSES} values, got {len(raw)}")
    values = [float(v) for v in raw]
    for v in values:
        if not math.isfinite(v):
            raise SentimentError("values must be finite")
        if v < 0:
            raise NegativeEntryError(f"negative entry: {v}")
    total = math.fsum(values)
    if total == 0.0:
        raise AllZeroError("cannot normalize an all-zero vector")
    return SentimentDistribution(tuple(v / total for v in values))


def from_label_counts(counts: Sequence[int]) -> SentimentDistribution:
    """Turn per-class label tallies into a distribution."""
    counts = [int(c) for c in counts]
    return normalize(counts)


def survey_to_distribution(responses: Sequence[SurveyResponse]) -> SentimentDistribution:
    """Average friends' scores per class, then normalize the five means."""
    if not responses:
        raise EmptyInputError("no survey responses")
    ids = {r.participant_id for r in responses}
    if len(ids) != 1:
        raise MixedParticipantsError(f"responses span multiple participants: {sorted(ids)}")
    n = len(responses)
    means = [math.fsum(r.scores[i] for r in responses) / n for i in range(N_CLASSES)]
    return normalize(means)


def map_expression_7to5(v: ExpressionVector7) -> SentimentDistribution:
    """Merge the seven expression classes into the five sentiment classes.

    sad+fear fold into Sadness, angry+disgust into Anger, surprise becomes
    IntenseEmotions; happy and neutral map directly.
    """
    if not v.face_found:
        raise NoFaceError("no face detected; expression vector carries no signal")
    angry, disgust, fear, happy, sad, surprise, neutral = v.probs7
    merged = (happy, sad + fear, neutral, angry + disgust, surprise)
    return SentimentDistribution(merged)


def average_distributions(ds: Sequence[SentimentDistribution]) -> SentimentDistribution:
    """Component-wise arithmetic mean of distributions."""
    if not ds:
        raise EmptyInputError("no distributions to average")
    n = len(ds)
    means = tuple(math.fsum(d.probs[i] for d in ds) / n for i in range(N_CLASSES))
    return SentimentDistribution(means)
