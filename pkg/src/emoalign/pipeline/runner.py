"""Cohort orchestration: per-participant distributions, similarities, and the
aggregate report object."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from ..classifier import (
    EmbeddingRecord,
    KeywordLexicon,
    MlpModel,
    concat_embeddings,
    hybrid_predict,
    load_lexicon,
    load_model,
)
from ..divergence import similarity_percent
from ..ingest import SchemaError, Tweet, filter_eligibility, load_tweets, normalize_text, select_recent
from ..sentiment import (
    N_CLASSES,
    ParticipantProfile,
    SurveyResponse,
    average_distributions,
    from_label_counts,
    map_expression_7to5,
    survey_to_distribution,
)
from ..stats import SummaryStats, TTestResult, mean_std, pairwise_comparisons, summary_stats
from .config import RunConfig
from .files import ExpressionRow, read_embeddings, read_expressions, read_surveys

REPORT_VERSION = 1


class PipelineError(ValueError):
    pass


class IneligibleError(PipelineError):
    pass


class MissingSurveyError(PipelineError):
    pass


class TooFewParticipantsError(PipelineError):
    pass


@dataclass
class ParticipantInputs:
    """Everything run_participant needs, already loaded and validated."""

    tweets: Sequence[Tweet]
    embeddings: Mapping[str, EmbeddingRecord]
    expressions: Sequence[ExpressionRow]
    surveys: Sequence[SurveyResponse]
    model: MlpModel
    lexicon: KeywordLexicon


@dataclass(frozen=True)
class SimilarityAggregate:
    mean: float
    std: float
    n: int

    def to_dict(self) -> dict:
        return {"mean": self.mean, "std": self.std, "n": self.n}


@dataclass
class CohortReport:
    participants: list[ParticipantProfile]
    summary: SummaryStats
    ttests: list[TTestResult]
    similarity_stats: dict[str, SimilarityAggregate]
    excluded_image_count: int
    config_echo: dict
    version: int = REPORT_VERSION


def run_participant(config: RunConfig, participant_id: str, inputs: ParticipantInputs) -> ParticipantProfile:
    """Compute one participant's three distributions and pairwise similarities."""
    if len(inputs.tweets) < config.tweet_limit or len(inputs.expressions) < config.image_limit:
        raise IneligibleError(
            f"{participant_id}: needs >= {config.tweet_limit} tweets and "
            f">= {config.image_limit} images"
        )
    if not inputs.surveys:
        raise MissingSurveyError(f"{participant_id}: no survey responses")

    selected_tweets = select_recent(
        inputs.tweets, config.tweet_limit,
        timestamp=lambda t: t.created_at, record_id=lambda t: t.tweet_id,
    )
    counts = [0] * N_CLASSES
    for tweet in selected_tweets:
        record = inputs.embeddings.get(tweet.tweet_id)
        if record is None:
            raise SchemaError(f"{participant_id}: no embedding for tweet {tweet.tweet_id!r}")
        output = hybrid_predict(
            inputs.model,
            inputs.lexicon,
            normalize_text(tweet.text),
            concat_embeddings(record),
            threshold=config.confidence_threshold,
        )
        counts[output.label.index] += 1
    tweet_dist = from_label_counts(counts)

    selected_images = select_recent(
        inputs.expressions, config.image_limit,
        timestamp=lambda r: None, record_id=lambda r: r.image_id,
    )
    face_dists = [
        map_expression_7to5(row.vector) for row in selected_images if row.vector.face_found
    ]
    image_dist = average_distributions(face_dists) if face_dists else None

    real_world_dist = survey_to_distribution(list(inputs.surveys))

    return ParticipantProfile(
        participant_id=participant_id,
        tweet_dist=tweet_dist,
        image_dist=image_dist,
        real_world_dist=real_world_dist,
        similarity_tweet_real=similarity_percent(tweet_dist, real_world_dist),
        similarity_image_real=(
            similarity_percent(image_dist, real_world_dist) if image_dist else None
        ),
        similarity_image_tweet=(
            similarity_percent(image_dist, tweet_dist) if image_dist else None
        ),
    )


def _similarity_aggregate(values: list[float]) -> SimilarityAggregate:
    if not values:
        return SimilarityAggregate(0.0, 0.0, 0)
    m, s = mean_std(values)
    return SimilarityAggregate(m, s, len(values))


def aggregate_similarities(profiles: Sequence[ParticipantProfile]) -> dict[str, SimilarityAggregate]:
    """Mean/std/n of the three similarity kinds; image-based kinds exclude
    participants without an image distribution."""
    return {
        "tweet_real": _similarity_aggregate([p.similarity_tweet_real for p in profiles]),
        "image_real": _similarity_aggregate(
            [p.similarity_image_real for p in profiles if p.similarity_image_real is not None]
        ),
        "image_tweet": _similarity_aggregate(
            [p.similarity_image_tweet for p in profiles if p.similarity_image_tweet is not None]
        ),
    }


def run_cohort(config: RunConfig) -> CohortReport:
    """Load all inputs, build every eligible participant, and aggregate."""
    tweets = load_tweets(config.tweets)
    embeddings = read_embeddings(config.embeddings)
    expressions = read_expressions(config.expressions)
    surveys = read_surveys(config.surveys)
    model = load_model(config.model)
    lexicon = load_lexicon(config.lexicon)

    tweets_by_pid: dict[str, list[Tweet]] = {}
    for tweet in tweets:
        tweets_by_pid.setdefault(tweet.participant_id, []).append(tweet)

    eligible = filter_eligibility(
        tweets_by_pid, expressions,
        tweet_limit=config.tweet_limit, image_limit=config.image_limit,
    )
    if len(eligible) < 2:
        raise TooFewParticipantsError(
            f"need at least 2 eligible participants, got {len(eligible)}"
        )

    profiles = []
    # Lexicographic participant order pins aggregate summation order.
    for pid in sorted(eligible):
        if pid not in surveys:
            raise MissingSurveyError(f"{pid}: eligible participant has no survey responses")
        inputs = ParticipantInputs(
            tweets=tweets_by_pid[pid],
            embeddings=embeddings,
            expressions=expressions.get(pid, ()),
            surveys=surveys[pid],
            model=model,
            lexicon=lexicon,
        )
        profiles.append(run_participant(config, pid, inputs))

    ttests = pairwise_comparisons(profiles, config.ttest_variant, config.alpha)
    return CohortReport(
        participants=profiles,
        summary=summary_stats(profiles),
        ttests=ttests,
        similarity_stats=aggregate_similarities(profiles),
        excluded_image_count=sum(1 for p in profiles if p.image_dist is None),
        config_echo=config.echo(),
    )
