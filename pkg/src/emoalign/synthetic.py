"""Seeded synthetic cohorts for calibration and testing.

``sample_cohort`` draws per-participant distributions whose cohort means match
the supplied per-group targets exactly in expectation (Dirichlet mean equals
its normalized parameter vector). The friends and tweets channels use
concentrations that set realistic dispersion; the image channel is sampled
sparse — it models an average over a handful of near-one-hot expression
outcomes — and can be coupled to the tweet channel.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .divergence import similarity_percent
from .sentiment import N_CLASSES, ParticipantProfile, SentimentDistribution


@dataclass(frozen=True)
class CohortSamplerConfig:
    friends_concentration: float = 45.0
    tweets_concentration: float = 18.0
    images_concentration: float = 0.4
    image_tweet_coupling: float = 2.5


def _as_mean_vector(values: Sequence[float]) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.shape != (N_CLASSES,):
        raise ValueError(f"expected {N_CLASSES} class means, got shape {arr.shape}")
    if np.any(arr < 0) or arr.sum() <= 0:
        raise ValueError("class means must be nonnegative with positive total")
    return arr / arr.sum()


def _to_distribution(sample: np.ndarray) -> SentimentDistribution:
    sample = np.clip(sample, 0.0, None)
    sample = sample / sample.sum()
    return SentimentDistribution(tuple(float(v) for v in sample))


def sample_cohort(
    friends_means: Sequence[float],
    tweets_means: Sequence[float],
    images_means: Sequence[float],
    n: int,
    seed: int,
    config: CohortSamplerConfig | None = None,
) -> list[ParticipantProfile]:
    """Draw ``n`` participant profiles with all three channels populated."""
    config = config or CohortSamplerConfig()
    m_friends = _as_mean_vector(friends_means)
    m_tweets = _as_mean_vector(tweets_means)
    m_images = _as_mean_vector(images_means)

    rng = np.random.default_rng(seed)
    friends = rng.dirichlet(config.friends_concentration * m_friends, n)
    tweets = rng.dirichlet(config.tweets_concentration * m_tweets, n)

    profiles = []
    for i in range(n):
        # Image tendency leans toward the participant's tweet profile while the
        # cohort-level mean stays on target (the coupling term has zero mean).
        weights = m_images + config.image_tweet_coupling * (tweets[i] - m_tweets)
        weights = np.clip(weights, 1e-3, None)
        weights /= weights.sum()
        image = rng.dirichlet(config.images_concentration * weights)

        tweet_dist = _to_distribution(tweets[i])
        image_dist = _to_distribution(image)
        friends_dist = _to_distribution(friends[i])
        profiles.append(
            ParticipantProfile(
                participant_id=f"synthetic-{i:04d}",
                tweet_dist=tweet_dist,
                image_dist=image_dist,
                real_world_dist=friends_dist,
                similarity_tweet_real=similarity_percent(tweet_dist, friends_dist),
                similarity_image_real=similarity_percent(image_dist, friends_dist),
                similarity_image_tweet=similarity_percent(image_dist, tweet_dist),
            )
        )
    return profiles
