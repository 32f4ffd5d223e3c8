"""Dataset handling: Persian text normalization, anonymization, duplicate and
empty detection, eligibility filtering, and tweets-file loading.

The normalizer is a pinned, versioned fold table rather than an external
package so behavior stays bit-stable across releases.
"""

from __future__ import annotations

import json
import re
import unicodedata
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .sentiment import N_CLASSES, SentimentClass

FOLD_TABLE_VERSION = 1

# Arabic -> Persian character folds.
_CHAR_FOLDS = {
    "ي": "ی",  # ARABIC YEH -> FARSI YEH
    "ك": "ک",  # ARABIC KAF -> KEHEH
}
# ARABIC-INDIC digits U+0660..U+0669 -> EXTENDED ARABIC-INDIC (Persian) U+06F0..U+06F9
_CHAR_FOLDS.update({chr(0x0660 + i): chr(0x06F0 + i) for i in range(10)})
_FOLD_TABLE = str.maketrans(_CHAR_FOLDS)

# Arabic diacritics (tashkeel); ZWNJ (U+200C) is deliberately preserved.
_DIACRITICS_RE = re.compile("[ً-ٟ]")
_WHITESPACE_RE = re.compile(r"\s+")

_URL_RE = re.compile(r"(?:https?://\S+|\bt\.co/\S+)")
_MENTION_RE = re.compile(r"@\w+")


class SchemaError(ValueError):
    """A record or file violates the documented wire schema."""


def normalize_text(raw: str) -> str:
    """Normalize Persian text: NFC, character folds, diacritic and whitespace cleanup."""
    text = unicodedata.normalize("NFC", raw)
    text = text.translate(_FOLD_TABLE)
    text = _DIACRITICS_RE.sub("", text)
    text = _WHITESPACE_RE.sub(" ", text)
    return text.strip()


def anonymize(text: str) -> str:
    """Replace @-mentions with "@USER" and URLs with "URL"."""
    text = _URL_RE.sub("URL", text)
    return _MENTION_RE.sub("@USER", text)


@dataclass(frozen=True)
class Tweet:
    tweet_id: str
    participant_id: str
    text: str
    created_at: datetime | None = None
    gold_label: SentimentClass | None = None

    def __post_init__(self):
        if not self.tweet_id:
            raise SchemaError("tweet_id must be nonempty")


@dataclass
class DatasetReport:
    total: int
    duplicates: list[tuple[str, str]]
    empties: list[str]
    label_histogram: list[int]

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "duplicates": [list(pair) for pair in self.duplicates],
            "empties": list(self.empties),
            "label_histogram": list(self.label_histogram),
        }


def scan_dataset(tweets: Sequence[Tweet]) -> DatasetReport:
    """Report duplicate normalized texts, empty records, and the gold-label histogram."""
    by_text: dict[str, list[str]] = {}
    empties: list[str] = []
    histogram = [0] * N_CLASSES
    for tweet in tweets:
        normalized = normalize_text(tweet.text)
        if not normalized:
            empties.append(tweet.tweet_id)
        else:
            by_text.setdefault(normalized, []).append(tweet.tweet_id)
        if tweet.gold_label is not None:
            histogram[tweet.gold_label.index] += 1
    duplicates: list[tuple[str, str]] = []
    for ids in by_text.values():
        if len(ids) > 1:
            ids = sorted(ids)
            duplicates.extend(
                (ids[i], ids[j]) for i in range(len(ids)) for j in range(i + 1, len(ids))
            )
    duplicates.sort()
    empties.sort()
    return DatasetReport(len(tweets), duplicates, empties, histogram)


def _recency_key(created_at: datetime | None, record_id: str):
    # Newest first; records without timestamps sort last (oldest). Stable
    # tie-break by id keeps the selection deterministic.
    if created_at is None:
        return (1, datetime.min.replace(tzinfo=timezone.utc), record_id)
    if created_at.tzinfo is None:
        created_at = created_at.replace(tzinfo=timezone.utc)
    return (0, created_at, record_id)


def select_recent(records: Sequence, limit: int, *, timestamp, record_id) -> list:
    """Keep the ``limit`` most recent records by timestamp, ties broken by id."""
    def sort_key(r):
        kind, ts, rid = _recency_key(timestamp(r), record_id(r))
        # invert datetime ordering for "newest first" while keeping id ascending
        return (kind, -ts.timestamp(), rid)

    return sorted(records, key=sort_key)[:limit]


def filter_eligibility(
    tweets_per_participant: Mapping[str, Sequence],
    images_per_participant: Mapping[str, Sequence],
    *,
    tweet_limit: int = 50,
    image_limit: int = 20,
) -> set[str]:
    """Participants with at least ``tweet_limit`` tweets and ``image_limit`` images."""
    eligible = set()
    for pid, tweets in tweets_per_participant.items():
        images = images_per_participant.get(pid, ())
        if len(tweets) >= tweet_limit and len(images) >= image_limit:
            eligible.add(pid)
    return eligible


def _parse_created_at(value) -> datetime | None:
    if value is None:
        return None
    if not isinstance(value, str):
        raise SchemaError(f"created_at must be an ISO-8601 string, got {value!r}")
    try:
        parsed = datetime.fromisoformat(value.replace("Z", "+00:00"))
    except ValueError:
        raise SchemaError(f"invalid ISO-8601 timestamp: {value!r}") from None
    if parsed.tzinfo is None:
        parsed = parsed.replace(tzinfo=timezone.utc)
    return parsed


def parse_tweet(obj: dict) -> Tweet:
    if not isinstance(obj, dict):
        raise SchemaError("tweet record must be a JSON object")
    for key in ("tweet_id", "participant_id", "text"):
        if key not in obj:
            raise SchemaError(f"tweet record missing field {key!r}")
        if not isinstance(obj[key], str):
            raise SchemaError(f"tweet field {key!r} must be a string")
    label = obj.get("label")
    gold = SentimentClass.from_wire(label) if label is not None else None
    return Tweet(
        tweet_id=obj["tweet_id"],
        participant_id=obj["participant_id"],
        text=obj["text"],
        created_at=_parse_created_at(obj.get("created_at")),
        gold_label=gold,
    )


def iter_jsonl(path: Path) -> Iterable[tuple[int, dict]]:
    """Yield (line_number, parsed_object) pairs from a UTF-8 JSON-lines file."""
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"{path}:{lineno}: invalid JSON ({exc.msg})") from None
            yield lineno, obj


def load_tweets(path: Path) -> list[Tweet]:
    """Load and validate a tweets JSON-lines file; ids must be unique."""
    tweets: list[Tweet] = []
    seen: set[str] = set()
    for lineno, obj in iter_jsonl(path):
        try:
            tweet = parse_tweet(obj)
        except ValueError as exc:
            raise SchemaError(f"{path}:{lineno}: {exc}") from None
        if tweet.tweet_id in seen:
            raise SchemaError(f"{path}:{lineno}: duplicate tweet_id {tweet.tweet_id!r}")
        seen.add(tweet.tweet_id)
        tweets.append(tweet)
    return tweets
