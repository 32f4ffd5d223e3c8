"""Keyword rule system: per-class lexicons and whole-token rule predictions."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from ..ingest import normalize_text
from ..sentiment import CANONICAL_ORDER, SentimentClass

# Word characters plus ZWNJ, which joins Persian compound words.
_TOKEN_RE = re.compile(r"[\w‌]+")


class LexiconError(ValueError):
    pass


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text)


@dataclass(frozen=True)
class KeywordLexicon:
    """Normalized keyword sets per class; sets must be pairwise disjoint."""

    keywords: Mapping[SentimentClass, frozenset[str]]

    def __post_init__(self):
        seen: dict[str, SentimentClass] = {}
        for cls in CANONICAL_ORDER:
            for word in self.keywords.get(cls, frozenset()):
                if word in seen:
                    raise LexiconError(
                        f"keyword {word!r} appears under both {seen[word].value} and {cls.value}"
                    )
                seen[word] = cls

    def classes_for(self, tokens: Sequence[str]) -> list[SentimentClass]:
        token_set = set(tokens)
        return [cls for cls in CANONICAL_ORDER if token_set & self.keywords.get(cls, frozenset())]


def lexicon_from_dict(raw: Mapping[str, Sequence[str]]) -> KeywordLexicon:
    """Build a lexicon from {class name: [keywords]}, normalizing every keyword."""
    keywords: dict[SentimentClass, frozenset[str]] = {}
    for name, words in raw.items():
        cls = SentimentClass.from_wire(name)
        normalized = {normalize_text(w) for w in words}
        normalized.discard("")
        keywords[cls] = frozenset(normalized)
    return KeywordLexicon(keywords)


def load_lexicon(path: Path) -> KeywordLexicon:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise LexiconError(f"{path}: invalid lexicon JSON ({exc.msg})") from None
    if not isinstance(raw, dict):
        raise LexiconError(f"{path}: lexicon must be a JSON object")
    return lexicon_from_dict(raw)


def rule_predict(
    lexicon: KeywordLexicon,
    normalized_text: str,
    probs: Sequence[float] | None = None,
) -> SentimentClass | None:
    """Class whose lexicon contains a token of the text, or None.

    When tokens hit several classes, the hit class with the highest model
    probability wins (canonical order breaks exact ties and is the fallback
    when no probabilities are supplied).
    """
    hits = lexicon.classes_for(tokenize(normalized_text))
    if not hits:
        return None
    if len(hits) == 1 or probs is None:
        return hits[0]
    return max(hits, key=lambda cls: (probs[cls.index], -cls.index))
