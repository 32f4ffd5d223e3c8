"""Readers and validators for the JSON-lines wire files.

All files are UTF-8 JSON-lines. Expression rows tolerate a 1e-6 drift in the
probability sum on the wire and are renormalized on read.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

from ..classifier import EMBEDDING_DIM, EmbeddingRecord
from ..ingest import SchemaError, iter_jsonl
from ..sentiment import ExpressionVector7, SurveyResponse

EXPRESSION_WIRE_TOLERANCE = 1e-6


@dataclass(frozen=True)
class ExpressionRow:
    participant_id: str
    image_id: str
    vector: ExpressionVector7


def _require(obj: dict, key: str, context: str):
    if key not in obj:
        raise SchemaError(f"{context}: missing field {key!r}")
    return obj[key]


def _floats(values, count: int, context: str) -> tuple[float, ...]:
    if not isinstance(values, list) or len(values) != count:
        raise SchemaError(f"{context}: expected a list of {count} numbers")
    out = []
    for v in values:
        if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(v):
            raise SchemaError(f"{context}: non-finite or non-numeric entry {v!r}")
        out.append(float(v))
    return tuple(out)


def read_embeddings(path: Path) -> dict[str, EmbeddingRecord]:
    """Load embeddings keyed by tweet_id; both halves must be 768 finite reals."""
    records: dict[str, EmbeddingRecord] = {}
    for lineno, obj in iter_jsonl(path):
        context = f"{path}:{lineno}"
        tweet_id = _require(obj, "tweet_id", context)
        if not isinstance(tweet_id, str) or not tweet_id:
            raise SchemaError(f"{context}: tweet_id must be a nonempty string")
        if tweet_id in records:
            raise SchemaError(f"{context}: duplicate tweet_id {tweet_id!r}")
        e_mono = _floats(_require(obj, "e_mono", context), EMBEDDING_DIM, context)
        e_multi = _floats(_require(obj, "e_multi", context), EMBEDDING_DIM, context)
        records[tweet_id] = EmbeddingRecord(tweet_id, e_mono, e_multi)
    return records


def read_expressions(path: Path) -> dict[str, list[ExpressionRow]]:
    """Load expression rows grouped by participant, input order preserved."""
    rows: dict[str, list[ExpressionRow]] = {}
    for lineno, obj in iter_jsonl(path):
        context = f"{path}:{lineno}"
        pid = _require(obj, "participant_id", context)
        image_id = _require(obj, "image_id", context)
        face_found = _require(obj, "face_found", context)
        if not isinstance(pid, str) or not pid:
            raise SchemaError(f"{context}: participant_id must be a nonempty string")
        if not isinstance(image_id, str) or not image_id:
            raise SchemaError(f"{context}: image_id must be a nonempty string")
        if not isinstance(face_found, bool):
            raise SchemaError(f"{context}: face_found must be a boolean")
        if face_found:
            probs7 = _floats(_require(obj, "probs7", context), 7, context)
            if any(p < 0 for p in probs7):
                raise SchemaError(f"{context}: negative expression probability")
            total = math.fsum(probs7)
            if abs(total - 1.0) > EXPRESSION_WIRE_TOLERANCE:
                raise SchemaError(f"{context}: probs7 sums to {total}, expected 1")
            vector = ExpressionVector7(tuple(p / total for p in probs7), True)
        else:
            vector = ExpressionVector7(tuple([0.0] * 7), False)
        rows.setdefault(pid, []).append(ExpressionRow(pid, image_id, vector))
    return rows


def read_surveys(path: Path) -> dict[str, list[SurveyResponse]]:
    """Load survey responses grouped by participant."""
    responses: dict[str, list[SurveyResponse]] = {}
    for lineno, obj in iter_jsonl(path):
        context = f"{path}:{lineno}"
        pid = _require(obj, "participant_id", context)
        respondent = _require(obj, "respondent_hash", context)
        scores = _require(obj, "scores", context)
        if not isinstance(pid, str) or not pid:
            raise SchemaError(f"{context}: participant_id must be a nonempty string")
        if not isinstance(respondent, str) or not respondent:
            raise SchemaError(f"{context}: respondent_hash must be a nonempty string")
        if not isinstance(scores, list) or len(scores) != 5:
            raise SchemaError(f"{context}: scores must be a list of 5 integers")
        for s in scores:
            if not isinstance(s, int) or isinstance(s, bool) or not 1 <= s <= 10:
                raise SchemaError(f"{context}: score {s!r} outside [1, 10]")
        try:
            response = SurveyResponse(pid, respondent, tuple(scores))
        except ValueError as exc:
            raise SchemaError(f"{context}: {exc}") from None
        responses.setdefault(pid, []).append(response)
    return responses
