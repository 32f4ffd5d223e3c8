"""Confidence-gated combination of the neural classifier and the keyword rules.

High-confidence model predictions pass through unchanged; below the threshold a
keyword hit overrides the label (keeping the model's probabilities and
confidence), and with no keyword hit the model's output stands.
"""

from __future__ import annotations

from dataclasses import replace
from typing import Sequence

from ..sentiment import SentimentClass
from .mlp import ClassifierOutput, MlpModel, Source, mlp_forward
from .rules import KeywordLexicon, rule_predict

DEFAULT_CONFIDENCE_THRESHOLD = 0.80


def resolve_prediction(
    model_output: ClassifierOutput,
    rule_label: SentimentClass | None,
    threshold: float = DEFAULT_CONFIDENCE_THRESHOLD,
) -> ClassifierOutput:
    """Apply the decision gate; the threshold comparison is inclusive (>=)."""
    if model_output.confidence >= threshold or rule_label is None:
        return model_output
    return replace(model_output, label=rule_label, source=Source.RULE)


def hybrid_predict(
    model: MlpModel,
    lexicon: KeywordLexicon,
    text: str,
    x: Sequence[float],
    threshold: float = DEFAULT_CONFIDENCE_THRESHOLD,
) -> ClassifierOutput:
    """Classify one tweet from its normalized text and concatenated embedding."""
    output = mlp_forward(model, x)
    rule_label = rule_predict(lexicon, text, output.probs.probs)
    return resolve_prediction(output, rule_label, threshold)
