"""Hybrid text sentiment classifier: neural network, keyword rules, decision gate."""

from .hybrid import DEFAULT_CONFIDENCE_THRESHOLD, hybrid_predict, resolve_prediction
from .metrics import EvalMetrics, LengthMismatchError, evaluate
from .mlp import (
    CONCAT_DIM,
    EMBEDDING_DIM,
    ClassifierError,
    ClassifierOutput,
    DimensionMismatchError,
    EmbeddingRecord,
    EmptyTrainingSetError,
    MlpModel,
    NonFiniteInputError,
    Source,
    TrainConfig,
    TrainingHistory,
    concat_embeddings,
    cross_entropy,
    cross_entropy_grads,
    forward_probs,
    init_model,
    load_model,
    mlp_forward,
    mlp_train,
    mlp_train_with_history,
    save_model,
    train_on_arrays,
)
from .rules import KeywordLexicon, LexiconError, lexicon_from_dict, load_lexicon, rule_predict, tokenize

__all__ = [
    "CONCAT_DIM",
    "DEFAULT_CONFIDENCE_THRESHOLD",
    "EMBEDDING_DIM",
    "ClassifierError",
    "ClassifierOutput",
    "DimensionMismatchError",
    "EmbeddingRecord",
    "EmptyTrainingSetError",
    "EvalMetrics",
    "KeywordLexicon",
    "LengthMismatchError",
    "LexiconError",
    "MlpModel",
    "NonFiniteInputError",
    "Source",
    "TrainConfig",
    "TrainingHistory",
    "concat_embeddings",
    "cross_entropy",
    "cross_entropy_grads",
    "evaluate",
    "forward_probs",
    "hybrid_predict",
    "init_model",
    "lexicon_from_dict",
    "load_lexicon",
    "load_model",
    "mlp_forward",
    "mlp_train",
    "mlp_train_with_history",
    "resolve_prediction",
    "rule_predict",
    "save_model",
    "tokenize",
    "train_on_arrays",
]
