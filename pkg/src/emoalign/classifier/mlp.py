"""Fully connected sentiment classifier: forward pass, training, and model I/O.

The network maps concatenated 1536-dim embeddings to five class probabilities.
Backpropagation and the Adam update are implemented directly in numpy so the
analytic gradients can be verified against finite differences.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from ..sentiment import CANONICAL_ORDER, N_CLASSES, SentimentClass, SentimentDistribution

EMBEDDING_DIM = 768
CONCAT_DIM = 2 * EMBEDDING_DIM
MODEL_FORMAT_VERSION = 1
LEAKY_SLOPE = 0.01

_ACTIVATIONS = ("relu", "leaky_relu")


class ClassifierError(ValueError):
    pass


class DimensionMismatchError(ClassifierError):
    pass


class NonFiniteInputError(ClassifierError):
    pass


class EmptyTrainingSetError(ClassifierError):
    pass


class Source(enum.Enum):
    MODEL = "model"
    RULE = "rule"


@dataclass(frozen=True)
class EmbeddingRecord:
    """Per-tweet monolingual and multilingual 768-dim sentence embeddings."""

    tweet_id: str
    e_mono: tuple[float, ...]
    e_multi: tuple[float, ...]

    def __post_init__(self):
        for name, vec in (("e_mono", self.e_mono), ("e_multi", self.e_multi)):
            if len(vec) != EMBEDDING_DIM:
                raise DimensionMismatchError(
                    f"{name} has {len(vec)} entries, expected {EMBEDDING_DIM}"
                )
            if not all(math.isfinite(v) for v in vec):
                raise NonFiniteInputError(f"{name} contains non-finite values")


def concat_embeddings(record: EmbeddingRecord) -> np.ndarray:
    """Concatenate the two 768-dim halves into one 1536-dim vector."""
    return np.concatenate([
        np.asarray(record.e_mono, dtype=np.float64),
        np.asarray(record.e_multi, dtype=np.float64),
    ])


@dataclass(frozen=True)
class ClassifierOutput:
    label: SentimentClass
    confidence: float
    probs: SentimentDistribution
    source: Source

    def __post_init__(self):
        if not 0.0 <= self.confidence <= 1.0:
            raise ClassifierError(f"confidence {self.confidence} outside [0, 1]")
        if self.source is Source.MODEL and abs(self.confidence - max(self.probs.probs)) > 1e-12:
            raise ClassifierError("model confidence must equal the maximum probability")


@dataclass
class MlpModel:
    """Layer dimensions, per-hidden-layer activations, and parameters.

    ``weights[i]`` has shape (layer_dims[i], layer_dims[i+1]); the final layer
    is linear and feeds a softmax. The output width is always 5.
    """

    layer_dims: list[int]
    activations: list[str]
    weights: list[np.ndarray]
    biases: list[np.ndarray]
    format_version: int = MODEL_FORMAT_VERSION

    def __post_init__(self):
        dims = self.layer_dims
        if len(dims) < 2:
            raise ClassifierError("model needs at least an input and an output layer")
        if dims[-1] != N_CLASSES:
            raise ClassifierError(f"final layer width must be {N_CLASSES}, got {dims[-1]}")
        if any(d <= 0 for d in dims):
            raise ClassifierError("layer dimensions must be positive")
        if len(self.activations) != len(dims) - 2:
            raise ClassifierError(
                f"expected {len(dims) - 2} activations for {len(dims)} layers, "
                f"got {len(self.activations)}"
            )
        for act in self.activations:
            if act not in _ACTIVATIONS:
                raise ClassifierError(f"unknown activation {act!r}")
        if len(self.weights) != len(dims) - 1 or len(self.biases) != len(dims) - 1:
            raise ClassifierError("one weight matrix and bias vector per layer transition")
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.shape != (dims[i], dims[i + 1]):
                raise DimensionMismatchError(
                    f"weights[{i}] has shape {w.shape}, expected {(dims[i], dims[i + 1])}"
                )
            if b.shape != (dims[i + 1],):
                raise DimensionMismatchError(
                    f"biases[{i}] has shape {b.shape}, expected {(dims[i + 1],)}"
                )


def _apply_activation(name: str, z: np.ndarray) -> np.ndarray:
    if name == "relu":
        return np.maximum(z, 0.0)
    return np.where(z > 0.0, z, LEAKY_SLOPE * z)


def _activation_grad(name: str, z: np.ndarray) -> np.ndarray:
    if name == "relu":
        return (z > 0.0).astype(np.float64)
    return np.where(z > 0.0, 1.0, LEAKY_SLOPE)


def softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=-1, keepdims=True)
    exps = np.exp(shifted)
    return exps / exps.sum(axis=-1, keepdims=True)


def _forward_batch(model: MlpModel, x: np.ndarray) -> tuple[np.ndarray, list, list]:
    """Return (logits, pre-activations, post-activations) for a (n, d) batch."""
    pre, post = [], [x]
    h = x
    n_layers = len(model.weights)
    for i in range(n_layers):
        z = h @ model.weights[i] + model.biases[i]
        pre.append(z)
        if i < n_layers - 1:
            h = _apply_activation(model.activations[i], z)
            post.append(h)
    return pre[-1], pre, post


def forward_probs(model: MlpModel, x: np.ndarray) -> np.ndarray:
    """Class probabilities for a (n, d) batch."""
    logits, _, _ = _forward_batch(model, x)
    return softmax(logits)


def mlp_forward(model: MlpModel, x: Sequence[float]) -> ClassifierOutput:
    """Classify one input vector; ties go to the lowest canonical class index."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1 or arr.shape[0] != model.layer_dims[0]:
        raise DimensionMismatchError(
            f"input has shape {arr.shape}, expected ({model.layer_dims[0]},)"
        )
    if not np.all(np.isfinite(arr)):
        raise NonFiniteInputError("input contains non-finite values")
    probs = forward_probs(model, arr[None, :])[0]
    label_idx = int(np.argmax(probs))  # argmax returns the first maximum
    dist = SentimentDistribution(tuple(float(p) for p in probs))
    return ClassifierOutput(
        label=CANONICAL_ORDER[label_idx],
        confidence=float(probs[label_idx]),
        probs=dist,
        source=Source.MODEL,
    )


def cross_entropy(model: MlpModel, x: np.ndarray, y_idx: np.ndarray) -> float:
    """Mean cross-entropy of the batch, in nats."""
    probs = forward_probs(model, x)
    picked = probs[np.arange(len(y_idx)), y_idx]
    return float(-np.log(np.maximum(picked, 1e-300)).mean())


def cross_entropy_grads(
    model: MlpModel, x: np.ndarray, y_idx: np.ndarray
) -> tuple[float, list[np.ndarray], list[np.ndarray]]:
    """Loss plus analytic gradients w.r.t. every weight matrix and bias vector."""
    logits, pre, post = _forward_batch(model, x)
    probs = softmax(logits)
    n = x.shape[0]
    picked = probs[np.arange(n), y_idx]
    loss = float(-np.log(np.maximum(picked, 1e-300)).mean())

    delta = probs.copy()
    delta[np.arange(n), y_idx] -= 1.0
    delta /= n

    grads_w = [np.empty(0)] * len(model.weights)
    grads_b = [np.empty(0)] * len(model.biases)
    for i in reversed(range(len(model.weights))):
        grads_w[i] = post[i].T @ delta
        grads_b[i] = delta.sum(axis=0)
        if i > 0:
            delta = (delta @ model.weights[i].T) * _activation_grad(
                model.activations[i - 1], pre[i - 1]
            )
    return loss, grads_w, grads_b


@dataclass(frozen=True)
class TrainConfig:
    hidden_dims: tuple[int, ...] = (512, 128)
    activations: tuple[str, ...] = ("relu", "leaky_relu")
    learning_rate: float = 1e-3
    batch_size: int = 32
    max_epochs: int = 100
    patience: int = 10
    val_fraction: float = 0.1
    input_dim: int = CONCAT_DIM


@dataclass
class TrainingHistory:
    epoch_losses: list[float] = field(default_factory=list)
    checkpoint_losses: list[float] = field(default_factory=list)
    val_losses: list[float] = field(default_factory=list)
    stopped_epoch: int = 0


def init_model(dims: Sequence[int], activations: Sequence[str], seed: int) -> MlpModel:
    """He-style seeded initialization; biases start at zero."""
    rng = np.random.default_rng(seed)
    weights, biases = [], []
    for fan_in, fan_out in zip(dims[:-1], dims[1:]):
        scale = math.sqrt(2.0 / fan_in)
        weights.append(rng.standard_normal((fan_in, fan_out)) * scale)
        biases.append(np.zeros(fan_out))
    return MlpModel(list(dims), list(activations), weights, biases)


def train_on_arrays(
    x: np.ndarray,
    y_idx: np.ndarray,
    config: TrainConfig,
    seed: int,
) -> tuple[MlpModel, TrainingHistory]:
    """Adam training with an optional early-stop split; deterministic per seed.

    The returned model carries the parameters of the best train-loss epoch, so
    the recorded checkpoint losses are non-increasing by construction.
    """
    if len(x) == 0:
        raise EmptyTrainingSetError("training set is empty")
    dims = [config.input_dim, *config.hidden_dims, N_CLASSES]
    if x.shape[1] != config.input_dim:
        raise DimensionMismatchError(
            f"training inputs have dim {x.shape[1]}, config says {config.input_dim}"
        )
    model = init_model(dims, config.activations, seed)
    rng = np.random.default_rng(seed + 1)

    n = len(x)
    n_val = int(n * config.val_fraction)
    order = rng.permutation(n)
    val_idx, train_idx = order[:n_val], order[n_val:]
    x_train, y_train = x[train_idx], y_idx[train_idx]
    x_val, y_val = x[val_idx], y_idx[val_idx]

    m_w = [np.zeros_like(w) for w in model.weights]
    v_w = [np.zeros_like(w) for w in model.weights]
    m_b = [np.zeros_like(b) for b in model.biases]
    v_b = [np.zeros_like(b) for b in model.biases]
    beta1, beta2, eps = 0.9, 0.999, 1e-8
    step = 0

    history = TrainingHistory()
    best_loss = math.inf
    best_params = None
    best_val = math.inf
    stale = 0

    for epoch in range(1, config.max_epochs + 1):
        for start in range(0, len(x_train), config.batch_size):
            batch = slice(start, start + config.batch_size)
            _, grads_w, grads_b = cross_entropy_grads(model, x_train[batch], y_train[batch])
            step += 1
            lr_t = config.learning_rate * math.sqrt(1 - beta2**step) / (1 - beta1**step)
            for i in range(len(model.weights)):
                m_w[i] = beta1 * m_w[i] + (1 - beta1) * grads_w[i]
                v_w[i] = beta2 * v_w[i] + (1 - beta2) * grads_w[i] ** 2
                model.weights[i] -= lr_t * m_w[i] / (np.sqrt(v_w[i]) + eps)
                m_b[i] = beta1 * m_b[i] + (1 - beta1) * grads_b[i]
                v_b[i] = beta2 * v_b[i] + (1 - beta2) * grads_b[i] ** 2
                model.biases[i] -= lr_t * m_b[i] / (np.sqrt(v_b[i]) + eps)

        train_loss = cross_entropy(model, x_train, y_train)
        history.epoch_losses.append(train_loss)
        if train_loss < best_loss:
            best_loss = train_loss
            best_params = ([w.copy() for w in model.weights], [b.copy() for b in model.biases])
        history.checkpoint_losses.append(best_loss)
        history.stopped_epoch = epoch

        if n_val > 0:
            val_loss = cross_entropy(model, x_val, y_val)
            history.val_losses.append(val_loss)
            if val_loss < best_val - 1e-12:
                best_val = val_loss
                stale = 0
            else:
                stale += 1
                if stale >= config.patience:
                    break

    if best_params is not None:
        model.weights, model.biases = best_params
    return model, history


def mlp_train_with_history(
    train: Sequence[tuple[EmbeddingRecord, SentimentClass]],
    config: TrainConfig | None = None,
    seed: int = 0,
) -> tuple[MlpModel, TrainingHistory]:
    if not train:
        raise EmptyTrainingSetError("training set is empty")
    config = config or TrainConfig()
    x = np.stack([concat_embeddings(record) for record, _ in train])
    y = np.array([label.index for _, label in train], dtype=np.int64)
    return train_on_arrays(x, y, config, seed)


def mlp_train(
    train: Sequence[tuple[EmbeddingRecord, SentimentClass]],
    config: TrainConfig | None = None,
    seed: int = 0,
) -> MlpModel:
    """Train a classifier on (embedding record, label) pairs."""
    model, _ = mlp_train_with_history(train, config, seed)
    return model


def save_model(model: MlpModel, path: Path) -> None:
    """Write the versioned JSON model document (64-bit reals, row-major)."""
    doc = {
        "format_version": model.format_version,
        "layer_dims": list(model.layer_dims),
        "activations": list(model.activations),
        "weights": [w.tolist() for w in model.weights],
        "biases": [b.tolist() for b in model.biases],
    }
    Path(path).write_text(json.dumps(doc), encoding="utf-8")


def load_model(path: Path) -> MlpModel:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ClassifierError(f"{path}: invalid model JSON ({exc.msg})") from None
    if not isinstance(doc, dict) or doc.get("format_version") != MODEL_FORMAT_VERSION:
        raise ClassifierError(f"{path}: unsupported model format")
    try:
        return MlpModel(
            layer_dims=[int(d) for d in doc["layer_dims"]],
            activations=[str(a) for a in doc["activations"]],
            weights=[np.asarray(w, dtype=np.float64) for w in doc["weights"]],
            biases=[np.asarray(b, dtype=np.float64) for b in doc["biases"]],
            format_version=doc["format_version"],
        )
    except KeyError as exc:
        raise ClassifierError(f"{path}: model document missing field {exc}") from None
