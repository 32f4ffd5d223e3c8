"""Tweet embedding backends.

The default "hashed" backend is a deterministic feature-hashing sentence
embedder: it needs no model weights, produces stable 768-dim unit vectors on
any machine, and exists so the full pipeline contract can run offline. The
"st" backend wraps sentence-transformers models (one monolingual, one
multilingual) when their weights are reachable.
"""

from __future__ import annotations

import hashlib
import json
import math
import re
import unicodedata
from pathlib import Path
from typing import Callable, Iterable

import numpy as np

from .manifest import AdapterManifest, manifest_path_for

EMBEDDING_DIM = 768
HASHED_BACKEND_VERSION = "hashed-v1"

DEFAULT_MONO_MODEL = "HooshvareLab/bert-base-parsbert-uncased"
DEFAULT_MULTI_MODEL = "sentence-transformers/LaBSE"

_TOKEN_RE = re.compile(r"[\w‌]+")


class AdapterError(ValueError):
    pass


class ModelLoadFailure(AdapterError):
    pass


class SchemaError(AdapterError):
    pass


def _tokens(text: str) -> list[str]:
    text = unicodedata.normalize("NFC", text).casefold()
    return _TOKEN_RE.findall(text)


def hashed_sentence_vector(text: str, salt: str) -> np.ndarray:
    """Deterministic 768-dim unit vector from hashed tokens and bigrams."""
    vec = np.zeros(EMBEDDING_DIM)
    tokens = _tokens(text)
    features = tokens + [f"{a}\x01{b}" for a, b in zip(tokens, tokens[1:])]
    if not features:
        features = ["\x02empty"]
    for feature in features:
        digest = hashlib.sha256(f"{salt}\x00{feature}".encode("utf-8")).digest()
        for chunk in range(0, 12, 4):
            raw = int.from_bytes(digest[chunk:chunk + 4], "big")
            index = raw % EMBEDDING_DIM
            sign = 1.0 if (raw >> 31) & 1 else -1.0
            vec[index] += sign
    norm = math.sqrt(float(vec @ vec))
    return vec / norm if norm > 0 else vec


def _hashed_embedder(salt: str) -> Callable[[str], np.ndarray]:
    return lambda text: hashed_sentence_vector(text, salt)


def _st_embedder(model_name: str) -> Callable[[str], np.ndarray]:
    try:
        from sentence_transformers import SentenceTransformer
    except ImportError:
        raise ModelLoadFailure(
            "sentence-transformers is not installed; use --backend hashed or install "
            "the 'transformers' extra"
        ) from None
    try:
        model = SentenceTransformer(model_name)
    except Exception as exc:
        raise ModelLoadFailure(f"could not load {model_name!r}: {exc}") from exc

    def encode(text: str) -> np.ndarray:
        out = np.asarray(model.encode([text], show_progress_bar=False)[0], dtype=np.float64)
        if out.shape != (EMBEDDING_DIM,):
            raise ModelLoadFailure(
                f"{model_name!r} produced {out.shape}, expected ({EMBEDDING_DIM},)"
            )
        return out

    return encode


def make_embedders(backend: str, mono_model: str, multi_model: str):
    """Return (mono_fn, multi_fn, model identifiers for the manifest)."""
    if backend == "hashed":
        ids = {
            "mono": f"{HASHED_BACKEND_VERSION}:mono",
            "multi": f"{HASHED_BACKEND_VERSION}:multi",
        }
        return _hashed_embedder("mono"), _hashed_embedder("multi"), ids
    if backend == "st":
        ids = {"mono": f"st:{mono_model}", "multi": f"st:{multi_model}"}
        return _st_embedder(mono_model), _st_embedder(multi_model), ids
    raise AdapterError(f"unknown embedding backend {backend!r}")


def _read_tweets(path: Path) -> Iterable[tuple[str, str]]:
    seen: set[str] = set()
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"{path}:{lineno}: invalid JSON ({exc.msg})") from None
            tweet_id = obj.get("tweet_id")
            text = obj.get("text")
            if not isinstance(tweet_id, str) or not tweet_id:
                raise SchemaError(f"{path}:{lineno}: tweet_id must be a nonempty string")
            if tweet_id in seen:
                raise SchemaError(f"{path}:{lineno}: duplicate tweet_id {tweet_id!r}")
            if not isinstance(text, str):
                raise SchemaError(f"{path}:{lineno}: text must be a string")
            seen.add(tweet_id)
            yield tweet_id, text


def embed_tweets(
    tweets_file: Path,
    output_file: Path,
    backend: str = "hashed",
    mono_model: str = DEFAULT_MONO_MODEL,
    multi_model: str = DEFAULT_MULTI_MODEL,
) -> AdapterManifest:
    """Write one embeddings.jsonl line per tweet, plus a provenance manifest."""
    mono_fn, multi_fn, model_ids = make_embedders(backend, mono_model, multi_model)
    output_file = Path(output_file)
    count = 0
    with open(output_file, "w", encoding="utf-8") as out:
        for tweet_id, text in _read_tweets(Path(tweets_file)):
            e_mono = mono_fn(text)
            e_multi = multi_fn(text)
            for name, vec in (("mono", e_mono), ("multi", e_multi)):
                if not np.all(np.isfinite(vec)):
                    raise AdapterError(f"{name} embedding for {tweet_id!r} is not finite")
            out.write(json.dumps({
                "tweet_id": tweet_id,
                "e_mono": [round(float(v), 9) for v in e_mono],
                "e_multi": [round(float(v), 9) for v in e_multi],
            }) + "\n")
            count += 1
    manifest = AdapterManifest(
        models=model_ids,
        inputs=[str(tweets_file)],
        output=str(output_file),
        record_count=count,
    )
    manifest.write(manifest_path_for(output_file))
    return manifest
