"""Face matching and expression extraction.

Pipeline per media image: detect face regions, embed each crop, cosine-match
against the participant's profile face, and run the expression head on the
best match. ``face_found`` is false when no region clears the match threshold
or the image is unreadable.

Detectors:
  frame    the whole image is the candidate region (curated corpora; offline)
  cascade  OpenCV Haar cascade; needs an OpenCV build with CascadeClassifier
           and a cascade XML file

The expression head is a deterministic pixel-moments model ("moments-v1"): it
maps brightness/contrast/gradient statistics of the crop through a fixed
linear layer and softmax. It is a stand-in with pinned provenance, not a
trained expression classifier; swap in a real model via --expression-model.
"""

from __future__ import annotations

import json
import math
import warnings
from pathlib import Path
from typing import Callable

import numpy as np
from PIL import Image, UnidentifiedImageError

from .embed import AdapterError, ModelLoadFailure
from .manifest import AdapterManifest, manifest_path_for

MATCH_SIZE = 32
DEFAULT_MATCH_THRESHOLD = 0.6
EXPRESSION_BACKEND_VERSION = "moments-v1"
MATCHER_VERSION = "graycosine-v1"

IMAGE_SUFFIXES = {".png", ".jpg", ".jpeg", ".bmp", ".gif", ".webp"}


def _to_gray(image: Image.Image) -> np.ndarray:
    return np.asarray(image.convert("L"), dtype=np.float64) / 255.0


def load_gray(path: Path) -> np.ndarray | None:
    """Grayscale array in [0,1], or None when the file is not a readable image."""
    try:
        with Image.open(path) as img:
            return _to_gray(img)
    except (UnidentifiedImageError, OSError):
        return None


def detect_regions(gray: np.ndarray, detector: str, cascade_path: str | None) -> list[np.ndarray]:
    if detector == "frame":
        return [gray]
    if detector == "cascade":
        try:
            import cv2
        except ImportError:
            raise ModelLoadFailure("cascade detector needs opencv-python") from None
        if not hasattr(cv2, "CascadeClassifier"):
            raise ModelLoadFailure("this OpenCV build does not provide CascadeClassifier")
        if not cascade_path:
            raise ModelLoadFailure("cascade detector needs --cascade <xml file>")
        classifier = cv2.CascadeClassifier(cascade_path)
        if classifier.empty():
            raise ModelLoadFailure(f"could not load cascade file {cascade_path!r}")
        frame = (gray * 255).astype("uint8")
        boxes = classifier.detectMultiScale(frame, scaleFactor=1.1, minNeighbors=4)
        return [gray[y:y + h, x:x + w] for (x, y, w, h) in boxes]
    raise AdapterError(f"unknown detector {detector!r}")


def face_embedding(crop: np.ndarray) -> np.ndarray:
    """Zero-mean, unit-norm vector of the resized crop, for cosine matching."""
    img = Image.fromarray(np.clip(crop * 255.0, 0, 255).astype("uint8"))
    small = np.asarray(img.resize((MATCH_SIZE, MATCH_SIZE)), dtype=np.float64).ravel()
    small -= small.mean()
    norm = math.sqrt(float(small @ small))
    return small / norm if norm > 0 else small


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    return float(a @ b)


def _moments_features(crop: np.ndarray) -> np.ndarray:
    gy, gx = np.gradient(crop)
    h, w = crop.shape
    upper, lower = crop[: h // 2], crop[h // 2:]
    left, right = crop[:, : w // 2], crop[:, w // 2:]
    return np.array([
        crop.mean(),
        crop.std(),
        np.abs(gx).mean(),
        np.abs(gy).mean(),
        upper.mean() - lower.mean(),
        left.mean() - right.mean(),
        np.abs(crop - crop.mean()).mean(),
    ])


# Fixed 7x7 weights for the moments head: arbitrary but pinned, full rank.
_MOMENTS_WEIGHTS = np.array([
    [2.1, -1.3, 0.7, 0.2, -0.5, 1.1, -0.8],
    [-0.9, 1.8, -0.4, 1.2, 0.6, -1.5, 0.3],
    [0.5, 0.9, 1.6, -1.1, -0.2, 0.4, 1.3],
    [1.4, -0.6, -1.2, 0.8, 1.5, 0.1, -0.7],
    [-1.1, 0.3, 0.9, -0.8, 1.9, 0.6, 0.2],
    [0.8, 1.2, -0.5, 0.4, -1.3, 1.7, 0.9],
    [-0.4, -0.7, 1.1, 1.6, 0.3, -0.9, 1.2],
]) * 3.0


def moments_expression(crop: np.ndarray) -> list[float]:
    """Seven-way softmax over pixel-moment features; sums to 1 exactly."""
    logits = _MOMENTS_WEIGHTS @ _moments_features(crop)
    logits -= logits.max()
    exps = np.exp(logits)
    probs = exps / exps.sum()
    probs = probs / probs.sum()
    return [float(p) for p in probs]


def _torch_expression(model_path: str) -> Callable[[np.ndarray], list[float]]:
    try:
        import torch
    except ImportError:
        raise ModelLoadFailure("expression model backend needs torch") from None
    try:
        model = torch.jit.load(model_path, map_location="cpu")
    except Exception as exc:
        raise ModelLoadFailure(f"could not load expression model {model_path!r}: {exc}") from exc
    model.eval()

    def run(crop: np.ndarray) -> list[float]:
        img = Image.fromarray(np.clip(crop * 255.0, 0, 255).astype("uint8"))
        arr = np.asarray(img.resize((48, 48)), dtype=np.float32) / 255.0
        with torch.no_grad():
            logits = model(torch.from_numpy(arr)[None, None, :, :]).numpy().ravel()
        if logits.shape != (7,):
            raise ModelLoadFailure(f"expression model produced shape {logits.shape}")
        logits = logits - logits.max()
        exps = np.exp(logits)
        probs = exps / exps.sum()
        return [float(p) for p in probs]

    return run


def extract_expressions(
    profile_image: Path,
    media_images: list[Path],
    output_file: Path,
    participant_id: str,
    detector: str = "frame",
    cascade_path: str | None = None,
    match_threshold: float = DEFAULT_MATCH_THRESHOLD,
    expression_model: str | None = None,
) -> AdapterManifest:
    """Write one expressions.jsonl line per media image, plus a manifest."""
    profile_gray = load_gray(Path(profile_image))
    if profile_gray is None:
        raise AdapterError(f"profile image {profile_image} is not readable")
    profile_regions = detect_regions(profile_gray, detector, cascade_path)
    if not profile_regions:
        raise AdapterError(f"no face region found in profile image {profile_image}")
    profile_vec = face_embedding(profile_regions[0])

    if expression_model:
        expression_fn = _torch_expression(expression_model)
        expression_id = f"torchscript:{expression_model}"
    else:
        expression_fn = moments_expression
        expression_id = EXPRESSION_BACKEND_VERSION

    output_file = Path(output_file)
    count = 0
    with open(output_file, "w", encoding="utf-8") as out:
        for image_path in media_images:
            image_path = Path(image_path)
            row = {"participant_id": participant_id, "image_id": image_path.stem,
                   "face_found": False, "probs7": [0.0] * 7}
            gray = load_gray(image_path)
            if gray is None:
                warnings.warn(f"skipping unreadable image {image_path}", stacklevel=2)
            else:
                candidates = detect_regions(gray, detector, cascade_path)
                best, best_score = None, -2.0
                for crop in candidates:
                    score = cosine(profile_vec, face_embedding(crop))
                    if score > best_score:
                        best, best_score = crop, score
                if best is not None and best_score >= match_threshold:
                    row["face_found"] = True
                    row["probs7"] = expression_fn(best)
            out.write(json.dumps(row) + "\n")
            count += 1

    manifest = AdapterManifest(
        models={
            "detector": detector,
            "matcher": f"{MATCHER_VERSION}(threshold={match_threshold})",
            "expression": expression_id,
        },
        inputs=[str(profile_image)] + [str(p) for p in media_images],
        output=str(output_file),
        record_count=count,
    )
    manifest.write(manifest_path_for(output_file))
    return manifest


def list_media_images(directory: Path) -> list[Path]:
    """Sorted image files directly inside ``directory``."""
    return sorted(
        p for p in Path(directory).iterdir()
        if p.is_file() and p.suffix.lower() in IMAGE_SUFFIXES
    )
