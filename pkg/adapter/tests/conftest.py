from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest
from PIL import Image

TEN_TWEETS = [
    {"tweet_id": f"t{i:02d}", "participant_id": "p01",
     "text": text, "created_at": f"2026-02-{i + 1:02d}T09:00:00+00:00", "label": label}
    for i, (text, label) in enumerate([
        ("امروز روز خوبی بود", "happiness"),
        ("دلم گرفته", "sadness"),
        ("جلسه ساعت ده", "neutral"),
        ("کلافه شدم", "anger"),
        ("دلم تنگ شده", "intense_emotions"),
        ("چه خبر خوبی", "happiness"),
        ("هوا ابری است", "neutral"),
        ("امروز روز خوبی بود", "happiness"),  # duplicate text on purpose
        ("خیلی خسته‌ام", "sadness"),
        ("فردا می‌بینمت", "neutral"),
    ])
]


@pytest.fixture
def tweets_file(tmp_path) -> Path:
    path = tmp_path / "tweets.jsonl"
    path.write_text(
        "".join(json.dumps(row, ensure_ascii=False) + "\n" for row in TEN_TWEETS),
        encoding="utf-8",
    )
    return path


def _structured_image(seed: int, size=(64, 64)) -> Image.Image:
    rng = np.random.default_rng(seed)
    base = np.linspace(40, 200, size[0])[:, None] + np.zeros((1, size[1]))
    base += rng.normal(0, 12, size)
    base[18:30, 14:24] = 30   # dark patches so crops have usable structure
    base[18:30, 40:50] = 30
    base[42:50, 20:44] = 70
    return Image.fromarray(np.clip(base, 0, 255).astype("uint8"), mode="L")


@pytest.fixture
def image_dir(tmp_path) -> Path:
    """Profile image plus media images: two matching, one noise, one corrupt."""
    directory = tmp_path / "images"
    directory.mkdir()
    profile = _structured_image(seed=1)
    profile.save(tmp_path / "profile.png")

    profile.save(directory / "media_a.png")  # identical to the profile
    slight = np.asarray(_structured_image(seed=1), dtype=np.int16)
    slight = np.clip(slight + np.random.default_rng(5).integers(-6, 7, slight.shape), 0, 255)
    Image.fromarray(slight.astype("uint8"), mode="L").save(directory / "media_b.png")

    noise = np.random.default_rng(9).integers(0, 256, (64, 64)).astype("uint8")
    Image.fromarray(noise, mode="L").save(directory / "media_c.png")

    (directory / "media_d.png").write_bytes(b"this is not an image at all")
    return directory
