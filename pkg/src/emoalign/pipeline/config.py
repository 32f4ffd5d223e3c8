"""Run configuration: TOML file plus CLI flag overrides (flags win)."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from ..stats import Variant


class ConfigError(ValueError):
    pass


_PATH_KEYS = ("tweets", "embeddings", "expressions", "surveys", "lexicon", "model", "out_dir")


@dataclass
class RunConfig:
    tweets: Path
    embeddings: Path
    expressions: Path
    surveys: Path
    lexicon: Path
    model: Path
    out_dir: Path
    tweet_limit: int = 50
    image_limit: int = 20
    confidence_threshold: float = 0.80
    ttest_variant: Variant = Variant.WELCH
    alpha: float = 0.05
    seed: int = 0

    def __post_init__(self):
        for key in _PATH_KEYS:
            setattr(self, key, Path(getattr(self, key)))
        if self.tweet_limit <= 0 or self.image_limit <= 0:
            raise ConfigError("tweet_limit and image_limit must be positive")
        if not 0.0 <= self.confidence_threshold <= 1.0:
            raise ConfigError(f"confidence_threshold {self.confidence_threshold} outside [0, 1]")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError(f"alpha {self.alpha} outside (0, 1)")
        if isinstance(self.ttest_variant, str):
            try:
                self.ttest_variant = Variant(self.ttest_variant)
            except ValueError:
                raise ConfigError(f"unknown ttest_variant {self.ttest_variant!r}") from None

    def echo(self) -> dict:
        """Stable dictionary form for embedding into reports."""
        return {
            "tweets": str(self.tweets),
            "embeddings": str(self.embeddings),
            "expressions": str(self.expressions),
            "surveys": str(self.surveys),
            "lexicon": str(self.lexicon),
            "model": str(self.model),
            "out_dir": str(self.out_dir),
            "tweet_limit": self.tweet_limit,
            "image_limit": self.image_limit,
            "confidence_threshold": self.confidence_threshold,
            "ttest_variant": self.ttest_variant.value,
            "alpha": self.alpha,
            "seed": self.seed,
        }


def load_config(path: Path, overrides: dict | None = None) -> RunConfig:
    """Parse a TOML config; relative paths resolve against the config file."""
    path = Path(path)
    try:
        with open(path, "rb") as handle:
            raw = tomllib.load(handle)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: invalid TOML ({exc})") from None
    if overrides:
        raw.update({k: v for k, v in overrides.items() if v is not None})

    missing = [k for k in _PATH_KEYS if k not in raw]
    if missing:
        raise ConfigError(f"{path}: missing required keys: {', '.join(missing)}")

    base = path.parent
    for key in _PATH_KEYS:
        value = Path(raw[key])
        if not value.is_absolute():
            value = base / value
        raw[key] = value

    known = {f for f in RunConfig.__dataclass_fields__}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"{path}: unknown keys: {', '.join(sorted(unknown))}")
    return RunConfig(**raw)
