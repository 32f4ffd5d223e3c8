"""Model-boundary adapter producing emoalign wire files."""

from .embed import AdapterError, ModelLoadFailure, SchemaError, embed_tweets, hashed_sentence_vector
from .faces import extract_expressions, list_media_images, moments_expression
from .manifest import AdapterManifest, manifest_path_for

__all__ = [
    "AdapterError",
    "AdapterManifest",
    "ModelLoadFailure",
    "SchemaError",
    "embed_tweets",
    "extract_expressions",
    "hashed_sentence_vector",
    "list_media_images",
    "manifest_path_for",
    "moments_expression",
]
