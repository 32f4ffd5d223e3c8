"""Adapter command line: `adapter embed` and `adapter faces`.

Exit codes: 0 success, 1 validation/model error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .embed import (
    DEFAULT_MONO_MODEL,
    DEFAULT_MULTI_MODEL,
    AdapterError,
    ModelLoadFailure,
    embed_tweets,
)
from .faces import DEFAULT_MATCH_THRESHOLD, extract_expressions, list_media_images


def _cmd_embed(args) -> int:
    manifest = embed_tweets(
        Path(args.infile),
        Path(args.out),
        backend=args.backend,
        mono_model=args.mono_model,
        multi_model=args.multi_model,
    )
    print(f"wrote {manifest.record_count} embedding rows to {manifest.output}")
    return 0


def _cmd_faces(args) -> int:
    images = list_media_images(Path(args.images))
    if not images:
        print(f"error: no images found in {args.images}", file=sys.stderr)
        return 1
    manifest = extract_expressions(
        Path(args.profile),
        images,
        Path(args.out),
        participant_id=args.participant_id,
        detector=args.detector,
        cascade_path=args.cascade,
        match_threshold=args.match_threshold,
        expression_model=args.expression_model,
    )
    print(f"wrote {manifest.record_count} expression rows to {manifest.output}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adapter",
        description="Produce emoalign wire files from pretrained (or pinned fallback) models.",
    )
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("embed", help="embed tweets into embeddings.jsonl")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--backend", choices=["hashed", "st"], default="hashed")
    p.add_argument("--mono-model", default=DEFAULT_MONO_MODEL)
    p.add_argument("--multi-model", default=DEFAULT_MULTI_MODEL)
    p.set_defaults(func=_cmd_embed)

    p = sub.add_parser("faces", help="extract expressions.jsonl from a participant's images")
    p.add_argument("--profile", required=True)
    p.add_argument("--images", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--participant-id", required=True)
    p.add_argument("--detector", choices=["frame", "cascade"], default="frame")
    p.add_argument("--cascade")
    p.add_argument("--match-threshold", type=float, default=DEFAULT_MATCH_THRESHOLD)
    p.add_argument("--expression-model")
    p.set_defaults(func=_cmd_faces)

    return parser


def cli_dispatch(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 1
        return 0 if code == 0 else 1
    if not getattr(args, "func", None):
        parser.print_usage(sys.stderr)
        return 1
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc.filename or exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (AdapterError, ModelLoadFailure, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
