"""Command-line interface.

Exit codes: 0 success, 1 validation error (bad schema, bad arguments, unknown
subcommand), 2 I/O error (missing or unreadable files).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import classifier as clf
from . import ingest, stats
from .pipeline import config as config_mod
from .pipeline import files as files_mod
from .pipeline import report as report_mod
from .pipeline import runner as runner_mod
from .sentiment import (
    SentimentClass,
    SentimentError,
    average_distributions,
    map_expression_7to5,
    survey_to_distribution,
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2


def _print_json(obj) -> None:
    print(json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False))


def _cmd_ingest(args) -> int:
    problems = []
    report = None
    if args.tweets:
        tweets = ingest.load_tweets(Path(args.tweets))
        report = ingest.scan_dataset(tweets).to_dict()
    if args.embeddings:
        files_mod.read_embeddings(Path(args.embeddings))
    if args.expressions:
        files_mod.read_expressions(Path(args.expressions))
    if args.surveys:
        files_mod.read_surveys(Path(args.surveys))
    if not any([args.tweets, args.embeddings, args.expressions, args.surveys]):
        print("ingest: no input files given", file=sys.stderr)
        return EXIT_VALIDATION
    out = {"errors": problems, "dataset_report": report}
    if args.out:
        Path(args.out).write_text(
            json.dumps(out, sort_keys=True, indent=2, ensure_ascii=False) + "\n",
            encoding="utf-8",
        )
    else:
        _print_json(out)
    return EXIT_OK


def _labeled_pairs(tweets_path: Path, embeddings_path: Path):
    tweets = ingest.load_tweets(tweets_path)
    embeddings = files_mod.read_embeddings(embeddings_path)
    pairs = []
    for tweet in tweets:
        if tweet.gold_label is None:
            continue
        record = embeddings.get(tweet.tweet_id)
        if record is None:
            raise ingest.SchemaError(f"no embedding for labeled tweet {tweet.tweet_id!r}")
        pairs.append((record, tweet.gold_label))
    return tweets, embeddings, pairs


def _cmd_train(args) -> int:
    _, _, pairs = _labeled_pairs(Path(args.tweets), Path(args.embeddings))
    if not pairs:
        print("train: no labeled tweets in the dataset", file=sys.stderr)
        return EXIT_VALIDATION
    config = clf.TrainConfig(
        hidden_dims=tuple(args.hidden_dims),
        activations=tuple(args.activations),
        learning_rate=args.learning_rate,
        batch_size=args.batch_size,
        max_epochs=args.max_epochs,
    )
    model, history = clf.mlp_train_with_history(pairs, config, seed=args.seed)
    clf.save_model(model, Path(args.out))
    _print_json({
        "examples": len(pairs),
        "epochs": history.stopped_epoch,
        "final_loss": history.checkpoint_losses[-1],
        "model": str(args.out),
    })
    return EXIT_OK


def _cmd_classify(args) -> int:
    model = clf.load_model(Path(args.model))
    lexicon = clf.load_lexicon(Path(args.lexicon))
    tweets = ingest.load_tweets(Path(args.tweets))
    embeddings = files_mod.read_embeddings(Path(args.embeddings))
    lines = []
    for tweet in tweets:
        record = embeddings.get(tweet.tweet_id)
        if record is None:
            raise ingest.SchemaError(f"no embedding for tweet {tweet.tweet_id!r}")
        output = clf.hybrid_predict(
            model, lexicon, ingest.normalize_text(tweet.text),
            clf.concat_embeddings(record), threshold=args.threshold,
        )
        lines.append(json.dumps({
            "tweet_id": tweet.tweet_id,
            "label": output.label.value,
            "confidence": output.confidence,
            "source": output.source.value,
            "probs": list(output.probs.probs),
        }, sort_keys=True, ensure_ascii=False))
    text = "\n".join(lines) + ("\n" if lines else "")
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_eval(args) -> int:
    tweets = ingest.load_tweets(Path(args.tweets))
    golds_by_id = {t.tweet_id: t.gold_label for t in tweets if t.gold_label is not None}
    preds, golds = [], []
    for lineno, obj in ingest.iter_jsonl(Path(args.preds)):
        tweet_id = obj.get("tweet_id")
        label = obj.get("label")
        if tweet_id not in golds_by_id:
            continue
        preds.append(SentimentClass.from_wire(label))
        golds.append(golds_by_id[tweet_id])
    if not preds:
        print("eval: no predictions matched labeled tweets", file=sys.stderr)
        return EXIT_VALIDATION
    _print_json(clf.evaluate(preds, golds).to_dict())
    return EXIT_OK


def _cmd_images(args) -> int:
    expressions = files_mod.read_expressions(Path(args.expressions))
    result = {}
    for pid in sorted(expressions):
        faces = [
            map_expression_7to5(row.vector)
            for row in expressions[pid]
            if row.vector.face_found
        ]
        result[pid] = list(average_distributions(faces).probs) if faces else None
    _print_json(result)
    return EXIT_OK


def _cmd_survey(args) -> int:
    surveys = files_mod.read_surveys(Path(args.surveys))
    result = {
        pid: list(survey_to_distribution(responses).probs)
        for pid, responses in sorted(surveys.items())
    }
    _print_json(result)
    return EXIT_OK


def _config_from_args(args) -> config_mod.RunConfig:
    overrides = {
        "tweet_limit": args.tweet_limit,
        "image_limit": args.image_limit,
        "confidence_threshold": args.threshold,
        "ttest_variant": args.variant,
        "alpha": args.alpha,
        "seed": args.seed,
        "out_dir": args.out_dir,
    }
    return config_mod.load_config(Path(args.config), overrides)


def _cmd_analyze(args) -> int:
    config = _config_from_args(args)
    report = runner_mod.run_cohort(config)
    written = report_mod.emit_report(report, config.out_dir)
    _print_json({
        "participants": len(report.participants),
        "files": [str(p) for p in written[:2]],
        "similarity_stats": {k: v.to_dict() for k, v in report.similarity_stats.items()},
    })
    return EXIT_OK


def _cmd_report(args) -> int:
    report = report_mod.load_report(Path(args.report_json))
    written = report_mod.emit_report(report, Path(args.out_dir))
    _print_json({"files": [str(p) for p in written]})
    return EXIT_OK


def _summary_rows(path: Path, variant: stats.Variant, alpha: float) -> list[stats.TTestResult]:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    try:
        n_by_group = {g: int(doc.get("group_n", {}).get(g, doc["n"])) for g in doc["groups"]}
        groups = {
            stats.Group(g): {
                SentimentClass(s): (float(c["mean"]), float(c["std"]))
                for s, c in by_s.items()
            }
            for g, by_s in doc["groups"].items()
        }
    except (KeyError, ValueError) as exc:
        raise ingest.SchemaError(f"{path}: bad summary document ({exc})") from None
    rows = []
    for cls in stats.TABLE_SENTIMENT_ORDER:
        for g1, g2 in stats.GROUP_PAIRS:
            m1, s1 = groups[g1][cls]
            m2, s2 = groups[g2][cls]
            base = stats.ttest_from_summary(
                m1, s1, n_by_group[g1.value], m2, s2, n_by_group[g2.value], variant, alpha
            )
            rows.append(stats.TTestResult(
                t_statistic=base.t_statistic, df=base.df, p_value=base.p_value,
                significant=base.significant, variant=base.variant,
                degenerate=base.degenerate, sentiment=cls,
                group1=g1.value, group2=g2.value,
            ))
    return rows


def _cmd_stats(args) -> int:
    variant = stats.Variant(args.variant)
    if args.summary:
        rows = _summary_rows(Path(args.summary), variant, args.alpha)
    elif args.raw:
        doc = json.loads(Path(args.raw).read_text(encoding="utf-8"))
        try:
            xs, ys = doc["group1"], doc["group2"]
        except (KeyError, TypeError):
            raise ingest.SchemaError(f"{args.raw}: expected fields group1 and group2") from None
        rows = [stats.ttest_ind([float(v) for v in xs], [float(v) for v in ys], variant, args.alpha)]
    else:
        print("stats: provide --summary or --raw", file=sys.stderr)
        return EXIT_VALIDATION
    _print_json([row.to_dict() for row in rows])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="emoalign",
        description="Measure alignment between social-media sentiment and real-world emotions.",
    )
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("ingest", help="validate input files and report dataset issues")
    p.add_argument("--tweets")
    p.add_argument("--embeddings")
    p.add_argument("--expressions")
    p.add_argument("--surveys")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("train", help="train the sentiment classifier on labeled tweets")
    p.add_argument("--tweets", required=True)
    p.add_argument("--embeddings", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--hidden-dims", type=int, nargs="+", default=[512, 128])
    p.add_argument("--activations", nargs="+", default=["relu", "leaky_relu"])
    p.add_argument("--learning-rate", type=float, default=1e-3)
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--max-epochs", type=int, default=100)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("classify", help="classify tweets with the hybrid model")
    p.add_argument("--model", required=True)
    p.add_argument("--lexicon", required=True)
    p.add_argument("--tweets", required=True)
    p.add_argument("--embeddings", required=True)
    p.add_argument("--threshold", type=float, default=clf.DEFAULT_CONFIDENCE_THRESHOLD)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("eval", help="evaluate predictions against gold labels")
    p.add_argument("--preds", required=True)
    p.add_argument("--tweets", required=True)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("images", help="per-participant image sentiment distributions")
    p.add_argument("--expressions", required=True)
    p.set_defaults(func=_cmd_images)

    p = sub.add_parser("survey", help="per-participant real-world distributions")
    p.add_argument("--surveys", required=True)
    p.set_defaults(func=_cmd_survey)

    p = sub.add_parser("analyze", help="full cohort analysis and report emission")
    p.add_argument("--config", required=True)
    p.add_argument("--tweet-limit", type=int, dest="tweet_limit")
    p.add_argument("--image-limit", type=int, dest="image_limit")
    p.add_argument("--threshold", type=float)
    p.add_argument("--variant", choices=[v.value for v in stats.Variant])
    p.add_argument("--alpha", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--out-dir", dest="out_dir")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("report", help="re-emit HTML from an existing report.json")
    p.add_argument("--report-json", required=True)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("stats", help="t-tests from summary statistics or raw samples")
    p.add_argument("--summary")
    p.add_argument("--raw")
    p.add_argument("--variant", choices=[v.value for v in stats.Variant], default="welch")
    p.add_argument("--alpha", type=float, default=stats.DEFAULT_ALPHA)
    p.set_defaults(func=_cmd_stats)

    return parser


def cli_dispatch(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help and 2 for usage errors; usage errors are
        # validation failures under this tool's exit-code contract.
        code = exc.code if isinstance(exc.code, int) else EXIT_VALIDATION
        return EXIT_OK if code == 0 else EXIT_VALIDATION
    if not getattr(args, "func", None):
        parser.print_usage(sys.stderr)
        return EXIT_VALIDATION
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        name = exc.filename if exc.filename else exc
        print(f"error: file not found: {name}", file=sys.stderr)
        return EXIT_IO
    except report_mod.IoFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except json.JSONDecodeError as exc:
        print(f"error: invalid JSON input ({exc})", file=sys.stderr)
        return EXIT_VALIDATION
    except (ValueError, SentimentError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


def main() -> None:
    sys.exit(cli_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
