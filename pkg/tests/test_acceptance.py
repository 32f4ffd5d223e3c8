"""Acceptance suite: one test per acceptance criterion.

Each test prints a [PASS]/[FAIL] line (visible with ``pytest -s`` or in the
captured output of failing tests) and then asserts. Expected values are either
exact, frozen from independent high-precision oracles, or checked live against
an oracle computed inside the test.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import mpmath as mp
import numpy as np

from emoalign.classifier import (
    ClassifierOutput,
    EmbeddingRecord,
    Source,
    TrainConfig,
    cross_entropy,
    cross_entropy_grads,
    evaluate,
    forward_probs,
    init_model,
    mlp_forward,
    mlp_train_with_history,
    resolve_prediction,
)
from emoalign.cli import cli_dispatch
from emoalign.divergence import emd, js, kl, similarity_percent
from emoalign.sentiment import CANONICAL_ORDER, SentimentClass, SentimentDistribution
from emoalign.stats import Variant, student_t_p_value, ttest_from_summary, ttest_ind
from emoalign.synthetic import sample_cohort

from dist_helpers import random_distribution

FIXTURES = Path(__file__).parent / "fixtures"

P = SentimentDistribution((0.4, 0.1, 0.1, 0.2, 0.2))
Q = SentimentDistribution((0.3, 0.2, 0.2, 0.2, 0.1))


def _verdict(name: str, failures: list[str]) -> None:
    status = "PASS" if not failures else "FAIL"
    print(f"[{status}] {name}")
    for line in failures:
        print(f"        {line}")
    assert not failures, f"{name}: {failures}"


# -- 1. distance-metric reproduction ----------------------------------------

def _oracle_kl_smoothed(p, q, eps="1e-10"):
    with mp.workdps(50):
        eps = mp.mpf(eps)
        ps = [mp.mpf(repr(v)) + eps for v in p]
        qs = [mp.mpf(repr(v)) + eps for v in q]
        ps = [v / mp.fsum(ps) for v in ps]
        qs = [v / mp.fsum(qs) for v in qs]
        return float(mp.fsum(a * mp.log(a / b) for a, b in zip(ps, qs) if a > 0))


def _oracle_js(p, q):
    with mp.workdps(50):
        pm = [mp.mpf(repr(v)) for v in p]
        qm = [mp.mpf(repr(v)) for v in q]
        mix = [(a + b) / 2 for a, b in zip(pm, qm)]
        def terms(av, bv):
            return mp.fsum(a * mp.log(a / b) for a, b in zip(av, bv) if a > 0)
        return float((terms(pm, mix) + terms(qm, mix)) / 2)


def test_acceptance_distance_metric_reproduction():
    failures = []
    if abs(emd(P, Q) - 0.4) > 1e-12:
        failures.append(f"emd = {emd(P, Q)!r}, expected 0.4 exactly")
    kl_oracle = _oracle_kl_smoothed(P.probs, Q.probs)
    if abs(kl(P, Q) - kl_oracle) > 1e-9:
        failures.append(f"kl = {kl(P, Q)!r} vs oracle {kl_oracle!r}")
    js_oracle = _oracle_js(P.probs, Q.probs)
    if abs(js(P, Q) - js_oracle) > 1e-9:
        failures.append(f"js = {js(P, Q)!r} vs oracle {js_oracle!r}")
    # sanity-pin the oracle values themselves
    if abs(kl_oracle - 0.115072828849296) > 1e-9:
        failures.append(f"kl oracle drifted: {kl_oracle!r}")
    if abs(js_oracle - 0.0290685320701254) > 1e-9:
        failures.append(f"js oracle drifted: {js_oracle!r}")
    _verdict("distance-metric reproduction", failures)


# -- 2. reference t-statistic reconstruction ---------------------------------

# (sentiment, group1, group2, reported t) in canonical table row order; the
# summary statistics live in fixtures/reference_summary.json.
REPORTED_T = [
    ("happiness", "Images", "Tweets", 13.85),
    ("happiness", "Images", "Friends", 10.87),
    ("happiness", "Tweets", "Friends", -7.16),
    ("sadness", "Images", "Tweets", -10.70),
    ("sadness", "Images", "Friends", -9.61),
    ("sadness", "Tweets", "Friends", 4.83),
    ("anger", "Images", "Tweets", -13.61),
    ("anger", "Images", "Friends", -14.24),
    ("anger", "Tweets", "Friends", 2.71),
    ("neutral", "Images", "Tweets", -17.64),
    ("neutral", "Images", "Friends", -19.95),
    ("neutral", "Tweets", "Friends", 4.00),
    ("intense_emotions", "Images", "Tweets", 7.32),
    ("intense_emotions", "Images", "Friends", 6.22),
    ("intense_emotions", "Tweets", "Friends", -2.69),
]


def _reference_cells():
    doc = json.loads((FIXTURES / "reference_summary.json").read_text(encoding="utf-8"))
    return doc["groups"], doc["n"]


def test_acceptance_reference_tstat_reconstruction():
    groups, n = _reference_cells()
    failures = []
    for sentiment, g1, g2, reported in REPORTED_T:
        c1, c2 = groups[g1][sentiment], groups[g2][sentiment]
        result = ttest_from_summary(c1["mean"], c1["std"], n, c2["mean"], c2["std"], n)
        band = max(0.6, 0.15 * abs(reported))
        delta = abs(result.t_statistic - reported)
        if delta > band:
            failures.append(
                f"{sentiment} {g1}/{g2}: reconstructed t={result.t_statistic:.3f}, "
                f"reported {reported}, |delta|={delta:.3f} > band {band:.3f}"
            )
        if not result.significant:
            failures.append(f"{sentiment} {g1}/{g2}: reconstruction not significant")
    _verdict("reference t-statistic reconstruction (one row is documented as "
             "internally inconsistent in the source tables)", failures)


# -- 3. decision-rule truth table --------------------------------------------

def _model_output(confidence: float) -> ClassifierOutput:
    rest = (1.0 - confidence) / 4.0
    return ClassifierOutput(
        label=SentimentClass.HAPPINESS,
        confidence=confidence,
        probs=SentimentDistribution((confidence, rest, rest, rest, rest)),
        source=Source.MODEL,
    )


def test_acceptance_decision_rule_truth_table():
    failures = []
    for confidence in (0.79, 0.80, 0.81):
        for rule_hit in (SentimentClass.ANGER, None):
            out = resolve_prediction(_model_output(confidence), rule_hit, threshold=0.80)
            takes_model = confidence >= 0.80 or rule_hit is None
            expected_source = Source.MODEL if takes_model else Source.RULE
            expected_label = SentimentClass.HAPPINESS if takes_model else rule_hit
            if out.source is not expected_source or out.label is not expected_label:
                failures.append(
                    f"confidence={confidence}, hit={rule_hit}: got "
                    f"({out.label}, {out.source}), expected ({expected_label}, {expected_source})"
                )

    # the composed predictor must agree with the resolver on real models
    from emoalign.classifier import MlpModel, hybrid_predict, lexicon_from_dict, rule_predict
    lexicon = lexicon_from_dict({"anger": ["عصبانی"]})
    model = MlpModel([5, 5], [], [np.eye(5)], [np.zeros(5)])
    for x, text in ((
        [1.0, 0, 0, 0, 0], "متن عصبانی"), ([8.0, 0, 0, 0, 0], "متن عصبانی"),
        ([1.0, 0, 0, 0, 0], "متن ساده"),
    ):
        direct = mlp_forward(model, x)
        expected = resolve_prediction(
            direct, rule_predict(lexicon, text, direct.probs.probs), 0.80
        )
        got = hybrid_predict(model, lexicon, text, x, 0.80)
        if got != expected:
            failures.append(f"hybrid_predict diverged from resolver on {text!r}")
    _verdict("decision-rule truth table (inclusive 0.80 boundary)", failures)


# -- 4. gradient correctness --------------------------------------------------

def _numerical_gradients(model, x, y, step=1e-5):
    grads = []
    for layer in list(model.weights) + list(model.biases):
        grad = np.zeros_like(layer)
        flat_p, flat_g = layer.ravel(), grad.ravel()
        for i in range(flat_p.size):
            original = flat_p[i]
            flat_p[i] = original + step
            up = cross_entropy(model, x, y)
            flat_p[i] = original - step
            down = cross_entropy(model, x, y)
            flat_p[i] = original
            flat_g[i] = (up - down) / (2 * step)
        grads.append(grad)
    return grads


def test_acceptance_gradient_correctness():
    rng = np.random.default_rng(424242)
    failures = []
    worst = 0.0
    for trial in range(50):
        activations = ["relu", "leaky_relu"] if trial % 2 == 0 else ["leaky_relu", "relu"]
        model = init_model([8, 6, 4, 5], activations, seed=trial)
        x = rng.standard_normal((4, 8))
        y = rng.integers(0, 5, size=4)
        _, a_w, a_b = cross_entropy_grads(model, x, y)
        analytic = np.concatenate([g.ravel() for g in a_w + a_b])
        numeric = np.concatenate([g.ravel() for g in _numerical_gradients(model, x, y)])
        rel = np.linalg.norm(analytic - numeric) / max(
            np.linalg.norm(analytic), np.linalg.norm(numeric), 1e-12
        )
        worst = max(worst, rel)
        if rel >= 1e-4:
            failures.append(f"model {trial}: relative gradient error {rel:.3e}")
    print(f"        worst relative gradient error over 50 models: {worst:.3e}")
    _verdict("gradient correctness (50 random small models)", failures)


# -- 5. classifier training properties ---------------------------------------

def test_acceptance_classifier_training_properties():
    rng = np.random.default_rng(99)
    centers = rng.standard_normal((5, 1536)) * 3.0
    x = np.empty((500, 1536))
    y = np.empty(500, dtype=np.int64)
    for i in range(500):
        cls = i % 5
        x[i] = centers[cls] + rng.standard_normal(1536) * 0.5
        y[i] = cls
    order = rng.permutation(500)
    train_idx, held_idx = order[:400], order[400:]

    failures = []
    # independent separability oracle: nearest centroid classifies perfectly
    dists = np.linalg.norm(x[:, None, :] - centers[None, :, :], axis=2)
    oracle_acc = (dists.argmin(axis=1) == y).mean()
    if oracle_acc < 0.99:
        failures.append(f"separability oracle only reaches {oracle_acc:.3f}")

    pairs = [
        (EmbeddingRecord(f"t{i}", tuple(x[i, :768]), tuple(x[i, 768:])), CANONICAL_ORDER[y[i]])
        for i in train_idx
    ]
    config = TrainConfig(hidden_dims=(64,), activations=("relu",), max_epochs=40)
    model, _ = mlp_train_with_history(pairs, config, seed=7)

    train_acc = (forward_probs(model, x[train_idx]).argmax(axis=1) == y[train_idx]).mean()
    held_acc = (forward_probs(model, x[held_idx]).argmax(axis=1) == y[held_idx]).mean()
    print(f"        train accuracy {train_acc:.4f}, held-out accuracy {held_acc:.4f}")
    if train_acc < 0.99:
        failures.append(f"train accuracy {train_acc:.4f} < 0.99")
    if held_acc < 0.90:
        failures.append(f"held-out accuracy {held_acc:.4f} < 0.90")

    baseline_rng = np.random.default_rng(271828)
    golds = [CANONICAL_ORDER[i % 5] for i in range(10_000)]
    preds = [CANONICAL_ORDER[i] for i in baseline_rng.integers(0, 5, size=10_000)]
    baseline = evaluate(preds, golds).accuracy
    if abs(baseline - 0.20) > 0.02:
        failures.append(f"uniform-random baseline {baseline:.4f} outside 0.20 +/- 0.02")
    _verdict("classifier training properties and 20% baseline", failures)


# -- 6. t-test machinery oracle -----------------------------------------------

def test_acceptance_ttest_machinery_oracle():
    rng = np.random.default_rng(3141)
    failures = []
    for trial in range(100):
        xs = rng.uniform(0, 1, int(rng.integers(2, 40))).tolist()
        ys = rng.uniform(0, 1, int(rng.integers(2, 40))).tolist()
        nx, ny = len(xs), len(ys)
        mx, my = math.fsum(xs) / nx, math.fsum(ys) / ny
        vx = math.fsum((v - mx) ** 2 for v in xs) / (nx - 1) if nx > 1 else 0.0
        vy = math.fsum((v - my) ** 2 for v in ys) / (ny - 1) if ny > 1 else 0.0
        if vx == 0 and vy == 0:
            continue
        expected_t = (mx - my) / math.sqrt(vx / nx + vy / ny)
        result = ttest_ind(xs, ys, Variant.WELCH)
        if abs(result.t_statistic - expected_t) > 1e-12:
            failures.append(f"trial {trial}: t={result.t_statistic!r} vs oracle {expected_t!r}")

    p_limit = student_t_p_value(1.96, 1e6)
    if abs(p_limit - 0.0500) > 0.0002:
        failures.append(f"p(1.96, 1e6) = {p_limit!r}, expected 0.0500 +/- 0.0002")

    for df in (1.0, 9.5, 104.0, 208.0):
        grid = [student_t_p_value(t, df) for t in np.linspace(0.0, 15.0, 100)]
        if not all(b <= a + 1e-12 for a, b in zip(grid, grid[1:])):
            failures.append(f"p-value not monotone in |t| at df={df}")
    _verdict("t-test machinery oracle", failures)


# -- 7. end-to-end determinism and invariants ---------------------------------

def test_acceptance_end_to_end_determinism(tmp_path):
    failures = []
    out_dir = tmp_path / "out"
    digests = []
    for _ in range(3):
        code = cli_dispatch([
            "analyze", "--config", str(FIXTURES / "cohort12" / "run.toml"),
            "--out-dir", str(out_dir),
        ])
        if code != 0:
            failures.append(f"analyze exited {code}")
            break
        digests.append((out_dir / "report.json").read_bytes())
    if len(set(digests)) != 1:
        failures.append("report.json differs across 3 identical runs")

    report = json.loads(digests[0].decode("utf-8"))
    for participant in report["participants"]:
        for key in ("similarity_tweet_real", "similarity_image_real", "similarity_image_tweet"):
            value = participant[key]
            if value is not None and not 0.0 <= value <= 100.0:
                failures.append(f"{participant['participant_id']}.{key} = {value}")
    if len(report["participants"]) != 12:
        failures.append(f"expected 12 eligible participants, got {len(report['participants'])}")

    ident_out = tmp_path / "ident"
    code = cli_dispatch([
        "analyze", "--config", str(FIXTURES / "identical" / "run.toml"),
        "--out-dir", str(ident_out),
    ])
    if code != 0:
        failures.append(f"identical-channel analyze exited {code}")
    ident = json.loads((ident_out / "report.json").read_text(encoding="utf-8"))
    for participant in ident["participants"]:
        for key in ("similarity_tweet_real", "similarity_image_real", "similarity_image_tweet"):
            if participant[key] != 100.0:
                failures.append(f"identical fixture: {key} = {participant[key]}")
    rows = ident["ttests"]
    if len(rows) != 15:
        failures.append(f"expected 15 comparison rows, got {len(rows)}")
    for row in rows:
        if not row["degenerate"] or row["significant"] or row["t_statistic"] != 0.0:
            failures.append(f"identical fixture row not degenerate-nonsignificant: {row}")
    _verdict("end-to-end determinism and invariants", failures)


# -- 8. similarity-convention consistency -------------------------------------

def test_acceptance_similarity_convention(rng):
    failures = []
    for _ in range(1000):
        a, b = random_distribution(rng), random_distribution(rng)
        if abs(similarity_percent(a, b) + 50.0 * emd(a, b) - 100.0) > 1e-9:
            failures.append(f"identity violated for {a.probs} vs {b.probs}")
            break

    groups, _ = _reference_cells()
    order = [c.value for c in CANONICAL_ORDER]
    cohort = sample_cohort(
        friends_means=[groups["Friends"][s]["mean"] for s in order],
        tweets_means=[groups["Tweets"][s]["mean"] for s in order],
        images_means=[groups["Images"][s]["mean"] for s in order],
        n=105,
        seed=7,
    )
    sim_tr = float(np.mean([p.similarity_tweet_real for p in cohort]))
    sim_ir = float(np.mean([p.similarity_image_real for p in cohort]))
    sim_it = float(np.mean([p.similarity_image_tweet for p in cohort]))
    print(f"        sampled cohort similarity means: tweets/real {sim_tr:.2f}, "
          f"images/real {sim_ir:.2f}, images/tweets {sim_it:.2f}")
    for got, target, label in (
        (sim_tr, 75.88, "tweets/real"),
        (sim_ir, 28.67, "images/real"),
        (sim_it, 38.02, "images/tweets"),
    ):
        if abs(got - target) > 8.0:
            failures.append(f"{label} mean {got:.2f} not within 8 of {target}")
    _verdict("similarity-convention consistency", failures)
