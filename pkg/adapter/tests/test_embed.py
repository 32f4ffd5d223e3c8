from __future__ import annotations

import json
import math

import numpy as np
import pytest

from emoalign_adapter import ModelLoadFailure, SchemaError, embed_tweets, hashed_sentence_vector
from emoalign_adapter.cli import cli_dispatch
from emoalign_adapter.manifest import manifest_path_for


def read_rows(path):
    return [json.loads(line) for line in path.read_text(encoding="utf-8").splitlines()]


class TestHashedVectors:
    def test_unit_norm_and_dim(self):
        vec = hashed_sentence_vector("سلام دنیا", "mono")
        assert vec.shape == (768,)
        assert math.sqrt(float(vec @ vec)) == pytest.approx(1.0, abs=1e-12)

    def test_deterministic(self):
        a = hashed_sentence_vector("متن آزمایشی", "mono")
        b = hashed_sentence_vector("متن آزمایشی", "mono")
        assert np.array_equal(a, b)

    def test_salts_differ(self):
        a = hashed_sentence_vector("متن آزمایشی", "mono")
        b = hashed_sentence_vector("متن آزمایشی", "multi")
        assert not np.array_equal(a, b)

    def test_different_texts_differ(self):
        a = hashed_sentence_vector("متن اول", "mono")
        b = hashed_sentence_vector("متن دوم", "mono")
        assert not np.array_equal(a, b)

    def test_empty_text_still_finite(self):
        vec = hashed_sentence_vector("", "mono")
        assert np.all(np.isfinite(vec))


class TestEmbedTweets:
    def test_shape_contract(self, tweets_file, tmp_path):
        out = tmp_path / "embeddings.jsonl"
        manifest = embed_tweets(tweets_file, out)
        rows = read_rows(out)
        assert len(rows) == 10
        assert manifest.record_count == 10
        for row in rows:
            assert len(row["e_mono"]) == 768
            assert len(row["e_multi"]) == 768
            assert all(math.isfinite(v) for v in row["e_mono"] + row["e_multi"])

    def test_identical_texts_identical_vectors(self, tweets_file, tmp_path):
        out = tmp_path / "embeddings.jsonl"
        embed_tweets(tweets_file, out)
        rows = {r["tweet_id"]: r for r in read_rows(out)}
        assert rows["t00"]["e_mono"] == rows["t07"]["e_mono"]  # duplicate texts
        assert rows["t00"]["e_multi"] == rows["t07"]["e_multi"]

    def test_determinism_across_runs(self, tweets_file, tmp_path):
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        embed_tweets(tweets_file, a)
        embed_tweets(tweets_file, b)
        assert a.read_bytes() == b.read_bytes()

    def test_manifest_written(self, tweets_file, tmp_path):
        out = tmp_path / "embeddings.jsonl"
        embed_tweets(tweets_file, out)
        manifest = json.loads(manifest_path_for(out).read_text(encoding="utf-8"))
        assert manifest["record_count"] == 10
        assert manifest["models"]["mono"].startswith("hashed-v1")
        assert str(tweets_file) in manifest["inputs"]

    def test_duplicate_tweet_id_rejected(self, tmp_path):
        path = tmp_path / "tweets.jsonl"
        row = {"tweet_id": "t1", "participant_id": "p", "text": "x"}
        path.write_text(json.dumps(row) + "\n" + json.dumps(row) + "\n", encoding="utf-8")
        with pytest.raises(SchemaError, match="duplicate"):
            embed_tweets(path, tmp_path / "out.jsonl")

    def test_unknown_backend_rejected(self, tweets_file, tmp_path):
        with pytest.raises(ValueError, match="backend"):
            embed_tweets(tweets_file, tmp_path / "out.jsonl", backend="quantum")


class TestCli:
    def test_embed_subcommand(self, tweets_file, tmp_path, capsys):
        out = tmp_path / "embeddings.jsonl"
        code = cli_dispatch(["embed", "--in", str(tweets_file), "--out", str(out)])
        assert code == 0
        assert "10 embedding rows" in capsys.readouterr().out
        assert out.exists()

    def test_missing_input_exit_two(self, tmp_path, capsys):
        code = cli_dispatch(["embed", "--in", str(tmp_path / "nope.jsonl"),
                             "--out", str(tmp_path / "o.jsonl")])
        assert code == 2

    def test_unknown_subcommand_exit_one(self):
        assert cli_dispatch(["summon"]) == 1
