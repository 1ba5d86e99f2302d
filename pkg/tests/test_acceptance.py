"""Acceptance suite: one test group per criterion, summarized as PASS/FAIL lines."""
import csv
import math
import os
import random
import time

import pytest

from cremoji.augmentation import AnnotationRecord, cohen_kappa, dataset_emoji_stats
from cremoji.classifier import Confusion, mcc, stratified_folds
from cremoji.cli import RunConfig, cmd_h2
from cremoji.codec import EmojiForm, default_tables, normalize_comment
from cremoji.corpus import load_dataset, write_dataset
from cremoji.embeddings import write_vectors
from cremoji.sentiment import pearson
from cremoji.synthetic import emoji_signal_corpus

from .fuzz import fuzz_corpus


def _read_csv(path):
    with open(path, encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))


def _h2_run(tmp_path, corpus, modes=("features", "embeddings"), **overrides):
    data = tmp_path / "synthetic.csv"
    write_dataset(corpus.dataset, data)
    write_vectors(corpus.word_vectors, tmp_path / "words.vec")
    write_vectors(corpus.emoji_vectors, tmp_path / "emojis.vec")
    cfg = RunConfig(
        word_vectors=str(tmp_path / "words.vec"),
        emoji_vectors=str(tmp_path / "emojis.vec"),
        datasets=(str(data),),
        out=str(tmp_path / "out"),
        **overrides,
    ).validate()
    cmd_h2(cfg, modes)
    return _read_csv(tmp_path / "out" / "metrics.csv"), _read_csv(tmp_path / "out" / "deltas.csv")


@pytest.mark.criterion(1, "metric oracles (mcc, kappa, pearson)")
def test_c1_mcc_oracle():
    tp, fn, fp, tn = 45, 5, 10, 40
    direct = (tp * tn - fp * fn) / math.sqrt((tp + fp) * (tp + fn) * (tn + fp) * (tn + fn))
    assert abs(mcc(Confusion(tp=tp, fp=fp, tn=tn, fn=fn)) - direct) <= 1e-9
    assert abs(direct - 0.7035) < 1e-4


@pytest.mark.criterion(1, "metric oracles (mcc, kappa, pearson)")
def test_c1_kappa_hand_example():
    a = [AnnotationRecord(str(i), "a", g) for i, g in enumerate("xxyy")]
    b = [AnnotationRecord(str(i), "b", g) for i, g in enumerate("xyyy")]
    assert abs(cohen_kappa(a, b).kappa - 0.5) <= 1e-12


@pytest.mark.criterion(1, "metric oracles (mcc, kappa, pearson)")
def test_c1_pearson_hand_example():
    assert abs(pearson([1, 2, 3, 4], [1, 3, 2, 4]) - 0.8) <= 1e-12


@pytest.mark.criterion(2, "codec conformance and 10,000-case fuzz")
def test_c2_forms_normalize_to_configured_glyph():
    tables = default_tables()
    glyph = tables.shortcodes["smile"]
    assert glyph == "\U0001F60A"
    emoticon = next(e for e, name in tables.emoticons.items() if name == "smile")
    for text, form in (("+U1F60A", EmojiForm.CODEPOINT_NOTATION), (":smile:", EmojiForm.SHORTCODE),
                       (emoticon, EmojiForm.EMOTICON)):
        nc = normalize_comment(text, tables)
        assert nc.normalized == glyph
        assert [(t.glyph, t.source_form) for t in nc.tokens] == [(glyph, form)]


@pytest.mark.criterion(2, "codec conformance and 10,000-case fuzz")
def test_c2_fuzz_idempotence_and_span_soundness():
    tables = default_tables()
    start = time.perf_counter()
    failures = []
    for text in fuzz_corpus(10_000, seed=42):
        nc = normalize_comment(text, tables)
        again = normalize_comment(nc.normalized, tables)
        if again.normalized != nc.normalized or again.glyphs != nc.glyphs:
            failures.append(("idempotence", text))
        raw = text.encode("utf-8")
        for t in nc.tokens:
            if raw[t.span[0]:t.span[1]].decode("utf-8") != t.source_text:
                failures.append(("span", text))
    assert failures == []
    assert time.perf_counter() - start < 10


@pytest.mark.criterion(3, "synthetic emoji signal: MCC delta >= +20.0 pp in both modes")
def test_c3_synthetic_reproduction(tmp_path):
    start = time.perf_counter()
    corpus = emoji_signal_corpus(n=1000, seed=42, flip=0.1)
    labels = [r.useful for r in corpus.dataset]
    assert labels.count(1) == labels.count(0) == 500
    _, deltas = _h2_run(tmp_path, corpus)
    by_mode = {row["mode"]: float(row["M"]) for row in deltas}
    assert by_mode["features"] >= 20.0
    assert by_mode["embeddings"] >= 20.0
    assert time.perf_counter() - start < 60


@pytest.mark.criterion(4, "null control: |MCC| < 0.15 with shuffled labels")
def test_c4_null_control(tmp_path):
    start = time.perf_counter()
    corpus = emoji_signal_corpus(n=1000, seed=42, flip=0.1, shuffle_labels=True)
    metrics, _ = _h2_run(tmp_path, corpus)
    assert len(metrics) == 4
    for row in metrics:
        assert abs(float(row["M"])) < 0.15, row
    assert time.perf_counter() - start < 60


@pytest.mark.criterion(5, "emoji-free data: every feature-mode delta is 0.0")
def test_c5_no_emoji_neutrality(tmp_path):
    start = time.perf_counter()
    corpus = emoji_signal_corpus(n=1000, seed=42, with_emoji=False)
    assert not any(normalize_comment(r.text).tokens for r in corpus.dataset)
    _, deltas = _h2_run(tmp_path, corpus, modes=("features",))
    assert len(deltas) == 1
    assert [deltas[0][c] for c in ("P", "R", "A", "M", "F1")] == ["0.0"] * 5
    assert time.perf_counter() - start < 30


@pytest.mark.criterion(6, "determinism: byte-identical outputs, serial and parallel")
def test_c6_determinism(tmp_path):
    corpus = emoji_signal_corpus(n=300, seed=7)
    outputs = []
    for run, n_jobs in enumerate((1, 4, 4)):
        run_dir = tmp_path / f"run{run}"
        run_dir.mkdir()
        _h2_run(run_dir, corpus, n_trees=30, n_jobs=n_jobs)
        outputs.append(tuple((run_dir / "out" / name).read_bytes() for name in ("metrics.csv", "deltas.csv")))
    assert outputs[0] == outputs[1] == outputs[2]


@pytest.mark.criterion(7, "stratification: 52/50 with k=10 gives {5,6}/{5} per fold")
def test_c7_stratification():
    labels = [1] * 52 + [0] * 50
    random.Random(3).shuffle(labels)
    folds = stratified_folds(labels, 10, 42)
    for f in range(10):
        pos = sum(1 for y, g in zip(labels, folds) if g == f and y == 1)
        neg = sum(1 for y, g in zip(labels, folds) if g == f and y == 0)
        assert pos in (5, 6) and neg == 5
    # round-robin oracle: dealing 52 items over 10 folds gives two folds of 6
    assert sorted(sum(1 for y, g in zip(labels, folds) if g == f and y == 1) for f in range(10)) == [5] * 8 + [6] * 2


@pytest.mark.criterion(8, "RevHelper stats: size 1,481 and 18 thumbs-up (needs CREMOJI_REVHELPER)")
def test_c8_revhelper_stats():
    path = os.environ.get("CREMOJI_REVHELPER")
    if not path or not os.path.exists(path):
        pytest.skip("set CREMOJI_REVHELPER to the RevHelper dataset file to run this check")
    stats = dataset_emoji_stats(load_dataset(path))
    assert stats.size == 1481
    assert dict(stats.counts).get("\U0001F44D") == 18
    assert "1,481" in stats.render()
