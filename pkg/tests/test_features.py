import dataclasses
import io

import numpy as np
import pytest

from cremoji.codec import normalize_comment
from cremoji.corpus import CommentRecord, Dataset
from cremoji.errors import DataError
from cremoji.features import (
    EMOJI_FEATURES,
    TEXT_FEATURES,
    build_design_matrix,
    extract_emoji_features,
    extract_text_features,
    flesch_reading_ease,
    is_code_element,
    syllables,
)
from cremoji.resources import Resources
from cremoji.sentiment import compute_channels
from cremoji.synthetic import emoji_signal_corpus

THUMBS = "\U0001F44D"


@pytest.fixture(scope="module")
def res():
    return Resources.load()


def _text(text, res):
    nc = normalize_comment(text, res.codec)
    return extract_text_features(nc, res.stoplist).values


def test_empty_comment(res):
    assert all(v == 0 for v in _text("", res).values())


def test_question(res):
    v = _text("Is this right?", res)
    assert v["question_ratio"] == 1.0 and v["word_count"] == 3


def test_code_element_ratio(res):
    assert _text("call foo_bar() here", res)["code_element_ratio"] == pytest.approx(1 / 3)


@pytest.mark.parametrize("tok", ["fooBar", "foo_bar", "foo()", "os.path", "`self.x`,"])
def test_code_elements(tok):
    assert is_code_element(tok)


@pytest.mark.parametrize("tok", ["hello", "Hello", "3.14", "(word)"])
def test_not_code_elements(tok):
    assert not is_code_element(tok)


def test_syllables():
    assert [syllables(w) for w in ("cat", "make", "readable", "the", "rhythm")] == [1, 1, 2, 1, 1]


def test_flesch_oracle():
    words = ["the", "cat", "sat"]
    assert flesch_reading_ease(words, 1) == pytest.approx(206.835 - 1.015 * 3 - 84.6 * 1)
    assert flesch_reading_ease([], 0) == 0.0


def test_emoji_features(res):
    def feats(text):
        nc = normalize_comment(text, res.codec)
        return extract_emoji_features(nc, compute_channels(nc, res.sentiment)).values

    assert list(feats("plain").values()) == [0, 0, 0, 0]
    s = res.sentiment.cr_emoji.score_of(THUMBS)
    v = feats(THUMBS + THUMBS)
    assert v["emoji_count"] == 2 and v["cr_e_sum"] == pytest.approx(2 * s)
    v = feats(f"{THUMBS} \U0001F9C0")
    assert v["emoji_count"] == 2 and v["unmatched_count"] == 1


def test_schema_widths_and_determinism(res):
    corpus = emoji_signal_corpus(n=60, seed=1)
    res = dataclasses.replace(res, word_vectors=corpus.word_vectors, emoji_vectors=corpus.emoji_vectors)
    base = build_design_matrix(corpus.dataset, "TextFeatures", res)
    plus = build_design_matrix(corpus.dataset, "TextPlusEmojiFeatures", res)
    assert base.X.shape == (60, len(TEXT_FEATURES))
    assert plus.X.shape[1] == base.X.shape[1] + len(EMOJI_FEATURES)
    again = build_design_matrix(corpus.dataset, "TextPlusEmojiFeatures", res)
    assert plus.X.tobytes() == again.X.tobytes()
    fused = build_design_matrix(corpus.dataset, "FusedEmbedding", res)
    assert fused.X.shape[1] == corpus.word_vectors.dim + corpus.emoji_vectors.dim
    assert list(fused.feature_names[:2]) == ["t0", "t1"]


def test_row_count_matches_dataset(res):
    ds = Dataset(tuple(CommentRecord(str(i), f"comment {i}", i % 2) for i in range(1481)))
    assert len(build_design_matrix(ds, "TextFeatures", res)) == 1481


def test_embedding_modes_need_vectors(res):
    ds = Dataset((CommentRecord("1", "x", 1),))
    with pytest.raises(DataError):
        build_design_matrix(ds, "TextEmbedding", res)
    with pytest.raises(DataError):
        build_design_matrix(ds, "Nope", res)


def test_write_csv(res):
    ds = Dataset((CommentRecord("1", "good", 1), CommentRecord("2", "bad", 0)))
    buf = io.StringIO()
    build_design_matrix(ds, "TextFeatures", res).write_csv(buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == ",".join(TEXT_FEATURES + ("label",))
    assert len(lines) == 3 and lines[1].endswith(",1")


def test_emoji_free_rows_have_constant_emoji_columns(res):
    corpus = emoji_signal_corpus(n=50, with_emoji=False)
    X = build_design_matrix(corpus.dataset, "TextPlusEmojiFeatures", res).X
    assert np.all(X[:, len(TEXT_FEATURES):] == 0)
