"""Hand-crafted comment features and design-matrix assembly.

The textual baseline schema (``text-v1``) has seven columns computed on the
emoji-free text. ``text+emoji-v1`` appends four emoji columns.
"""
from __future__ import annotations

import csv
import re
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .codec import NormalizedComment, normalize_comment
from .errors import DataError
from .sentiment import SentimentChannels, compute_channels

TEXT_FEATURES = (
    "word_count",
    "char_count",
    "stop_word_ratio",
    "question_ratio",
    "code_element_ratio",
    "flesch_reading_ease",
    "text_sentiment",
)
EMOJI_FEATURES = ("emoji_count", "g_e_sum", "cr_e_sum", "unmatched_count")

TEXT_SCHEMA = "text-v1"
TEXT_EMOJI_SCHEMA = "text+emoji-v1"

TEXT_FEATURES_MODE = "TextFeatures"
TEXT_PLUS_EMOJI_MODE = "TextPlusEmojiFeatures"
TEXT_EMBEDDING_MODE = "TextEmbedding"
FUSED_EMBEDDING_MODE = "FusedEmbedding"
MODES = (TEXT_FEATURES_MODE, TEXT_PLUS_EMOJI_MODE, TEXT_EMBEDDING_MODE, FUSED_EMBEDDING_MODE)

_SENTENCE_RE = re.compile(r"[^.!?\n]+[.!?]*")
_VOWEL_RUN_RE = re.compile(r"[aeiouy]+")
_EDGE_PUNCT = "\"'`,;:!?.)]}([{<>"
_CODE_PATTERNS = (
    re.compile(r"^[a-z]+[a-z0-9]*[A-Z][A-Za-z0-9]*$"),  # camelCase
    re.compile(r"^[A-Za-z0-9]*[A-Za-z][A-Za-z0-9]*(?:_[A-Za-z0-9]+)+$"),  # snake_case
    re.compile(r"^[A-Za-z_][\w.]*\(.*\)$"),  # call()
    re.compile(r"^[A-Za-z_]\w*(?:\.[A-Za-z_]\w*)+$"),  # dotted.path
)


@dataclass(frozen=True)
class FeatureVector:
    values: dict[str, float]
    schema_id: str

    def as_array(self) -> np.ndarray:
        return np.array(list(self.values.values()), dtype=float)


def sentences(text: str) -> list[str]:
    """Split on ``.``, ``!``, ``?`` and newlines; fragments without word characters are dropped."""
    return [s.strip() for s in _SENTENCE_RE.findall(text) if re.search(r"\w", s)]


def syllables(word: str) -> int:
    """Vowel-group count, minus a silent trailing ``e``, at least one."""
    w = re.sub(r"[^a-z]", "", word.lower())
    n = len(_VOWEL_RUN_RE.findall(w))
    if w.endswith("e"):
        n -= 1
    return max(1, n)


def is_code_element(token: str) -> bool:
    """camelCase, snake_case, ``call()`` or ``dotted.path`` after trimming edge punctuation."""
    t = token.lstrip("\"'`([{<").rstrip("\"'`,;:!?.]}>")
    return any(p.match(t) for p in _CODE_PATTERNS)


def flesch_reading_ease(words: Sequence[str], n_sentences: int) -> float:
    if not words or not n_sentences:
        return 0.0
    syl = sum(syllables(w) for w in words)
    return 206.835 - 1.015 * (len(words) / n_sentences) - 84.6 * (syl / len(words))


def extract_text_features(nc: NormalizedComment, stoplist, cr_t: float = 0.0) -> FeatureVector:
    """Seven textual features of ``nc.stripped``; ``cr_t`` fills ``text_sentiment``."""
    text = nc.stripped
    words = text.split()
    sents = sentences(text)
    n = len(words)
    bare = [w.strip(_EDGE_PUNCT).lower() for w in words]
    values = {
        "word_count": float(n),
        "char_count": float(len(text)),
        "stop_word_ratio": sum(1 for w in bare if w in stoplist) / n if n else 0.0,
        "question_ratio": sum(1 for s in sents if s.endswith("?")) / len(sents) if sents else 0.0,
        "code_element_ratio": sum(1 for w in words if is_code_element(w)) / n if n else 0.0,
        "flesch_reading_ease": flesch_reading_ease([w for w in bare if w], len(sents)),
        "text_sentiment": float(cr_t),
    }
    return FeatureVector(values, TEXT_SCHEMA)


def extract_emoji_features(nc: NormalizedComment, channels: SentimentChannels) -> FeatureVector:
    values = {
        "emoji_count": float(len(nc.tokens)),
        "g_e_sum": float(channels.g_e),
        "cr_e_sum": float(channels.cr_e),
        "unmatched_count": float(channels.unmatched_emoji_count),
    }
    return FeatureVector(values, "emoji-v1")


def combine(text_fv: FeatureVector, emoji_fv: FeatureVector) -> FeatureVector:
    return FeatureVector({**text_fv.values, **emoji_fv.values}, TEXT_EMOJI_SCHEMA)


@dataclass(frozen=True)
class DesignMatrix:
    X: np.ndarray
    labels: np.ndarray
    feature_names: tuple[str, ...]
    mode: str
    ids: tuple[str, ...] = ()

    def __post_init__(self):
        if self.X.ndim != 2 or len(self.X) != len(self.labels):
            raise DataError("rows and labels disagree")

    def __len__(self):
        return len(self.labels)

    def write_csv(self, fh) -> None:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(list(self.feature_names) + ["label"])
        for row, y in zip(self.X, self.labels):
            w.writerow([repr(float(v)) for v in row] + [int(y)])


def _labels(dataset):
    ys = []
    for r in dataset.records:
        if r.useful not in (0, 1):
            raise DataError(f"record {r.id!r}: usefulness label must be 0 or 1, got {r.useful!r}")
        ys.append(r.useful)
    return np.array(ys, dtype=np.int64)


def build_design_matrix(dataset, mode: str, resources) -> DesignMatrix:
    """Rows in dataset order for one of :data:`MODES`.

    ``resources`` is a :class:`cremoji.resources.Resources`; the embedding
    modes need its word and emoji vector tables.
    """
    from .embeddings import embed_emojis, embed_text, fuse

    if mode not in MODES:
        raise DataError(f"unknown mode {mode!r}")
    labels = _labels(dataset)
    rows = []
    names: tuple[str, ...]
    if mode in (TEXT_FEATURES_MODE, TEXT_PLUS_EMOJI_MODE):
        names = TEXT_FEATURES + (EMOJI_FEATURES if mode == TEXT_PLUS_EMOJI_MODE else ())
        for r in dataset.records:
            nc = normalize_comment(r.text, resources.codec)
            ch = compute_channels(nc, resources.sentiment)
            fv = extract_text_features(nc, resources.stoplist, ch.cr_t)
            if mode == TEXT_PLUS_EMOJI_MODE:
                fv = combine(fv, extract_emoji_features(nc, ch))
            rows.append(fv.as_array())
    else:
        words, emojis = resources.word_vectors, resources.emoji_vectors
        if words is None or (mode == FUSED_EMBEDDING_MODE and emojis is None):
            raise DataError(f"{mode} needs word and emoji vector tables")
        names = tuple(f"t{i}" for i in range(words.dim))
        if mode == FUSED_EMBEDDING_MODE:
            names += tuple(f"e{i}" for i in range(emojis.dim))
        for r in dataset.records:
            nc = normalize_comment(r.text, resources.codec)
            t, _ = embed_text(nc, words, resources.aggregation)
            if mode == FUSED_EMBEDDING_MODE:
                e, _ = embed_emojis(nc.tokens, emojis, resources.aggregation)
                t = fuse(t, e, words.dim, emojis.dim)
            rows.append(t)
    X = np.array(rows, dtype=float).reshape(len(rows), len(names))
    if not np.all(np.isfinite(X)):
        raise DataError("non-finite feature value")
    return DesignMatrix(X, labels, names, mode, tuple(r.id for r in dataset.records))
