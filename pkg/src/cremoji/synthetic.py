"""Synthetic comment corpora with a planted emoji signal.

Text is drawn from a neutral nonsense vocabulary, so every textual feature
is noise; the label is carried only by which emoji a comment ends with.
Used for sanity checks of the prediction pipeline and the CLI demo.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import CommentRecord, Dataset
from .embeddings import EMOJI, WORD, VectorTable

# positive and negative code-review glyphs, five each
USEFUL_GLYPHS = ("👍", "👏", "🎉", "🚀", "✅")
NOT_USEFUL_GLYPHS = ("👎", "🐛", "❌", "😕", "🙁")


@dataclass(frozen=True)
class SyntheticCorpus:
    dataset: Dataset
    word_vectors: VectorTable
    emoji_vectors: VectorTable


def _vocabulary(size):
    consonants, vowels = "bdfgklmnprstvz", "aeiou"
    words = []
    for i in range(size):
        a, b, c = i % 14, (i // 14) % 5, (i // 70) % 14
        words.append(f"{consonants[a]}{vowels[b]}{consonants[c]}{vowels[(a + c) % 5]}x")
    return words


def emoji_signal_corpus(
    n: int = 1000,
    seed: int = 42,
    flip: float = 0.1,
    shuffle_labels: bool = False,
    with_emoji: bool = True,
    word_dim: int = 16,
    emoji_dim: int = 8,
    vocab_size: int = 120,
) -> SyntheticCorpus:
    """Balanced corpus of ``n`` comments.

    With probability ``1 - flip`` a comment carries a glyph from its own
    class's group, otherwise one from the other group. ``shuffle_labels``
    permutes the labels afterwards, destroying the signal.
    ``with_emoji=False`` drops the glyphs entirely.
    """
    rng = np.random.default_rng(seed)
    vocab = _vocabulary(vocab_size)
    labels = np.array([1] * (n // 2) + [0] * (n - n // 2))
    rng.shuffle(labels)
    records = []
    for i, y in enumerate(labels):
        words = rng.choice(vocab, size=int(rng.integers(3, 13)))
        text = " ".join(words)
        if with_emoji:
            group = USEFUL_GLYPHS if y == 1 else NOT_USEFUL_GLYPHS
            if rng.random() < flip:
                group = NOT_USEFUL_GLYPHS if y == 1 else USEFUL_GLYPHS
            text += " " + group[int(rng.integers(len(group)))]
        records.append([f"s{i:04d}", text, int(y)])
    if shuffle_labels:
        perm = rng.permutation(n)
        shuffled = [records[j][2] for j in perm]
        for r, y in zip(records, shuffled):
            r[2] = y
    dataset = Dataset(
        tuple(CommentRecord(rid, text, y, None, "synthetic") for rid, text, y in records), "synthetic"
    )
    word_vectors = VectorTable.from_dict({w: rng.normal(size=word_dim) for w in vocab}, WORD)
    emoji_vectors = VectorTable.from_dict(
        {g: rng.normal(size=emoji_dim) for g in USEFUL_GLYPHS + NOT_USEFUL_GLYPHS}, EMOJI
    )
    return SyntheticCorpus(dataset, word_vectors, emoji_vectors)
