"""Pre-trained word and emoji vectors, comment embeddings and fusion.

Vector files use the plain word2vec text layout: a ``<count> <dim>`` header
followed by one ``<token> <v1> ... <vdim>`` line per entry. Tokens may be
emoji glyphs.
"""
from __future__ import annotations

import logging
import math
import os
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .codec import EmojiToken, NormalizedComment
from .errors import DataError, TableError
from .sentiment import tokenize

log = logging.getLogger(__name__)

WORD = "Word"
EMOJI = "Emoji"
_VARIATION_SELECTORS = str.maketrans("", "", "\ufe0e\ufe0f")


@dataclass(frozen=True)
class VectorTable:
    dim: int
    index: dict[str, int]
    matrix: np.ndarray
    kind: str = WORD
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def __len__(self):
        return len(self.index)

    def __contains__(self, token):
        return token in self.index

    def get(self, token):
        i = self.index.get(token)
        if i is None and self.kind == EMOJI:
            i = self.index.get(token.translate(_VARIATION_SELECTORS))
        return None if i is None else self.matrix[i]

    @classmethod
    def from_dict(cls, entries: dict, kind=WORD, dim=None):
        tokens = list(entries)
        if dim is None:
            if not tokens:
                raise DataError("cannot infer dim of an empty table")
            dim = len(entries[tokens[0]])
        matrix = np.zeros((len(tokens), dim))
        for i, t in enumerate(tokens):
            v = np.asarray(entries[t], dtype=float)
            if v.shape != (dim,) or not np.all(np.isfinite(v)):
                raise DataError(f"vector for {t!r} must have {dim} finite components")
            matrix[i] = v
        matrix.setflags(write=False)
        return cls(dim, {t: i for i, t in enumerate(tokens)}, matrix, kind)


def load_vectors(path, kind: str = WORD) -> VectorTable:
    """Read a text-format vector file.

    Header/row arity errors and non-finite components raise
    :class:`TableError` with the line number. A header count that disagrees
    with the rows and duplicate tokens (last wins) only produce warnings.
    """
    path = os.fspath(path)
    warnings = []
    index: dict[str, int] = {}
    rows: list[list[float]] = []
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise TableError("header must be '<count> <dim>'", path, 1)
        try:
            count, dim = int(header[0]), int(header[1])
        except ValueError:
            raise TableError("header must be '<count> <dim>'", path, 1) from None
        if dim <= 0 or count < 0:
            raise TableError("dim must be positive", path, 1)
        for line_no, line in enumerate(fh, start=2):
            # split on spaces only: some emoji tokens carry other whitespace-ish codepoints
            parts = line.rstrip("\r\n").rstrip(" ").split(" ")
            if parts == [""]:
                continue
            if len(parts) != dim + 1:
                raise TableError(f"expected {dim} values, got {len(parts) - 1}", path, line_no)
            token = parts[0]
            try:
                values = [float(x) for x in parts[1:]]
            except ValueError:
                raise TableError("non-numeric vector component", path, line_no) from None
            if not all(math.isfinite(x) for x in values):
                raise TableError("non-finite vector component", path, line_no)
            if token in index:
                warnings.append(f"line {line_no}: duplicate token {token!r}, keeping the last")
                rows[index[token]] = values
            else:
                index[token] = len(rows)
                rows.append(values)
    if count != len(rows):
        warnings.append(f"header declares {count} entries, file has {len(rows)}")
    for w in warnings:
        log.warning("%s: %s", path, w)
    matrix = np.array(rows, dtype=float).reshape(len(rows), dim)
    matrix.setflags(write=False)
    return VectorTable(dim, index, matrix, kind, tuple(warnings))


def _aggregate(vectors, dim, how):
    if not vectors:
        return np.zeros(dim)
    total = np.sum(vectors, axis=0)
    if how == "mean":
        return total / len(vectors)
    if how == "sum":
        return total
    raise ValueError(f"unknown aggregation {how!r}")


def embed_text(nc: NormalizedComment, word_table: VectorTable, how: str = "mean"):
    """Bag-of-words vector of the emoji-free text and the number of OOV tokens."""
    vectors = []
    oov = 0
    for w in tokenize(nc.stripped):
        v = word_table.get(w)
        if v is None:
            oov += 1
        else:
            vectors.append(v)
    return _aggregate(vectors, word_table.dim, how), oov


def embed_emojis(tokens: Iterable[EmojiToken], emoji_table: VectorTable, how: str = "mean"):
    """Per-occurrence aggregate of emoji vectors and the number of unmatched tokens."""
    vectors = []
    unmatched = 0
    for tok in tokens:
        v = emoji_table.get(tok.glyph)
        if v is None:
            unmatched += 1
        else:
            vectors.append(v)
    return _aggregate(vectors, emoji_table.dim, how), unmatched


def fuse(text_vec, emoji_vec, dim_t: int | None = None, dim_e: int | None = None) -> np.ndarray:
    """Concatenate ``(text, emoji)``; the order is part of the column schema."""
    text_vec = np.asarray(text_vec, dtype=float)
    emoji_vec = np.asarray(emoji_vec, dtype=float)
    if dim_t is not None and text_vec.shape != (dim_t,):
        raise DataError(f"text vector has shape {text_vec.shape}, expected ({dim_t},)")
    if dim_e is not None and emoji_vec.shape != (dim_e,):
        raise DataError(f"emoji vector has shape {emoji_vec.shape}, expected ({dim_e},)")
    return np.concatenate([text_vec, emoji_vec])


@dataclass(frozen=True)
class CommentEmbedding:
    text_vec: np.ndarray
    emoji_vec: np.ndarray
    fused: np.ndarray
    oov_words: int
    unmatched_emojis: int


def embed_comment(nc, word_table: VectorTable, emoji_table: VectorTable, how="mean") -> CommentEmbedding:
    t, oov = embed_text(nc, word_table, how)
    e, unmatched = embed_emojis(nc.tokens, emoji_table, how)
    return CommentEmbedding(t, e, fuse(t, e, word_table.dim, emoji_table.dim), oov, unmatched)


def write_vectors(table_or_dict, path) -> None:
    """Write vectors in the text format read by :func:`load_vectors`."""
    if isinstance(table_or_dict, VectorTable):
        items = [(t, table_or_dict.matrix[i]) for t, i in table_or_dict.index.items()]
        dim = table_or_dict.dim
    else:
        items = list(table_or_dict.items())
        dim = len(items[0][1]) if items else 1
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{len(items)} {dim}\n")
        for token, vec in items:
            fh.write(token + " " + " ".join(repr(float(x)) for x in vec) + "\n")
