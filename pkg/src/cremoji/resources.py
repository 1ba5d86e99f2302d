"""One bundle of every lookup resource the pipeline needs."""
from __future__ import annotations

from dataclasses import dataclass

from ._tables import data_path, read_terms
from .augmentation import Rulebook, load_rulebook
from .codec import CodecTables, load_codec_tables
from .embeddings import EMOJI, WORD, VectorTable, load_vectors
from .sentiment import SentimentResources


def load_stoplist(path=None) -> frozenset[str]:
    return frozenset(t.lower() for t in read_terms(path or data_path("stoplist.txt")))


@dataclass(frozen=True)
class Resources:
    codec: CodecTables
    sentiment: SentimentResources
    stoplist: frozenset[str]
    rulebook: Rulebook
    word_vectors: VectorTable | None = None
    emoji_vectors: VectorTable | None = None
    aggregation: str = "mean"

    @classmethod
    def load(
        cls,
        emoticons=None,
        shortcodes=None,
        emoji_ranges=None,
        lexicon=None,
        negators=None,
        intensifiers=None,
        overrides=None,
        general_emoji=None,
        cr_emoji=None,
        stoplist=None,
        rulebook=None,
        word_vectors=None,
        emoji_vectors=None,
        emoji_sentiment_aggregation="sum",
        embedding_aggregation="mean",
        emoji_scale=4.0,
    ) -> "Resources":
        """Load everything; ``None`` paths fall back to bundled data (vectors stay absent)."""
        return cls(
            codec=load_codec_tables(emoticons, shortcodes, emoji_ranges),
            sentiment=SentimentResources.load(
                lexicon,
                negators,
                intensifiers,
                overrides,
                general_emoji,
                cr_emoji,
                emoji_scale=emoji_scale,
                aggregation=emoji_sentiment_aggregation,
            ),
            stoplist=load_stoplist(stoplist),
            rulebook=load_rulebook(rulebook),
            word_vectors=load_vectors(word_vectors, WORD) if word_vectors else None,
            emoji_vectors=load_vectors(emoji_vectors, EMOJI) if emoji_vectors else None,
            aggregation=embedding_aggregation,
        )
