"""Verbal and non-verbal sentiment channels for review comments.

Five scores are produced per comment:

======  ===============================================================
G_T     rule-based text polarity with the general lexicon
CR_T    the same scorer with code-review valence overrides applied
G_E     summed general emoji sentiment (emoji sentiment ranking)
CR_E    summed code-review emoji sentiment (domain annotations)
G_TE    emoji-aware text polarity: glyphs scored inside the text stream
======  ===============================================================

plus the Pearson correlation machinery used to relate them to sentiment
and usefulness labels.
"""
from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from ._tables import data_path, read_rows, unescape
from .codec import EmojiToken, NormalizedComment
from .errors import DataError, TableError, UndefinedError

GENERAL = "General"
CODE_REVIEW = "CodeReview"

CHANNELS = ("G_T", "CR_T", "G_E", "CR_E", "G_TE", "G_T+G_E", "CR_T+CR_E")

_WORD_RE = re.compile(r"[\w']+")
_VARIATION_SELECTORS = str.maketrans("", "", "\ufe0e\ufe0f")


def tokenize(text: str) -> list[str]:
    """Lowercased word tokens; apostrophes kept inside words (``don't``)."""
    words = (w.strip("'") for w in _WORD_RE.findall(text.lower()))
    return [w for w in words if w]


@dataclass(frozen=True)
class ValenceLexicon:
    entries: dict[str, float]
    negators: frozenset[str] = frozenset()
    intensifiers: dict[str, float] = field(default_factory=dict)
    domain_overrides: dict[str, float] = field(default_factory=dict)
    negation_window: int = 3
    negation_scalar: float = -0.74
    alpha: float = 15.0

    def __post_init__(self):
        for term, v in {**self.entries, **self.domain_overrides}.items():
            if not math.isfinite(v):
                raise TableError(f"non-finite valence for {term!r}")
        for term, m in self.intensifiers.items():
            if not (m > 0 and math.isfinite(m)):
                raise TableError(f"intensifier {term!r} needs a positive multiplier")

    def valence(self, term: str) -> float | None:
        if term in self.domain_overrides:
            return self.domain_overrides[term]
        return self.entries.get(term)

    def with_overrides(self, overrides: dict[str, float]) -> "ValenceLexicon":
        return replace(self, domain_overrides=dict(overrides))


def _read_valences(path):
    out = {}
    for line, row in read_rows(path, ("term", "valence")):
        try:
            out[unescape(row["term"]).strip().lower()] = float(row["valence"])
        except ValueError:
            raise TableError(f"bad valence {row['valence']!r}", path, line) from None
    return out


def load_lexicon(
    lexicon_path=None,
    negators_path=None,
    intensifiers_path=None,
    overrides_path=None,
    **constants,
) -> ValenceLexicon:
    """Load a valence lexicon; ``None`` paths use the bundled files.

    ``overrides_path`` is only read when given explicitly, so the default
    result is the general lexicon. Keyword ``constants`` override
    ``negation_window``, ``negation_scalar`` and ``alpha``.
    """
    entries = _read_valences(lexicon_path or data_path("valence_lexicon.csv"))
    negators_path = negators_path or data_path("negators.csv")
    negators = frozenset(
        row["term"].strip().lower() for _, row in read_rows(negators_path, ("term",))
    )
    intensifiers_path = intensifiers_path or data_path("intensifiers.csv")
    intensifiers = {}
    for line, row in read_rows(intensifiers_path, ("term",), ("multiplier",)):
        try:
            intensifiers[row["term"].strip().lower()] = float(row.get("multiplier") or 1.293)
        except ValueError:
            raise TableError(f"bad multiplier {row['multiplier']!r}", intensifiers_path, line) from None
    overrides = _read_valences(overrides_path) if overrides_path else {}
    return ValenceLexicon(entries, negators, intensifiers, overrides, **constants)


def load_domain_lexicon(general: ValenceLexicon, overrides_path=None) -> ValenceLexicon:
    """The CR_T lexicon: ``general`` plus code-review valence overrides."""
    return general.with_overrides(_read_valences(overrides_path or data_path("cr_overrides.csv")))


@dataclass(frozen=True)
class EmojiSentiment:
    score: float
    occurrences: int | None = None
    negative: int | None = None
    neutral: int | None = None
    positive: int | None = None


@dataclass(frozen=True)
class EmojiSentimentTable:
    kind: str
    entries: dict[str, EmojiSentiment]

    def score_of(self, glyph: str) -> float | None:
        entry = self.entries.get(glyph)
        if entry is None:
            # tables often list the bare codepoint without a variation selector
            entry = self.entries.get(glyph.translate(_VARIATION_SELECTORS))
        return None if entry is None else entry.score


def load_general_emoji_table(path=None) -> EmojiSentimentTable:
    """Load an emoji sentiment ranking; scores are recomputed from the counts.

    Score is the mean of the {-1, 0, +1} label distribution, i.e.
    ``(positive - negative) / occurrences``.
    """
    path = path or data_path("general_emoji_sentiment.csv")
    entries = {}
    cols = ("glyph", "occurrences", "negative", "neutral", "positive")
    for line, row in read_rows(path, cols, ("score",)):
        try:
            occ, neg, neu, pos = (int(row[c]) for c in cols[1:])
        except ValueError:
            raise TableError("counts must be integers", path, line) from None
        if min(occ, neg, neu, pos) < 0:
            raise TableError("counts must be nonnegative", path, line)
        if occ == 0:
            raise TableError(f"zero occurrences for {row['glyph']!r}", path, line)
        if neg + neu + pos != occ:
            raise TableError(
                f"negative+neutral+positive = {neg + neu + pos} != occurrences = {occ}", path, line
            )
        score = (pos - neg) / occ
        if row.get("score"):
            given = float(row["score"])
            if abs(given - score) > 1e-9:
                raise TableError(f"score {given} disagrees with counts ({score})", path, line)
        entries[row["glyph"]] = EmojiSentiment(score, occ, neg, neu, pos)
    return EmojiSentimentTable(GENERAL, entries)


def load_cr_emoji_table(path=None) -> EmojiSentimentTable:
    path = path or data_path("cr_emoji_sentiment.csv")
    entries = {}
    for line, row in read_rows(path, ("glyph", "score")):
        try:
            score = float(row["score"])
        except ValueError:
            raise TableError(f"bad score {row['score']!r}", path, line) from None
        if not -1.0 <= score <= 1.0:
            raise TableError(f"score {score} outside [-1, 1]", path, line)
        entries[row["glyph"]] = EmojiSentiment(score)
    return EmojiSentimentTable(CODE_REVIEW, entries)


def _normalize(total: float, alpha: float) -> float:
    if total == 0:
        return 0.0
    return max(-1.0, min(1.0, total / math.sqrt(total * total + alpha)))


def _score_stream(terms: Sequence[str], valences: Sequence[float | None], lexicon: ValenceLexicon) -> float:
    total = 0.0
    for j, v in enumerate(valences):
        if v is None:
            continue
        window = terms[max(0, j - lexicon.negation_window) : j]
        if any(t in lexicon.negators for t in window):
            v *= lexicon.negation_scalar
        if j > 0 and terms[j - 1] in lexicon.intensifiers:
            v *= lexicon.intensifiers[terms[j - 1]]
        total += v
    return _normalize(total, lexicon.alpha)


def _word_valences(words, lexicon):
    # negators and intensifiers modify their neighbours instead of scoring
    return [
        None if w in lexicon.negators or w in lexicon.intensifiers else lexicon.valence(w)
        for w in words
    ]


def score_text(text: str, lexicon: ValenceLexicon) -> float:
    """Polarity of ``text`` in [-1, 1].

    Each lexicon hit contributes its valence, flipped and damped when a
    negator sits within the preceding window and scaled when the previous
    token is an intensifier. The raw sum ``s`` is squashed to
    ``s / sqrt(s**2 + alpha)``.
    """
    words = tokenize(text)
    return _score_stream(words, _word_valences(words, lexicon), lexicon)


def score_combined(
    nc: NormalizedComment,
    lexicon: ValenceLexicon,
    general_emoji_table: EmojiSentimentTable,
    emoji_scale: float = 4.0,
) -> float:
    """Emoji-aware polarity: glyphs join the token stream as lexicon hits.

    A glyph's valence is ``emoji_scale`` times its general table score, which
    puts [-1, 1] emoji scores on the lexicon's +/-4 valence scale.
    """
    terms: list[str] = []
    valences: list[float | None] = []
    last = 0
    for tok in nc.tokens:
        a, b = tok.normalized_span
        words = tokenize(nc.normalized[last:a])
        terms.extend(words)
        valences.extend(_word_valences(words, lexicon))
        s = general_emoji_table.score_of(tok.glyph)
        terms.append(tok.glyph)
        valences.append(None if s is None else emoji_scale * s)
        last = b
    words = tokenize(nc.normalized[last:])
    terms.extend(words)
    valences.extend(_word_valences(words, lexicon))
    return _score_stream(terms, valences, lexicon)


def aggregate_emoji_sentiment(
    tokens: Iterable[EmojiToken], table: EmojiSentimentTable, how: str = "sum"
) -> tuple[float, int]:
    """Sum (or mean) of table scores over tokens, and the count of tokens missing from the table."""
    scores = []
    unmatched = 0
    for tok in tokens:
        s = table.score_of(tok.glyph)
        if s is None:
            unmatched += 1
        else:
            scores.append(s)
    if how == "sum":
        return math.fsum(scores), unmatched
    if how == "mean":
        return (math.fsum(scores) / len(scores) if scores else 0.0), unmatched
    raise ValueError(f"unknown aggregation {how!r}")


@dataclass(frozen=True)
class SentimentResources:
    general_lexicon: ValenceLexicon
    domain_lexicon: ValenceLexicon
    general_emoji: EmojiSentimentTable
    cr_emoji: EmojiSentimentTable
    emoji_scale: float = 4.0
    aggregation: str = "sum"

    @classmethod
    def load(
        cls,
        lexicon=None,
        negators=None,
        intensifiers=None,
        overrides=None,
        general_emoji=None,
        cr_emoji=None,
        **kwargs,
    ):
        general = load_lexicon(lexicon, negators, intensifiers)
        return cls(
            general,
            load_domain_lexicon(general, overrides),
            load_general_emoji_table(general_emoji),
            load_cr_emoji_table(cr_emoji),
            **kwargs,
        )


@dataclass(frozen=True)
class SentimentChannels:
    g_t: float
    cr_t: float
    g_e: float
    cr_e: float
    g_te: float
    unmatched_emoji_count: int
    emoji_count: int = 0

    def value(self, channel: str) -> float:
        return {
            "G_T": self.g_t,
            "CR_T": self.cr_t,
            "G_E": self.g_e,
            "CR_E": self.cr_e,
            "G_TE": self.g_te,
            "G_T+G_E": self.g_t + self.g_e,
            "CR_T+CR_E": self.cr_t + self.cr_e,
        }[channel]


def compute_channels(nc: NormalizedComment, res: SentimentResources) -> SentimentChannels:
    g_e, unmatched = aggregate_emoji_sentiment(nc.tokens, res.general_emoji, res.aggregation)
    cr_e, _ = aggregate_emoji_sentiment(nc.tokens, res.cr_emoji, res.aggregation)
    return SentimentChannels(
        g_t=score_text(nc.stripped, res.general_lexicon),
        cr_t=score_text(nc.stripped, res.domain_lexicon),
        g_e=g_e,
        cr_e=cr_e,
        g_te=score_combined(nc, res.general_lexicon, res.general_emoji, res.emoji_scale),
        unmatched_emoji_count=unmatched,
        emoji_count=len(nc.tokens),
    )


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Sample Pearson correlation; raises :class:`UndefinedError` on zero variance."""
    if len(xs) != len(ys):
        raise DataError(f"length mismatch: {len(xs)} vs {len(ys)}")
    if len(xs) < 2:
        raise DataError("pearson needs at least two points")
    if min(xs) == max(xs) or min(ys) == max(ys):
        raise UndefinedError("zero variance: correlation undefined")
    mx = math.fsum(xs) / len(xs)
    my = math.fsum(ys) / len(ys)
    dx = [x - mx for x in xs]
    dy = [y - my for y in ys]
    sxy = math.fsum(a * b for a, b in zip(dx, dy))
    sxx = math.fsum(a * a for a in dx)
    syy = math.fsum(b * b for b in dy)
    if sxx == 0 or syy == 0:
        raise UndefinedError("zero variance: correlation undefined")
    return max(-1.0, min(1.0, sxy / math.sqrt(sxx * syy)))


@dataclass(frozen=True)
class CorrelationCell:
    channel: str
    target: str
    subset: str
    rho: float | None
    n: int


TARGETS = ("sentiment", "usefulness")
SUBSETS = ("all", "emoji_only")


def correlation_report(
    channels: Sequence[SentimentChannels],
    sentiment: Sequence[int | None],
    useful: Sequence[int],
    targets: Sequence[str] = TARGETS,
    subsets: Sequence[str] = SUBSETS,
) -> list[CorrelationCell]:
    """Pearson rho of every channel against every (target, subset) pair.

    Rows lacking the target label are left out of that column. A column
    with fewer than two rows or a constant series gets ``rho=None``.
    """
    if not len(channels) == len(sentiment) == len(useful):
        raise DataError("channels and labels must have equal length")
    labels = {"sentiment": sentiment, "usefulness": useful}
    cells = []
    for channel in CHANNELS:
        for target in targets:
            for subset in subsets:
                pairs = [
                    (ch.value(channel), y)
                    for ch, y in zip(channels, labels[target])
                    if y is not None and (subset == "all" or ch.emoji_count > 0)
                ]
                rho = None
                if len(pairs) >= 2:
                    try:
                        rho = pearson([p[0] for p in pairs], [float(p[1]) for p in pairs])
                    except UndefinedError:
                        rho = None
                cells.append(CorrelationCell(channel, target, subset, rho, len(pairs)))
    return cells


def write_correlations(cells: Iterable[CorrelationCell], fh, dataset: str | None = None) -> None:
    """Write cells as CSV ``[dataset,]channel,target,subset,rho,n``; undefined rho is empty."""
    w = csv.writer(fh, lineterminator="\n")
    for c in cells:
        row = [c.channel, c.target, c.subset, "" if c.rho is None else f"{c.rho:.6f}", c.n]
        w.writerow(([dataset] if dataset is not None else []) + row)
