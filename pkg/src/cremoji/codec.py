"""Emoji extraction and normalization for review comments.

Four surface forms are recognised and rewritten to Unicode glyphs:

* codepoint notation: ``U+1F60A`` or ``+U1F60A``
* shortcodes: ``:smile:``
* emoticons: ``:)`` (mapped first to a shortcode, then to a glyph)
* glyphs already present in the text

Normalization runs in two phases. The textual forms are substituted in one
left-to-right scan, then the resulting string is segmented into extended
grapheme clusters; every cluster that starts with a codepoint from the emoji
ranges becomes one :class:`EmojiToken`. Segmenting after substitution keeps
ZWJ sequences, skin tones and flags whole even when they were spelled out in
codepoint notation, and makes normalization idempotent.

``EmojiToken.span`` holds UTF-8 byte offsets into the original text.
"""
from __future__ import annotations

import bisect
import enum
import re
import unicodedata
from dataclasses import dataclass, field

import regex

from ._tables import data_path, read_rows, unescape
from .errors import TableError

__all__ = [
    "EmojiForm",
    "EmojiToken",
    "NormalizedComment",
    "CodecTables",
    "load_codec_tables",
    "default_tables",
    "normalize_comment",
    "extract_emojis",
    "strip_emojis",
]

_CODEPOINT_RE = re.compile(r"(?:\+[Uu]\+?|[Uu]\+)([0-9A-Fa-f]{4,6})")
_SHORTCODE_RE = re.compile(r":([^\s:]{1,64}):")
_CLUSTER_RE = regex.compile(r"\X")
_WS_RE = re.compile(r"\s+")


class EmojiForm(enum.Enum):
    UNICODE_GLYPH = "UnicodeGlyph"
    SHORTCODE = "Shortcode"
    EMOTICON = "Emoticon"
    CODEPOINT_NOTATION = "CodepointNotation"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class EmojiToken:
    glyph: str
    source_form: EmojiForm
    span: tuple[int, int]
    source_text: str
    # character offsets of the glyph inside NormalizedComment.normalized
    normalized_span: tuple[int, int] = (0, 0)


@dataclass(frozen=True)
class NormalizedComment:
    original: str
    normalized: str
    tokens: tuple[EmojiToken, ...]
    stripped: str

    @property
    def glyphs(self):
        return [t.glyph for t in self.tokens]


@dataclass(frozen=True)
class CodecTables:
    """Immutable lookup tables for one normalization configuration."""

    emoticons: dict[str, str]
    shortcodes: dict[str, str]
    ranges: tuple[tuple[int, int], ...]
    _starts: tuple[int, ...] = field(init=False, repr=False, compare=False)
    _by_first: dict[str, tuple[str, ...]] = field(init=False, repr=False, compare=False)
    _emoticon_chars: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        merged = []
        for lo, hi in sorted(self.ranges):
            if merged and lo <= merged[-1][1] + 1:
                merged[-1] = (merged[-1][0], max(hi, merged[-1][1]))
            else:
                merged.append((lo, hi))
        object.__setattr__(self, "ranges", tuple(merged))
        object.__setattr__(self, "_starts", tuple(lo for lo, _ in merged))
        by_first: dict[str, list[str]] = {}
        for emo in self.emoticons:
            by_first.setdefault(emo[0], []).append(emo)
        object.__setattr__(
            self,
            "_by_first",
            {k: tuple(sorted(v, key=lambda e: (-len(e), e))) for k, v in by_first.items()},
        )
        object.__setattr__(
            self, "_emoticon_chars", frozenset("".join(self.emoticons)) | {":"}
        )

    def is_emoji_codepoint(self, cp: int) -> bool:
        i = bisect.bisect_right(self._starts, cp) - 1
        return i >= 0 and cp <= self.ranges[i][1]

    def lookup(self, form: str) -> str | None:
        """Resolve an emoticon (``:)``) or a shortcode (``smile``/``:smile:``) to its glyph."""
        if form in self.emoticons:
            return self.shortcodes[self.emoticons[form]]
        name = form[1:-1] if len(form) > 2 and form[0] == form[-1] == ":" else form
        return self.shortcodes.get(name)


def _load_ranges(path):
    ranges = []
    for line, row in read_rows(path, ("start_hex", "end_hex")):
        try:
            lo, hi = int(row["start_hex"], 16), int(row["end_hex"], 16)
        except ValueError:
            raise TableError("range bounds must be hexadecimal", path, line) from None
        if lo > hi or hi > 0x10FFFF:
            raise TableError(f"bad range {row['start_hex']}..{row['end_hex']}", path, line)
        ranges.append((lo, hi))
    return ranges


def load_codec_tables(emoticon_path=None, shortcode_path=None, ranges_path=None) -> CodecTables:
    """Load the emoticon, shortcode and emoji-range tables.

    Any path left as ``None`` falls back to the bundled default. Every
    emoticon must target a shortcode present in the shortcode table.
    """
    emoticon_path = emoticon_path or data_path("emoticons.csv")
    shortcode_path = shortcode_path or data_path("shortcodes.csv")
    ranges_path = ranges_path or data_path("emoji_ranges.csv")

    shortcodes = {}
    for line, row in read_rows(shortcode_path, ("shortcode", "glyph")):
        name = row["shortcode"].strip().strip(":")
        if not name or any(c.isspace() or c == ":" for c in name):
            raise TableError(f"invalid shortcode {row['shortcode']!r}", shortcode_path, line)
        shortcodes[name] = row["glyph"]

    emoticons = {}
    dangling = []
    for line, row in read_rows(emoticon_path, ("emoticon", "shortcode")):
        emo = unescape(row["emoticon"])
        target = row["shortcode"].strip().strip(":")
        if any(c.isspace() for c in emo):
            raise TableError(f"emoticon {emo!r} contains whitespace", emoticon_path, line)
        if target not in shortcodes:
            dangling.append((line, target))
        emoticons[emo] = target
    if dangling:
        line, target = dangling[0]
        raise TableError(
            f"emoticon target shortcode {target!r} is not in the shortcode table",
            emoticon_path,
            line,
        )
    return CodecTables(emoticons, shortcodes, tuple(_load_ranges(ranges_path)))


_DEFAULT = None


def default_tables() -> CodecTables:
    """Bundled tables, loaded once per process."""
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = load_codec_tables()
    return _DEFAULT


def _boundary(ch, tables):
    if ch is None or ch.isspace():
        return True
    return unicodedata.category(ch)[0] == "P" and ch not in tables._emoticon_chars


def _match_at(text, i, prev, tables):
    """Return ``(end, glyph, form)`` for the form starting at ``i``, or None."""
    ch = text[i]
    if ch in "Uu+":
        m = _CODEPOINT_RE.match(text, i)
        if m:
            cp = int(m.group(1), 16)
            if cp <= 0x10FFFF and tables.is_emoji_codepoint(cp):
                return m.end(), chr(cp), EmojiForm.CODEPOINT_NOTATION
    if ch == ":" and not (prev is not None and prev.isascii() and prev.isalnum()):
        m = _SHORTCODE_RE.match(text, i)
        if m and m.group(1) in tables.shortcodes:
            return m.end(), tables.shortcodes[m.group(1)], EmojiForm.SHORTCODE
    candidates = tables._by_first.get(ch)
    if candidates and _boundary(prev, tables):
        for emo in candidates:
            end = i + len(emo)
            if text.startswith(emo, i) and _boundary(text[end] if end < len(text) else None, tables):
                return end, tables.shortcodes[tables.emoticons[emo]], EmojiForm.EMOTICON
    return None


def _utf8_offsets(text):
    offsets = [0] * (len(text) + 1)
    total = 0
    for k, ch in enumerate(text):
        cp = ord(ch)
        total += 1 if cp < 0x80 else 2 if cp < 0x800 else 3 if cp < 0x10000 else 4
        offsets[k + 1] = total
    return offsets


def normalize_comment(text: str, tables: CodecTables | None = None) -> NormalizedComment:
    """Rewrite every recognised emoji form in ``text`` to its glyph.

    At one scan position the precedence is codepoint notation, shortcode,
    emoticon (longest first), then plain glyphs. Unknown shortcodes and
    emoticons are left untouched.
    """
    tables = tables or default_tables()
    out: list[str] = []
    # per normalized char: (orig_start, orig_end, form or None for verbatim)
    origin: list[tuple[int, int, EmojiForm | None]] = []
    i, n = 0, len(text)
    while i < n:
        prev = out[-1][-1] if out else None
        hit = _match_at(text, i, prev, tables)
        if hit is None:
            out.append(text[i])
            origin.append((i, i + 1, None))
            i += 1
            continue
        end, glyph, form = hit
        out.append(glyph)
        origin.extend([(i, end, form)] * len(glyph))
        i = end
    normalized = "".join(out)

    offsets = _utf8_offsets(text)
    tokens = []
    kept = []
    last = 0
    for m in _CLUSTER_RE.finditer(normalized):
        cluster = m.group()
        if not tables.is_emoji_codepoint(ord(cluster[0])):
            continue
        a, b = m.span()
        start, form = origin[a][0], origin[a][2] or EmojiForm.UNICODE_GLYPH
        end = origin[b - 1][1]
        tokens.append(
            EmojiToken(cluster, form, (offsets[start], offsets[end]), text[start:end], (a, b))
        )
        kept.append(normalized[last:a])
        kept.append(" ")
        last = b
    kept.append(normalized[last:])
    rest = "".join(kept)
    if any(tables.is_emoji_codepoint(ord(c)) for c in rest if ord(c) >= 0x80):
        rest = "".join(" " if tables.is_emoji_codepoint(ord(c)) else c for c in rest)
    stripped = _WS_RE.sub(" ", rest).strip()
    return NormalizedComment(text, normalized, tuple(tokens), stripped)


def extract_emojis(nc: NormalizedComment) -> list[EmojiToken]:
    return list(nc.tokens)


def strip_emojis(nc: NormalizedComment) -> str:
    return nc.stripped
