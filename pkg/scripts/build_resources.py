"""Regenerate the bundled tables under src/cremoji/data/.

Needs the third-party packages ``emoji``, ``vaderSentiment`` and ``emosent-py``
importable (they are not runtime dependencies of cremoji)::

    pip install emoji vaderSentiment emosent-py
    python scripts/build_resources.py

Only the machine-derived tables are rewritten. The hand-curated files
(emoticons.csv, cr_emoji_sentiment.csv, cr_overrides.csv, rulebook.csv,
stoplist.txt) are edited directly.
"""
import csv
import os
import sys

import emoji
import emosent
import vaderSentiment

DATA = os.path.join(os.path.dirname(__file__), "..", "src", "cremoji", "data")

# grapheme glue, not emojis on their own
COMPONENTS = {0x200D, 0xFE0E, 0xFE0F, 0x20E3} | set(range(0xE0020, 0xE0080))

# ":smile:" is the smiling face with smiling eyes here; GitHub-only customs get
# the closest Unicode stand-in (chipmunk for the squirrel, ogre for the troll)
SHORTCODE_OVERRIDES = {
    "smile": "\U0001F60A",
    "shipit": "\U0001F43F\uFE0F",
    "trollface": "\U0001F479",
}


def write_ranges():
    cps = set()
    for seq in emoji.EMOJI_DATA:
        cps.update(ord(c) for c in seq)
    cps = sorted(c for c in cps if c >= 0x80 and c not in COMPONENTS)
    ranges = []
    for cp in cps:
        if ranges and cp == ranges[-1][1] + 1:
            ranges[-1][1] = cp
        else:
            ranges.append([cp, cp])
    with open(os.path.join(DATA, "emoji_ranges.csv"), "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["start_hex", "end_hex"])
        for lo, hi in ranges:
            w.writerow([f"{lo:04X}", f"{hi:04X}"])
    return len(ranges)


def write_shortcodes():
    table = {}
    for glyph, info in emoji.EMOJI_DATA.items():
        if info.get("status") != emoji.STATUS["fully_qualified"]:
            continue
        names = [info["en"]] + list(info.get("alias", []))
        for name in names:
            name = name.strip(":")
            if not name or ":" in name or any(c.isspace() for c in name):
                continue
            table.setdefault(name, glyph)
    table.update(SHORTCODE_OVERRIDES)
    with open(os.path.join(DATA, "shortcodes.csv"), "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["shortcode", "glyph"])
        for name in sorted(table):
            w.writerow([name, table[name]])
    return len(table)


def write_general_emoji():
    src = os.path.join(os.path.dirname(emosent.__file__), "data", "Emoji_Sentiment_Data_v1.0.csv")
    n = 0
    with open(src, encoding="utf-8") as fh, open(
        os.path.join(DATA, "general_emoji_sentiment.csv"), "w", newline="", encoding="utf-8"
    ) as out:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["glyph", "occurrences", "negative", "neutral", "positive", "score"])
        for row in csv.DictReader(fh):
            occ, neg, neu, pos = (int(row[k]) for k in ("Occurrences", "Negative", "Neutral", "Positive"))
            w.writerow([row["Emoji"], occ, neg, neu, pos, f"{(pos - neg) / occ:.9f}"])
            n += 1
    return n


def write_lexicon():
    src = os.path.join(os.path.dirname(vaderSentiment.__file__), "vader_lexicon.txt")
    n = 0
    with open(src, encoding="utf-8") as fh, open(
        os.path.join(DATA, "valence_lexicon.csv"), "w", newline="", encoding="utf-8"
    ) as out:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["term", "valence"])
        for line in fh:
            parts = line.rstrip("\n").split("\t")
            if len(parts) < 2:
                continue
            term = parts[0].strip().lower()
            # the scorer only sees word tokens, so punctuation emoticons never hit
            if not term or not any(c.isalnum() for c in term):
                continue
            w.writerow([term.replace(",", "\\u002C"), parts[1]])
            n += 1

    from vaderSentiment.vaderSentiment import BOOSTER_DICT, NEGATE

    with open(os.path.join(DATA, "negators.csv"), "w", newline="", encoding="utf-8") as out:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["term"])
        for term in sorted(set(NEGATE)):
            w.writerow([term])
    with open(os.path.join(DATA, "intensifiers.csv"), "w", newline="", encoding="utf-8") as out:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["term", "multiplier"])
        for term, inc in sorted(BOOSTER_DICT.items()):
            if " " in term:
                continue
            w.writerow([term, f"{1.0 + inc:.3f}"])
    return n


if __name__ == "__main__":
    sys.stdout.write(
        f"ranges={write_ranges()} shortcodes={write_shortcodes()} "
        f"general={write_general_emoji()} lexicon={write_lexicon()}\n"
    )
