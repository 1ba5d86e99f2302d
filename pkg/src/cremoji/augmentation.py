"""Guideline-driven emoji suggestion, dataset augmentation and annotator agreement."""
from __future__ import annotations

import csv
import re
from collections import Counter
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from ._tables import data_path, read_rows, unescape
from .codec import CodecTables, NormalizedComment, default_tables, normalize_comment
from .errors import DataError, TableError, UndefinedError

NONE = None  # "no emoji" is a category of its own when measuring agreement


@dataclass(frozen=True)
class AugmentationRule:
    priority: int
    ordinal: int
    pattern: re.Pattern
    intent: str
    glyph: str

    @property
    def rule_id(self) -> str:
        return f"rule{self.ordinal}"


@dataclass(frozen=True)
class Rulebook:
    rules: tuple[AugmentationRule, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "rules", tuple(sorted(self.rules, key=lambda r: (r.priority, r.ordinal)))
        )

    def __len__(self):
        return len(self.rules)

    @classmethod
    def from_rows(cls, rows: Iterable[tuple[int, str, str, str]]) -> "Rulebook":
        rules = []
        for ordinal, (priority, pattern, intent, glyph) in enumerate(rows, start=1):
            if not glyph:
                raise DataError(f"rule {ordinal}: empty glyph")
            rules.append(AugmentationRule(priority, ordinal, re.compile(pattern, re.IGNORECASE), intent, glyph))
        return cls(tuple(rules))


def load_rulebook(path=None) -> Rulebook:
    """Read ``priority,pattern,intent,glyph`` rows; commas in patterns are written ``\\u002C``."""
    path = path or data_path("rulebook.csv")
    rules = []
    for ordinal, (line, row) in enumerate(read_rows(path, ("priority", "pattern", "intent", "glyph")), start=1):
        try:
            priority = int(row["priority"])
        except ValueError:
            raise TableError(f"priority must be an integer, got {row['priority']!r}", path, line) from None
        try:
            pattern = re.compile(unescape(row["pattern"]), re.IGNORECASE)
        except re.error as e:
            raise TableError(f"pattern does not compile: {e}", path, line) from None
        rules.append(AugmentationRule(priority, ordinal, pattern, row["intent"].strip(), row["glyph"].strip()))
    return Rulebook(tuple(rules))


@dataclass(frozen=True)
class Suggestion:
    glyph: str
    intent: str
    rule_id: str


def suggest_emojis(nc: NormalizedComment, rulebook: Rulebook, top_n: int = 1) -> list[Suggestion]:
    """First ``top_n`` distinct glyphs whose rules match ``nc.normalized``, in rule order."""
    out: list[Suggestion] = []
    seen = set()
    for rule in rulebook.rules:
        if len(out) >= top_n:
            break
        if rule.glyph in seen or not rule.pattern.search(nc.normalized):
            continue
        seen.add(rule.glyph)
        out.append(Suggestion(rule.glyph, rule.intent, rule.rule_id))
    return out


def augment_dataset(dataset, rulebook: Rulebook, top_n: int = 1, tables: CodecTables | None = None):
    """Append suggested glyphs to every emoji-free comment.

    Provenance records the firing rule ids, ``original`` for comments that
    already carried emojis and ``none`` when nothing matched. Rows that
    already have a provenance are passed through, so the operation is
    idempotent.
    """
    from .corpus import Dataset

    tables = tables or default_tables()
    out = []
    for r in dataset.records:
        nc = normalize_comment(r.text, tables)
        if nc.tokens:
            out.append(r if r.provenance else replace(r, provenance="original"))
            continue
        if r.provenance == "none":
            out.append(r)
            continue
        picks = suggest_emojis(nc, rulebook, top_n)
        if not picks:
            out.append(replace(r, provenance="none"))
            continue
        text = r.text + "".join(" " + s.glyph for s in picks)
        out.append(replace(r, text=text, provenance=";".join(s.rule_id for s in picks)))
    return Dataset(tuple(out), dataset.name + "+")


@dataclass(frozen=True)
class AnnotationRecord:
    comment_id: str
    annotator_id: str
    glyph: str | None


def load_annotations(path) -> dict[str, list[AnnotationRecord]]:
    """Annotations grouped by annotator, in file order; an empty glyph means NONE."""
    by_annotator: dict[str, list[AnnotationRecord]] = {}
    seen = set()
    for line, row in read_rows(path, ("comment_id", "annotator_id"), ("glyph",)):
        key = (row["comment_id"], row["annotator_id"])
        if key in seen:
            raise TableError(f"duplicate annotation for comment {key[0]!r} by {key[1]!r}", path, line)
        seen.add(key)
        glyph = (row.get("glyph") or "").strip() or NONE
        by_annotator.setdefault(row["annotator_id"], []).append(AnnotationRecord(*key, glyph))
    return by_annotator


@dataclass(frozen=True)
class AgreementReport:
    kappa: float
    observed_agreement: float
    expected_agreement: float
    n: int
    disagreements: tuple[tuple[str, str | None, str | None], ...]


def cohen_kappa(a: Sequence[AnnotationRecord], b: Sequence[AnnotationRecord]) -> AgreementReport:
    """Chance-corrected agreement of two annotators over the same comments."""
    la = {r.comment_id: r.glyph for r in a}
    lb = {r.comment_id: r.glyph for r in b}
    if len(la) != len(a) or len(lb) != len(b):
        raise DataError("one annotation per comment and annotator expected")
    if set(la) != set(lb):
        only = sorted(set(la) ^ set(lb))
        raise DataError(f"annotators cover different comments, e.g. {only[:3]}")
    n = len(la)
    if n < 2:
        raise DataError("kappa needs at least two annotated comments")
    ids = [r.comment_id for r in a]
    agree = sum(1 for i in ids if la[i] == lb[i])
    ca, cb = Counter(la.values()), Counter(lb.values())
    p_o = agree / n
    p_e = sum(ca[c] * cb[c] for c in ca) / (n * n)
    if p_e >= 1.0:
        raise UndefinedError("expected agreement is 1 (single shared category); kappa undefined")
    kappa = (p_o - p_e) / (1.0 - p_e)
    dis = tuple((i, la[i], lb[i]) for i in ids if la[i] != lb[i])
    return AgreementReport(kappa, p_o, p_e, n, dis)


def write_agreement(report: AgreementReport, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["kappa", "observed_agreement", "expected_agreement", "n", "disagreements"])
    w.writerow(
        [f"{report.kappa:.6f}", f"{report.observed_agreement:.6f}", f"{report.expected_agreement:.6f}",
         report.n, len(report.disagreements)]
    )
    w.writerow(["comment_id", "glyph_a", "glyph_b"])
    for cid, ga, gb in report.disagreements:
        w.writerow([cid, ga or "", gb or ""])


@dataclass(frozen=True)
class EmojiStats:
    name: str
    size: int
    emoji_comments: int
    counts: tuple[tuple[str, int], ...]

    def cells(self) -> list[str]:
        return [f"{g}({c})" for g, c in self.counts]

    def render(self) -> str:
        return (
            f"dataset\t{self.name}\n"
            f"size\t{self.size:,}\n"
            f"emoji_comments\t{self.emoji_comments}\n"
            f"emojis\t{', '.join(self.cells())}\n"
        )


def dataset_emoji_stats(dataset, tables: CodecTables | None = None) -> EmojiStats:
    """Glyph occurrence counts (not comment counts), most frequent first."""
    tables = tables or default_tables()
    counts: Counter[str] = Counter()
    first_seen: dict[str, int] = {}
    with_emoji = 0
    for r in dataset.records:
        glyphs = normalize_comment(r.text, tables).glyphs
        with_emoji += bool(glyphs)
        for g in glyphs:
            first_seen.setdefault(g, len(first_seen))
            counts[g] += 1
    ordered = sorted(counts.items(), key=lambda kv: (-kv[1], first_seen[kv[0]]))
    return EmojiStats(dataset.name, len(dataset.records), with_emoji, tuple(ordered))
