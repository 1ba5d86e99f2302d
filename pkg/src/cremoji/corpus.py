"""Comment datasets: loading, validation, emoji-only subsets and persistence.

The three upstream usefulness datasets use different column names; the
loader maps the common spellings onto one schema::

    id, text, useful, sentiment, source[, provenance]
"""
from __future__ import annotations

import csv
import json
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .codec import CodecTables, default_tables, normalize_comment
from .errors import DataError

log = logging.getLogger(__name__)

COLUMN_ALIASES = {
    "id": ("id", "comment_id", "commentid", "review_id", "cid"),
    "text": ("text", "comment", "comment_text", "message", "body", "review_comment", "content"),
    "useful": ("useful", "usefulness", "is_useful", "label", "class", "useful_label"),
    "sentiment": ("sentiment", "sentiment_label", "polarity"),
    "source": ("source", "dataset"),
    "provenance": ("provenance",),
}

_TRUE = {"1", "true", "yes", "y", "useful"}
_FALSE = {"0", "false", "no", "n", "not useful", "not_useful", "notuseful", "useless"}
_SENTIMENT = {"-1": -1, "0": 0, "1": 1, "+1": 1, "negative": -1, "neutral": 0, "positive": 1}


@dataclass(frozen=True)
class CommentRecord:
    id: str
    text: str
    useful: int
    sentiment: int | None = None
    source: str = ""
    provenance: str | None = None


@dataclass(frozen=True)
class Dataset:
    records: tuple[CommentRecord, ...]
    name: str = field(default="dataset", compare=False)

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def manifest(self, tables: CodecTables | None = None) -> dict:
        tables = tables or default_tables()
        useful = sum(r.useful for r in self.records)
        return {
            "name": self.name,
            "size": len(self.records),
            "emoji_comment_count": sum(
                1 for r in self.records if normalize_comment(r.text, tables).tokens
            ),
            "empty_text_count": sum(1 for r in self.records if not r.text.strip()),
            "class_balance": {"useful": useful, "not_useful": len(self.records) - useful},
        }


def _parse_useful(value, where):
    v = str(value).strip().lower()
    if v in _TRUE:
        return 1
    if v in _FALSE:
        return 0
    if v in ("", "none", "null"):
        raise DataError(f"{where}: missing useful label")
    raise DataError(f"{where}: bad useful label {value!r}")


def _parse_sentiment(value, where):
    if value is None:
        return None
    v = str(value).strip().lower()
    if v in ("", "none", "null", "nan"):
        return None
    if v in _SENTIMENT:
        return _SENTIMENT[v]
    try:
        f = float(v)
    except ValueError:
        f = None
    if f in (-1.0, 0.0, 1.0):
        return int(f)
    raise DataError(f"{where}: bad sentiment value {value!r}")


def _resolve_columns(keys):
    lowered = {k.strip().lower(): k for k in keys}
    mapping = {}
    for canonical, aliases in COLUMN_ALIASES.items():
        for alias in aliases:
            if alias in lowered:
                mapping[canonical] = lowered[alias]
                break
    return mapping


def _records_from_rows(rows, name, path):
    records = []
    seen = set()
    mapping = None
    for rownum, row in rows:
        if mapping is None:
            mapping = _resolve_columns(row.keys())
            for required in ("text", "useful"):
                if required not in mapping:
                    raise DataError(f"{path}: no {required!r} column (tried {COLUMN_ALIASES[required]})")
        where = f"{path}: row {rownum}"
        rid = str(row[mapping["id"]]).strip() if "id" in mapping else f"{name}-{rownum}"
        if not rid:
            raise DataError(f"{where}: empty id")
        if rid in seen:
            raise DataError(f"{where}: duplicate id {rid!r}")
        seen.add(rid)
        text = row.get(mapping["text"])
        text = "" if text is None else str(text)
        # files without a source column are tagged with the dataset name
        source = row.get(mapping["source"]) or "" if "source" in mapping else name
        prov = row.get(mapping["provenance"]) if "provenance" in mapping else None
        records.append(
            CommentRecord(
                id=rid,
                text=text,
                useful=_parse_useful(row.get(mapping["useful"]), where),
                sentiment=_parse_sentiment(row.get(mapping["sentiment"]), where)
                if "sentiment" in mapping
                else None,
                source=str(source),
                provenance=str(prov) if prov else None,
            )
        )
    empty = sum(1 for r in records if not r.text.strip())
    if empty:
        log.warning("%s: %d record(s) with empty text kept", path, empty)
    return records


def _infer_format(path, fmt):
    if fmt:
        return fmt
    return "jsonl" if Path(path).suffix.lower() in (".jsonl", ".ndjson") else "csv"


def load_dataset(path, format: str | None = None, name: str | None = None) -> Dataset:
    """Load and validate a dataset from CSV or JSONL; row order is preserved."""
    path = os.fspath(path)
    name = name or Path(path).stem
    fmt = _infer_format(path, format)
    if fmt == "csv":
        with open(path, newline="", encoding="utf-8-sig") as fh:
            reader = csv.DictReader(fh)
            rows = [(i, row) for i, row in enumerate(reader, start=1)]
    elif fmt == "jsonl":
        rows = []
        with open(path, encoding="utf-8") as fh:
            for i, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    rows.append((i, json.loads(line)))
                except json.JSONDecodeError as e:
                    raise DataError(f"{path}: row {i}: invalid JSON ({e.msg})") from None
    else:
        raise DataError(f"unknown dataset format {fmt!r}")
    return Dataset(tuple(_records_from_rows(rows, name, path)), name)


def manifest_path(path) -> Path:
    p = Path(path)
    return p.with_name(p.stem + ".manifest.json")


def write_dataset(dataset: Dataset, path, format: str | None = None, tables=None) -> None:
    """Write ``dataset`` plus its ``<name>.manifest.json`` sidecar."""
    path = os.fspath(path)
    fmt = _infer_format(path, format)
    with_prov = any(r.provenance is not None for r in dataset.records)
    columns = ["id", "text", "useful", "sentiment", "source"] + (["provenance"] if with_prov else [])
    if fmt == "csv":
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(columns)
            for r in dataset.records:
                row = [r.id, r.text, r.useful, "" if r.sentiment is None else r.sentiment, r.source]
                if with_prov:
                    row.append(r.provenance or "")
                w.writerow(row)
    elif fmt == "jsonl":
        with open(path, "w", encoding="utf-8") as fh:
            for r in dataset.records:
                obj = {"id": r.id, "text": r.text, "useful": r.useful, "sentiment": r.sentiment, "source": r.source}
                if with_prov:
                    obj["provenance"] = r.provenance
                fh.write(json.dumps(obj, ensure_ascii=False) + "\n")
    else:
        raise DataError(f"unknown dataset format {fmt!r}")
    with open(manifest_path(path), "w", encoding="utf-8") as fh:
        json.dump(dataset.manifest(tables), fh, ensure_ascii=False, indent=2)
        fh.write("\n")


def filter_emoji_only(datasets: Sequence[Dataset], tables: CodecTables | None = None, name="D_all") -> Dataset:
    """Every record, across ``datasets`` in order, whose normalized text has an emoji."""
    tables = tables or default_tables()
    kept = [
        r for d in datasets for r in d.records if normalize_comment(r.text, tables).tokens
    ]
    return Dataset(tuple(kept), name)


def concat(datasets: Iterable[Dataset], name="pooled") -> Dataset:
    return Dataset(tuple(r for d in datasets for r in d.records), name)
