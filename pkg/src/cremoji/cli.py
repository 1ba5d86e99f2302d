"""Command-line entry point.

Subcommands::

    cremoji h1        correlation of sentiment channels with labels
    cremoji h2        usefulness prediction with and without emoji information
    cremoji normalize rewrite emoji forms to glyphs (stdin or arguments)
    cremoji score     per-comment sentiment channels as CSV
    cremoji stats     emoji frequency table per dataset
    cremoji augment   append guideline emojis to emoji-free comments
    cremoji kappa     Cohen's kappa between two annotators

Settings come from ``--config`` (a flat ``key = value`` file) and are
overridden by flags.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path

from . import __version__
from .errors import CremojiError, DataError

log = logging.getLogger("cremoji")

PATH_KEYS = (
    "emoticons",
    "shortcodes",
    "emoji_ranges",
    "lexicon",
    "negators",
    "intensifiers",
    "overrides",
    "general_emoji",
    "cr_emoji",
    "stoplist",
    "rulebook",
    "word_vectors",
    "emoji_vectors",
)


@dataclass(frozen=True)
class RunConfig:
    emoticons: str | None = None
    shortcodes: str | None = None
    emoji_ranges: str | None = None
    lexicon: str | None = None
    negators: str | None = None
    intensifiers: str | None = None
    overrides: str | None = None
    general_emoji: str | None = None
    cr_emoji: str | None = None
    stoplist: str | None = None
    rulebook: str | None = None
    word_vectors: str | None = None
    emoji_vectors: str | None = None
    seed: int = 42
    folds: int = 10
    n_trees: int = 100
    max_depth: int | None = None
    min_samples_leaf: int = 1
    max_features: str | int = "sqrt"
    n_jobs: int = 1
    emoji_sentiment_aggregation: str = "sum"
    embedding_aggregation: str = "mean"
    emoji_scale: float = 4.0
    out: str = "."
    datasets: tuple[str, ...] = field(default=())

    def validate(self) -> "RunConfig":
        for key in PATH_KEYS:
            p = getattr(self, key)
            if p is not None and not os.path.exists(p):
                raise DataError(f"config {key}: no such file {p!r}")
        for p in self.datasets:
            if not os.path.exists(p):
                raise DataError(f"no such dataset {p!r}")
        return self

    def forest_params(self):
        from .classifier import ForestParams

        return ForestParams(
            n_trees=self.n_trees,
            max_depth=self.max_depth,
            min_samples_leaf=self.min_samples_leaf,
            max_features=self.max_features,
            seed=self.seed,
            n_jobs=self.n_jobs,
        )

    def resources(self):
        from .resources import Resources

        return Resources.load(
            **{k: getattr(self, k) for k in PATH_KEYS},
            emoji_sentiment_aggregation=self.emoji_sentiment_aggregation,
            embedding_aggregation=self.embedding_aggregation,
            emoji_scale=self.emoji_scale,
        )


def _coerce(key, value):
    kinds = {f.name: f.type for f in fields(RunConfig)}
    if key not in kinds:
        raise DataError(f"unknown config key {key!r}")
    kind = kinds[key]
    if value in ("", "none", "None") and "None" in str(kind):
        return None
    if key == "max_features":
        return int(value) if str(value).isdigit() else value
    if kind.startswith("int"):
        return int(value)
    if kind.startswith("float"):
        return float(value)
    if key == "datasets":
        return tuple(value.split())
    return value


def read_config(path) -> dict:
    """Parse ``key = value`` lines; relative paths resolve against the file's directory."""
    base = Path(path).resolve().parent
    values = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DataError(f"{path}:{line_no}: expected 'key = value'")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            value = _coerce(key, value)
            if key in PATH_KEYS + ("out",) and value:
                value = str(base / value)
            if key == "datasets":
                value = tuple(str(base / v) for v in value)
            values[key] = value
    return values


def build_config(args) -> RunConfig:
    values = read_config(args.config) if getattr(args, "config", None) else {}
    for key in ("seed", "folds", "out"):
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    if getattr(args, "dataset", None):
        values["datasets"] = tuple(args.dataset)
    return RunConfig(**values).validate()


def _load_datasets(cfg, emoji_only, tables):
    from .corpus import filter_emoji_only, load_dataset

    if not cfg.datasets:
        raise DataError("no dataset given (use --dataset or 'datasets =' in the config)")
    datasets = [load_dataset(p) for p in cfg.datasets]
    if emoji_only:
        datasets = [filter_emoji_only([d], tables, d.name) for d in datasets]
    return datasets


def _out_path(cfg, name):
    os.makedirs(cfg.out, exist_ok=True)
    return os.path.join(cfg.out, name)


def cmd_h1(cfg: RunConfig, emoji_only: bool = False) -> str:
    """Write ``correlations.csv`` for every dataset and, with several, the pooled union."""
    from .codec import normalize_comment
    from .corpus import concat
    from .sentiment import correlation_report, compute_channels, write_correlations

    res = cfg.resources()
    datasets = _load_datasets(cfg, emoji_only, res.codec)
    if len(datasets) > 1:
        datasets.append(concat(datasets, "pooled"))
    path = _out_path(cfg, "correlations.csv")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write("dataset,channel,target,subset,rho,n\n")
        for d in datasets:
            channels = [compute_channels(normalize_comment(r.text, res.codec), res.sentiment) for r in d]
            sentiment = [r.sentiment for r in d]
            targets = ("sentiment", "usefulness")
            if all(s is None for s in sentiment):
                log.warning("%s: no sentiment labels, reporting usefulness only", d.name)
                targets = ("usefulness",)
            cells = correlation_report(channels, sentiment, [r.useful for r in d], targets)
            write_correlations(cells, fh, d.name)
    return path


H2_MODES = {
    "features": ("TextFeatures", "TextPlusEmojiFeatures"),
    "embeddings": ("TextEmbedding", "FusedEmbedding"),
}


def _effective_folds(dataset, k):
    import numpy as np

    counts = np.bincount([r.useful for r in dataset], minlength=2)
    smallest = int(counts.min())
    if smallest < 2:
        log.warning("%s: a class has %d member(s); skipped", dataset.name, smallest)
        return None
    if smallest < k:
        log.warning("%s: smallest class has %d members, folds reduced from %d to %d",
                    dataset.name, smallest, k, smallest)
        return smallest
    return k


def cmd_h2(cfg: RunConfig, modes=("features", "embeddings"), emoji_only: bool = False, resources=None):
    """Write ``metrics.csv`` and ``deltas.csv`` (baseline vs emoji-aware) per dataset and mode."""
    from .classifier import delta_report, evaluate_cv, stratified_folds, tag, write_deltas, write_metrics
    from .corpus import filter_emoji_only
    from .features import build_design_matrix

    res = resources or cfg.resources()
    for m in modes:
        if m not in H2_MODES:
            raise DataError(f"unknown mode {m!r}")
    if "embeddings" in modes and (res.word_vectors is None or res.emoji_vectors is None):
        raise DataError("embeddings mode needs word_vectors and emoji_vectors in the config")
    datasets = _load_datasets(cfg, emoji_only, res.codec)
    if len(datasets) > 1 and not emoji_only:
        datasets.append(filter_emoji_only(datasets, res.codec, "D_all"))
    params = cfg.forest_params()
    metrics, deltas = [], []
    for d in datasets:
        k = _effective_folds(d, cfg.folds)
        if k is None:
            continue
        folds = stratified_folds([r.useful for r in d], k, cfg.seed)
        for m in modes:
            base_mode, emoji_mode = H2_MODES[m]
            runs = []
            for label, mode in ((m, base_mode), (m + "+emoji", emoji_mode)):
                dm = build_design_matrix(d, mode, res)
                runs.append(tag(evaluate_cv(dm.X, dm.labels, k, params, folds), d.name, label))
                log.info("%s %s: MCC %.4f", d.name, label, runs[-1].mcc)
            metrics.extend(runs)
            deltas.append(delta_report(runs[1], runs[0], d.name, m))
    mpath, dpath = _out_path(cfg, "metrics.csv"), _out_path(cfg, "deltas.csv")
    with open(mpath, "w", newline="", encoding="utf-8") as fh:
        write_metrics(metrics, fh)
    with open(dpath, "w", newline="", encoding="utf-8") as fh:
        write_deltas(deltas, fh)
    return mpath, dpath, deltas


def _input_lines(texts):
    if texts:
        return list(texts)
    return [line.rstrip("\n") for line in sys.stdin]


def cmd_normalize(cfg, texts, as_json=False, emoji_only=False):
    from .codec import load_codec_tables, normalize_comment

    tables = load_codec_tables(cfg.emoticons, cfg.shortcodes, cfg.emoji_ranges)
    for text in _input_lines(texts):
        nc = normalize_comment(text, tables)
        if as_json:
            obj = {
                "normalized": nc.normalized,
                "stripped": nc.stripped,
                "tokens": [
                    {"glyph": t.glyph, "source_form": str(t.source_form), "span": list(t.span),
                     "source_text": t.source_text}
                    for t in nc.tokens
                ],
            }
            print(json.dumps(obj, ensure_ascii=False))
        elif emoji_only:
            print("".join(nc.glyphs))
        else:
            print(nc.normalized)


def cmd_score(cfg, texts):
    import csv

    from .codec import normalize_comment
    from .sentiment import compute_channels

    res = cfg.resources()
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["g_t", "cr_t", "g_e", "cr_e", "g_te", "unmatched"])
    for text in _input_lines(texts):
        c = compute_channels(normalize_comment(text, res.codec), res.sentiment)
        w.writerow([f"{c.g_t:.6f}", f"{c.cr_t:.6f}", f"{c.g_e:.6f}", f"{c.cr_e:.6f}", f"{c.g_te:.6f}",
                    c.unmatched_emoji_count])


def cmd_stats(cfg, emoji_only=False):
    from .augmentation import dataset_emoji_stats
    from .codec import load_codec_tables

    tables = load_codec_tables(cfg.emoticons, cfg.shortcodes, cfg.emoji_ranges)
    text = "".join(dataset_emoji_stats(d, tables).render() for d in _load_datasets(cfg, emoji_only, tables))
    path = _out_path(cfg, "stats.txt")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    sys.stdout.write(text)
    return path


def cmd_augment(cfg, top_n=1):
    from .augmentation import augment_dataset, load_rulebook
    from .codec import load_codec_tables
    from .corpus import write_dataset

    tables = load_codec_tables(cfg.emoticons, cfg.shortcodes, cfg.emoji_ranges)
    rulebook = load_rulebook(cfg.rulebook)
    paths = []
    for d in _load_datasets(cfg, False, tables):
        aug = augment_dataset(d, rulebook, top_n, tables)
        path = _out_path(cfg, f"{aug.name}.csv")
        write_dataset(aug, path, "csv", tables)
        changed = sum(1 for a, b in zip(aug.records, d.records) if a.text != b.text)
        print(f"{d.name}: {changed} of {len(d)} comments augmented -> {path}")
        paths.append(path)
    return paths


def cmd_kappa(cfg, files):
    from .augmentation import cohen_kappa, load_annotations, write_agreement

    groups = {}
    for f in files:
        for annotator, recs in load_annotations(f).items():
            if annotator in groups:
                raise DataError(f"annotator {annotator!r} appears in more than one file")
            groups[annotator] = recs
    if len(groups) != 2:
        raise DataError(f"need exactly two annotators, found {len(groups)}")
    a, b = groups.values()
    report = cohen_kappa(a, b)
    path = _out_path(cfg, "agreement.csv")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        write_agreement(report, fh)
    print(f"kappa={report.kappa:.4f} p_o={report.observed_agreement:.4f} "
          f"p_e={report.expected_agreement:.4f} n={report.n}")
    return report


def make_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="flat key = value settings file")
    common.add_argument("--dataset", nargs="+", metavar="PATH", help="dataset CSV/JSONL file(s)")
    common.add_argument("--seed", type=int, help="random seed (default 42)")
    common.add_argument("--folds", type=int, help="cross-validation folds (default 10)")
    common.add_argument("--out", metavar="DIR", help="output directory (default .)")
    common.add_argument("--emoji-only", action="store_true", help="restrict to comments containing emojis")
    common.add_argument("-v", "--verbose", action="count", default=0)

    p = argparse.ArgumentParser(prog="cremoji", description=__doc__.split("\n\n")[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("h1", parents=[common], help="sentiment/usefulness correlations")
    h2 = sub.add_parser("h2", parents=[common], help="usefulness prediction deltas")
    h2.add_argument("--mode", nargs="+", choices=sorted(H2_MODES), default=["features", "embeddings"])
    for name in ("normalize", "score"):
        sp = sub.add_parser(name, parents=[common], help=f"{name} comments from arguments or stdin")
        sp.add_argument("text", nargs="*")
        if name == "normalize":
            sp.add_argument("--json", action="store_true", help="emit tokens and spans as JSON lines")
    sub.add_parser("stats", parents=[common], help="emoji frequency per dataset")
    aug = sub.add_parser("augment", parents=[common], help="append guideline emojis")
    aug.add_argument("--top-n", type=int, default=1)
    kp = sub.add_parser("kappa", parents=[common], help="Cohen's kappa of two annotators")
    kp.add_argument("annotations", nargs="+", metavar="CSV")
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg = build_config(args)
        if args.command == "h1":
            print(cmd_h1(cfg, args.emoji_only))
        elif args.command == "h2":
            mpath, dpath, _ = cmd_h2(cfg, tuple(args.mode), args.emoji_only)
            print(mpath)
            print(dpath)
        elif args.command == "normalize":
            cmd_normalize(cfg, args.text, args.json, args.emoji_only)
        elif args.command == "score":
            cmd_score(cfg, args.text)
        elif args.command == "stats":
            cmd_stats(cfg, args.emoji_only)
        elif args.command == "augment":
            cmd_augment(cfg, args.top_n)
        elif args.command == "kappa":
            cmd_kappa(cfg, args.annotations)
    except (CremojiError, OSError, ValueError) as e:
        msg = " ".join(str(e).split())
        print(f"error: {type(e).__name__}: {msg}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
