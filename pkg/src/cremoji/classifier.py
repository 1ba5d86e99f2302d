"""Random forest, stratified cross-validation and per-metric deltas.

Positive class is *useful* (label 1). Cross-validated metrics are computed
once on the pooled out-of-fold confusion matrix.
"""
from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from . import _tree
from .errors import DataError

METRIC_COLUMNS = ("P", "R", "A", "M", "F1")


@dataclass(frozen=True)
class ForestParams:
    n_trees: int = 100
    max_depth: int | None = None
    min_samples_leaf: int = 1
    max_features: str | int = "sqrt"
    seed: int = 42
    bootstrap: bool = True
    n_jobs: int = 1

    def __post_init__(self):
        if self.n_trees < 1:
            raise ValueError("n_trees must be positive")
        if self.max_depth is not None and self.max_depth < 1:
            raise ValueError("max_depth must be positive or None")
        if self.min_samples_leaf < 1:
            raise ValueError("min_samples_leaf must be positive")
        if not (self.max_features in ("sqrt", "all") or (isinstance(self.max_features, int) and self.max_features >= 1)):
            raise ValueError(f"max_features must be 'sqrt', 'all' or a positive int, got {self.max_features!r}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class Tree:
    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    neg: np.ndarray
    pos: np.ndarray

    @property
    def node_count(self):
        return len(self.feature)

    def predict_proba(self, X):
        return _tree.predict_tree(X, self.feature, self.threshold, self.left, self.right, self.neg, self.pos)

    def to_dict(self):
        return {k: getattr(self, k).tolist() for k in ("feature", "threshold", "left", "right", "neg", "pos")}


@dataclass(frozen=True)
class RandomForestModel:
    trees: tuple[Tree, ...]
    feature_count: int
    params: ForestParams

    def predict_proba(self, X) -> np.ndarray:
        X = _as_matrix(X, self.feature_count)
        return np.mean([t.predict_proba(X) for t in self.trees], axis=0)

    def predict(self, X) -> np.ndarray:
        return (self.predict_proba(X) >= 0.5).astype(np.int64)


def _as_matrix(X, feature_count=None):
    X = np.ascontiguousarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if feature_count is not None and X.shape[1] != feature_count:
        raise DataError(f"expected {feature_count} features, got {X.shape[1]}")
    return X


def _resolve_max_features(spec, n_features, n_active):
    if spec == "sqrt":
        k = int(math.isqrt(n_active))
    elif spec == "all":
        k = n_active
    else:
        if spec > n_features:
            raise DataError(f"max_features={spec} exceeds the {n_features} features")
        k = spec
    return max(1, min(k, n_active)) if n_active else 0


def train_forest(X, y, params: ForestParams = ForestParams()) -> RandomForestModel:
    """Fit a random forest of Gini CART trees.

    Tree ``i`` draws its bootstrap sample and its node-level feature
    subsets from a generator seeded with ``params.seed ^ i``. Columns that
    are constant over the training rows never enter the candidate pool, so
    appending constant columns leaves every tree unchanged.
    """
    X = _as_matrix(X)
    y = np.ascontiguousarray(y, dtype=np.int64)
    n, d = X.shape
    if len(y) != n:
        raise DataError("X and y disagree in length")
    if n < 2:
        raise DataError("need at least two rows")
    if not np.all(np.isfinite(X)):
        raise DataError("non-finite feature value")
    if not set(np.unique(y)) <= {0, 1}:
        raise DataError("labels must be 0/1")
    if len(np.unique(y)) < 2:
        raise DataError("training data contains a single class")

    active = np.flatnonzero(X.min(axis=0) != X.max(axis=0)).astype(np.int64) if n else np.empty(0, np.int64)
    k = _resolve_max_features(params.max_features, d, len(active))
    max_depth = -1 if params.max_depth is None else params.max_depth

    def grow(i):
        rng = np.random.default_rng(params.seed ^ i)
        samples = rng.integers(0, n, size=n) if params.bootstrap else np.arange(n)
        node_seed = np.uint64(rng.integers(1, 2**63))
        return Tree(*_tree.build_tree(X, y, samples.astype(np.int64), active, k, max_depth,
                                      params.min_samples_leaf, node_seed))

    if params.n_jobs > 1:
        with ThreadPoolExecutor(params.n_jobs) as pool:
            trees = tuple(pool.map(grow, range(params.n_trees)))
    else:
        trees = tuple(grow(i) for i in range(params.n_trees))
    return RandomForestModel(trees, d, params)


def predict(model: RandomForestModel, x) -> tuple[int, float]:
    """``(label, score)`` for one row; a score of exactly 0.5 is labelled useful."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or len(x) != model.feature_count:
        raise DataError(f"expected a vector of {model.feature_count} features")
    score = float(model.predict_proba(x)[0])
    return int(score >= 0.5), score


def stratified_folds(labels: Sequence[int], k: int = 10, seed: int = 42) -> np.ndarray:
    """Fold id per row.

    Each class is shuffled with ``default_rng(seed)`` (classes in ascending
    order) and dealt round-robin, continuing from the fold where the
    previous class stopped.
    """
    y = np.asarray(labels)
    if k < 2:
        raise DataError("k must be at least 2")
    classes, counts = np.unique(y, return_counts=True)
    for c, m in zip(classes, counts):
        if m < k:
            raise DataError(f"class {c} has {m} members, fewer than k={k}")
    rng = np.random.default_rng(seed)
    folds = np.empty(len(y), dtype=np.int64)
    offset = 0
    for c in classes:
        members = rng.permutation(np.flatnonzero(y == c))
        folds[members] = (offset + np.arange(len(members))) % k
        offset = (offset + len(members)) % k
    return folds


@dataclass(frozen=True)
class Confusion:
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def total(self):
        return self.tp + self.fp + self.tn + self.fn

    @classmethod
    def from_predictions(cls, y_true, y_pred):
        y_true = np.asarray(y_true)
        y_pred = np.asarray(y_pred)
        return cls(
            int(np.sum((y_pred == 1) & (y_true == 1))),
            int(np.sum((y_pred == 1) & (y_true == 0))),
            int(np.sum((y_pred == 0) & (y_true == 0))),
            int(np.sum((y_pred == 0) & (y_true == 1))),
        )


def mcc(c: Confusion) -> float:
    """Matthews correlation; 0 when any marginal is empty."""
    if min(c.tp, c.fp, c.tn, c.fn) < 0:
        raise DataError("confusion counts must be nonnegative")
    den = (c.tp + c.fp) * (c.tp + c.fn) * (c.tn + c.fp) * (c.tn + c.fn)
    if den == 0:
        return 0.0
    return (c.tp * c.tn - c.fp * c.fn) / math.sqrt(den)


@dataclass(frozen=True)
class EvalMetrics:
    precision: float
    recall: float
    accuracy: float
    f1: float
    mcc: float
    confusion: Confusion
    dataset: str = ""
    mode: str = ""

    @classmethod
    def from_confusion(cls, c: Confusion, dataset="", mode=""):
        p = c.tp / (c.tp + c.fp) if c.tp + c.fp else 0.0
        r = c.tp / (c.tp + c.fn) if c.tp + c.fn else 0.0
        a = (c.tp + c.tn) / c.total if c.total else 0.0
        f1 = 2 * p * r / (p + r) if p + r else 0.0
        return cls(p, r, a, f1, mcc(c), c, dataset, mode)

    def by_column(self) -> dict[str, float]:
        return {"P": self.precision, "R": self.recall, "A": self.accuracy, "M": self.mcc, "F1": self.f1}


def evaluate_cv(X, y, k: int = 10, params: ForestParams = ForestParams(), folds=None) -> EvalMetrics:
    """Stratified k-fold CV; every fold trains with the same ``params``."""
    X = _as_matrix(X)
    y = np.asarray(y, dtype=np.int64)
    if folds is None:
        folds = stratified_folds(y, k, params.seed)
    pred = np.empty(len(y), dtype=np.int64)
    for f in range(int(folds.max()) + 1):
        test = folds == f
        model = train_forest(X[~test], y[~test], params)
        pred[test] = model.predict(X[test])
    return EvalMetrics.from_confusion(Confusion.from_predictions(y, pred))


@dataclass(frozen=True)
class DeltaReport:
    dataset: str
    mode: str
    deltas: dict[str, float] = field(default_factory=dict)

    def row(self) -> list[str]:
        return [self.dataset, self.mode] + [format_pp(self.deltas[c]) for c in METRIC_COLUMNS]


def format_pp(value: float) -> str:
    text = f"{value:.1f}"
    return "0.0" if text == "-0.0" else text


def delta_report(with_emoji: EvalMetrics, without: EvalMetrics, dataset=None, mode=None) -> DeltaReport:
    """Percentage-point differences, with-emoji minus without-emoji."""
    if with_emoji.dataset != without.dataset:
        raise DataError(f"dataset tags differ: {with_emoji.dataset!r} vs {without.dataset!r}")
    a, b = with_emoji.by_column(), without.by_column()
    return DeltaReport(
        dataset if dataset is not None else with_emoji.dataset,
        mode if mode is not None else with_emoji.mode,
        {c: 100.0 * (a[c] - b[c]) for c in METRIC_COLUMNS},
    )


def write_metrics(rows: Sequence[EvalMetrics], fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["dataset", "mode", *METRIC_COLUMNS])
    for m in rows:
        w.writerow([m.dataset, m.mode] + [f"{v:.6f}" for v in m.by_column().values()])


def write_deltas(rows: Sequence[DeltaReport], fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["dataset", "mode", *METRIC_COLUMNS])
    for d in rows:
        w.writerow(d.row())


def tag(metrics: EvalMetrics, dataset: str, mode: str) -> EvalMetrics:
    return replace(metrics, dataset=dataset, mode=mode)
