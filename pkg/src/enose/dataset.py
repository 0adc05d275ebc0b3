"""Run-file parsing, dataset assembly, and stratified splitting."""

from __future__ import annotations

import glob as _glob
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BadK,
    ClassTooSmall,
    EmptyInput,
    EmptyRun,
    InvalidFraction,
    MalformedCell,
    RaggedRow,
    SchemaMismatch,
    TooFewPerClass,
)
from .rng import derive_rng

LABEL_COLUMN = "target"

# canonical 9-channel header (configurable at ingest time)
CANONICAL_CHANNELS = (
    "co", "no2", "voc", "ethanol", "co2", "tvoc",
    "temperature", "humidity", "pressure",
)


@dataclass(frozen=True)
class RunTable:
    """One acquisition run: a feature matrix plus its class name."""

    feature_names: tuple[str, ...]
    rows: np.ndarray  # n x d, float64
    label: str


@dataclass(frozen=True)
class Dataset:
    """Merged labeled dataset; the currency passed between pipeline stages.

    ``classes`` is the full class table of the parent population, so encoded
    labels stay aligned across derived subsets (a split may leave a class
    empty on one side).
    """

    feature_names: tuple[str, ...]
    features: np.ndarray  # n x d, float64
    labels: np.ndarray    # n, int64 in [0, C)
    classes: tuple[str, ...]

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def d(self) -> int:
        return self.features.shape[1]

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    def subset(self, indices: np.ndarray) -> "Dataset":
        idx = np.asarray(indices, dtype=np.intp)
        return Dataset(self.feature_names, self.features[idx], self.labels[idx], self.classes)

    def with_features(self, names: tuple[str, ...], features: np.ndarray) -> "Dataset":
        return Dataset(tuple(names), np.asarray(features, dtype=np.float64), self.labels, self.classes)


@dataclass(frozen=True)
class FoldPlan:
    """k disjoint (train_indices, val_indices) pairs covering all samples."""

    folds: tuple[tuple[np.ndarray, np.ndarray], ...]
    seed: int

    @property
    def k(self) -> int:
        return len(self.folds)


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def parse_run_csv(text: str, label: str | None = None) -> RunTable:
    """Parse one run's CSV content into a RunTable.

    The first line is a comma-separated header; subsequent lines are numeric.
    An optional ``target`` column carries the class name in-file; it must be
    constant and, if ``label`` is also given, must agree with it.
    """
    lines = [ln for ln in text.replace("\r\n", "\n").split("\n") if ln.strip() != ""]
    if not lines:
        raise EmptyRun("no header line")
    header = [h.strip() for h in lines[0].split(",")]
    if len(lines) == 1:
        raise EmptyRun("header only, no data rows")

    label_col = header.index(LABEL_COLUMN) if LABEL_COLUMN in header else None
    feature_cols = [i for i in range(len(header)) if i != label_col]

    n = len(lines) - 1
    rows = np.empty((n, len(feature_cols)), dtype=np.float64)
    file_label: str | None = None
    for r, line in enumerate(lines[1:], start=1):
        cells = [c.strip() for c in line.split(",")]
        if len(cells) != len(header):
            raise RaggedRow(row=r, expected=len(header), got=len(cells))
        if label_col is not None:
            cell = cells[label_col]
            if file_label is None:
                file_label = cell
            elif cell != file_label:
                raise SchemaMismatch(f"target column is not constant: {file_label!r} vs {cell!r} at row {r}")
        for j, ci in enumerate(feature_cols):
            token = cells[ci]
            try:
                value = float(token)
            except ValueError:
                raise MalformedCell(row=r, col=ci + 1, token=token) from None
            if not math.isfinite(value):
                raise MalformedCell(row=r, col=ci + 1, token=token)
            rows[r - 1, j] = value

    if file_label is not None and label is not None and file_label != label:
        raise SchemaMismatch(f"in-file target {file_label!r} disagrees with supplied label {label!r}")
    final_label = label if label is not None else file_label
    if final_label is None:
        raise EmptyInput("no label supplied and no target column present")
    return RunTable(tuple(header[i] for i in feature_cols), rows, final_label)


def encode_class_names(names) -> tuple[str, ...]:
    """Deduplicated, lexicographically sorted class table."""
    return tuple(sorted(set(names)))


def merge_runs(tables: list[RunTable]) -> Dataset:
    """Concatenate runs (in input order) into one labeled Dataset."""
    if not tables:
        raise EmptyInput("no run tables to merge")
    names = tables[0].feature_names
    for t in tables[1:]:
        if t.feature_names != names:
            raise SchemaMismatch(f"headers differ: {names} vs {t.feature_names}")
    classes = encode_class_names(t.label for t in tables)
    index = {c: i for i, c in enumerate(classes)}
    features = np.concatenate([t.rows for t in tables], axis=0)
    labels = np.concatenate([np.full(t.rows.shape[0], index[t.label], dtype=np.int64) for t in tables])
    return Dataset(names, features, labels, classes)


def stratified_split(ds: Dataset, test_fraction: float, seed: int) -> tuple[Dataset, Dataset]:
    """Seeded stratified train/test split.

    Per class c the test side receives round-half-up(n_c * test_fraction)
    samples chosen by a seeded shuffle of that class's indices.
    """
    if not (0.0 < test_fraction < 1.0):
        raise InvalidFraction(f"test_fraction {test_fraction} outside (0, 1)")
    present = np.unique(ds.labels)
    counts = np.bincount(ds.labels, minlength=ds.n_classes)
    small = [ds.classes[c] for c in present if counts[c] < 2]
    if small:
        raise ClassTooSmall(f"classes with fewer than 2 samples: {small}")

    test_parts = []
    train_parts = []
    for c in present:
        idx = np.flatnonzero(ds.labels == c)
        rng = derive_rng(seed, "split", int(c))
        perm = rng.permutation(idx.shape[0])
        n_test = _round_half_up(idx.shape[0] * test_fraction)
        shuffled = idx[perm]
        test_parts.append(shuffled[:n_test])
        train_parts.append(shuffled[n_test:])
    train_idx = np.sort(np.concatenate(train_parts))
    test_idx = np.sort(np.concatenate(test_parts))
    return ds.subset(train_idx), ds.subset(test_idx)


def stratified_kfold(labels: np.ndarray, k: int, seed: int) -> FoldPlan:
    """Seeded stratified k-fold plan over encoded labels."""
    labels = np.asarray(labels, dtype=np.int64)
    if k < 2:
        raise BadK(f"k must be >= 2, got {k}")
    folds_val: list[list[np.ndarray]] = [[] for _ in range(k)]
    for c in np.unique(labels):
        idx = np.flatnonzero(labels == c)
        if idx.shape[0] < k:
            raise TooFewPerClass(f"class {c} has {idx.shape[0]} samples, fewer than k={k}")
        rng = derive_rng(seed, "kfold", int(c))
        shuffled = idx[rng.permutation(idx.shape[0])]
        for f in range(k):
            folds_val[f].append(shuffled[f::k])
    n = labels.shape[0]
    all_idx = np.arange(n)
    folds = []
    for f in range(k):
        val = np.sort(np.concatenate(folds_val[f]))
        mask = np.ones(n, dtype=bool)
        mask[val] = False
        folds.append((all_idx[mask], val))
    return FoldPlan(tuple(folds), seed)


# --- file-level ingestion ----------------------------------------------------

def label_from_filename(path: str) -> str | None:
    """Extract the class name from a ``<class>__<run_id>.csv`` file name."""
    stem = os.path.splitext(os.path.basename(path))[0]
    if "__" in stem:
        return stem.split("__", 1)[0]
    return None


def load_run_file(path: str, label: str | None = None) -> RunTable:
    if label is None:
        label = label_from_filename(path)
    with open(path, encoding="utf-8") as fh:
        return parse_run_csv(fh.read(), label)


def load_manifest(path: str) -> Dataset:
    """Load runs listed in a manifest of ``<path>,<class_name>`` lines."""
    base = os.path.dirname(os.path.abspath(path))
    tables = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            run_path, _, cls = line.partition(",")
            run_path = run_path.strip()
            if not os.path.isabs(run_path):
                run_path = os.path.join(base, run_path)
            tables.append(load_run_file(run_path, cls.strip() or None))
    return merge_runs(tables)


def load_glob(pattern: str) -> Dataset:
    """Load every run file matching a glob; labels come from file names."""
    paths = sorted(_glob.glob(pattern))
    if not paths:
        raise EmptyInput(f"no files match {pattern!r}")
    return merge_runs([load_run_file(p) for p in paths])
