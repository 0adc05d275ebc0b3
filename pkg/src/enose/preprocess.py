"""Label encoding, z-score scaling, drift diagnostics, and feature-set versions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .dataset import Dataset
from .errors import EmptyMatrix, MissingColumn, UnfittedReducer

DROPPED_AMBIENT = ("temperature", "pressure")
VERSIONS = ("V1", "V2", "V3", "V4")


@dataclass(frozen=True)
class LabelEncoder:
    """Bijection between class names (sorted ascending) and indices."""

    classes: tuple[str, ...]

    def encode(self, name: str) -> int:
        return self.classes.index(name)

    def decode(self, index: int) -> str:
        return self.classes[index]


def encode_labels(class_names) -> LabelEncoder:
    return LabelEncoder(tuple(sorted(set(class_names))))


@dataclass(frozen=True)
class Scaler:
    """Column-wise z-score scaler using the population standard deviation.

    Zero-variance columns store std 1.0 (flagged in ``degenerate``) so the
    transform maps them to zeros instead of dividing by zero.
    """

    means: np.ndarray
    stds: np.ndarray
    degenerate: np.ndarray  # bool mask of zero-variance columns

    def transform(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        return (X - self.means) / self.stds


def fit_scaler(X: np.ndarray) -> Scaler:
    X = np.asarray(X, dtype=np.float64)
    if X.size == 0:
        raise EmptyMatrix("cannot fit scaler on an empty matrix")
    means = X.mean(axis=0)
    stds = X.std(axis=0)  # population (divide by n)
    degenerate = stds == 0.0
    stds = np.where(degenerate, 1.0, stds)
    return Scaler(means, stds, degenerate)


def pearson_r(x: np.ndarray, y: np.ndarray) -> float:
    """Pearson correlation; 0.0 when either side has zero variance."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    xc = x - x.mean()
    yc = y - y.mean()
    denom = np.sqrt((xc * xc).sum() * (yc * yc).sum())
    if denom == 0.0:
        return 0.0
    return float((xc * yc).sum() / denom)


def feature_target_correlation(ds: Dataset) -> list[tuple[str, float]]:
    """Per-feature Pearson r against the encoded label, sorted descending.

    Ties in r break by ascending feature name, so the ranking is stable.
    """
    if ds.n < 2:
        raise EmptyMatrix("correlation needs at least 2 samples")
    y = ds.labels.astype(np.float64)
    rows = [(name, pearson_r(ds.features[:, j], y)) for j, name in enumerate(ds.feature_names)]
    return sorted(rows, key=lambda t: (-t[1], t[0]))


def correlation_report_csv(ranking: list[tuple[str, float]]) -> str:
    lines = ["feature,r"]
    lines += [f"{name},{r!r}" for name, r in ranking]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class VersionSpec:
    """One of the four feature-set configurations.

    V1 keeps all columns, V2 drops the ambient-drift columns, V3/V4 project
    the V2 columns through a fitted PCA/LDA model (fit on training data only,
    after standardization).
    """

    version: str
    reducer: object | None = None
    dropped_columns: tuple[str, ...] = ()

    def __post_init__(self):
        if self.version not in VERSIONS:
            raise ValueError(f"unknown version {self.version!r}")


def drop_columns(ds: Dataset, names: tuple[str, ...]) -> Dataset:
    missing = [n for n in names if n not in ds.feature_names]
    if missing:
        raise MissingColumn(f"columns not present: {missing}")
    keep = [j for j, n in enumerate(ds.feature_names) if n not in names]
    return ds.with_features(tuple(ds.feature_names[j] for j in keep), ds.features[:, keep])


def apply_version(ds: Dataset, spec: VersionSpec) -> Dataset:
    """Project a dataset into the feature space of the given version."""
    if spec.version == "V1":
        return ds
    reduced = drop_columns(ds, spec.dropped_columns or DROPPED_AMBIENT)
    if spec.version == "V2":
        return reduced
    if spec.reducer is None:
        raise UnfittedReducer(f"{spec.version} requires a fitted reducer")
    scores = spec.reducer.transform(reduced.features)
    prefix = "pc" if spec.version == "V3" else "ld"
    names = tuple(f"{prefix}{i + 1}" for i in range(scores.shape[1]))
    return reduced.with_features(names, scores)
