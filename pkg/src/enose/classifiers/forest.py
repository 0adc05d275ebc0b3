"""Random forest: bagged CART trees with per-split feature subsampling."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import ShapeMismatch
from ..rng import derive_rng
from .base import predict_from_proba
from .tree import DecisionTree, TreeParams, dt_fit


@dataclass(frozen=True)
class ForestParams:
    n_estimators: int = 100
    max_features: str | float = "sqrt"  # sqrt | log2 | all | fraction in (0, 1]
    bootstrap: bool = True
    tree: TreeParams = field(default_factory=TreeParams)
    seed: int = 0


def resolve_max_features(spec: str | float, d: int) -> int:
    if spec == "sqrt":
        return max(1, math.ceil(math.sqrt(d)))
    if spec == "log2":
        return max(1, math.ceil(math.log2(d))) if d > 1 else 1
    if spec == "all":
        return d
    f = float(spec)
    if not (0.0 < f <= 1.0):
        raise ValueError(f"max_features fraction {f} outside (0, 1]")
    return max(1, math.ceil(f * d))


class RandomForest:
    """Unweighted probability average over member trees."""

    def __init__(self, params: ForestParams, trees: list[DecisionTree], n_classes: int):
        self.params = params
        self.trees = trees
        self.n_classes = n_classes

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        proba = self.trees[0].predict_proba(X)
        for tree in self.trees[1:]:
            proba += tree.predict_proba(X)
        return proba / len(self.trees)

    def predict(self, X: np.ndarray) -> np.ndarray:
        return predict_from_proba(self.predict_proba(X))


def rf_fit(X: np.ndarray, y: np.ndarray, params: ForestParams, n_classes: int | None = None) -> RandomForest:
    """Fit a forest; each tree uses the stream derived from (seed, tree index)."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or X.shape[0] != y.shape[0] or X.shape[0] < 1:
        raise ShapeMismatch(f"X {X.shape} incompatible with y {y.shape}")
    if n_classes is None:
        n_classes = int(y.max()) + 1
    n, d = X.shape
    k = resolve_max_features(params.max_features, d)
    trees = []
    for t in range(params.n_estimators):
        rng = derive_rng(params.seed, "tree", t)
        if params.bootstrap:
            idx = rng.integers(0, n, size=n)
            Xt, yt = X[idx], y[idx]
        else:
            Xt, yt = X, y
        if k >= d:
            sampler = np.arange
        else:
            def sampler(n_features, _rng=rng, _k=k):
                return _rng.choice(n_features, size=_k, replace=False)
        trees.append(dt_fit(Xt, yt, params.tree, n_classes=n_classes, feature_sampler=sampler))
    return RandomForest(params, trees, n_classes)
