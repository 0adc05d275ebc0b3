"""CART decision tree with the Gini criterion, grown greedily."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import DimensionMismatch, EmptyNode, ShapeMismatch
from .base import predict_from_proba


@dataclass(frozen=True)
class TreeParams:
    max_depth: int | None = None
    min_samples_split: int = 2
    min_samples_leaf: int = 1


@dataclass
class TreeNode:
    counts: np.ndarray                     # per-class sample counts at this node
    feature: int | None = None
    threshold: float | None = None
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None

    @property
    def is_leaf(self) -> bool:
        return self.feature is None


def gini_impurity(counts) -> float:
    """1 - sum_k (n_k/n)^2 for per-class counts at a node."""
    counts = np.asarray(counts, dtype=np.float64)
    total = counts.sum()
    if total <= 0:
        raise EmptyNode("node has no samples")
    p = counts / total
    return float(1.0 - (p * p).sum())


def best_split(
    X: np.ndarray,
    y: np.ndarray,
    n_classes: int,
    feature_indices: np.ndarray,
    min_samples_leaf: int = 1,
) -> tuple[int, float, float] | None:
    """Best (feature, threshold, gini_decrease) over the candidate features.

    Thresholds are midpoints between consecutive distinct sorted values.
    Ties break by (lower feature index, lower threshold).  Returns None when
    no split with positive decrease satisfies the leaf-size constraint.
    """
    n = y.shape[0]
    total_counts = np.bincount(y, minlength=n_classes).astype(np.float64)
    parent_gini = gini_impurity(total_counts)
    best: tuple[int, float, float] | None = None
    for f in np.sort(feature_indices):
        v = X[:, f]
        order = np.argsort(v, kind="stable")
        sv = v[order]
        sy = y[order]
        distinct = np.flatnonzero(sv[:-1] < sv[1:])  # split after position i
        if distinct.size == 0:
            continue
        onehot = np.zeros((n, n_classes), dtype=np.float64)
        onehot[np.arange(n), sy] = 1.0
        cum = np.cumsum(onehot, axis=0)
        left_counts = cum[distinct]                  # counts with value <= threshold
        nl = distinct + 1.0
        nr = n - nl
        ok = (nl >= min_samples_leaf) & (nr >= min_samples_leaf)
        if not ok.any():
            continue
        right_counts = total_counts - left_counts
        gl = 1.0 - ((left_counts / nl[:, None]) ** 2).sum(axis=1)
        gr = 1.0 - ((right_counts / nr[:, None]) ** 2).sum(axis=1)
        decrease = parent_gini - (nl * gl + nr * gr) / n
        decrease = np.where(ok, decrease, -np.inf)
        i = int(np.argmax(decrease))                 # first max = lowest threshold
        if decrease[i] > 1e-15 and (best is None or decrease[i] > best[2] + 1e-15):
            threshold = 0.5 * (sv[distinct[i]] + sv[distinct[i] + 1])
            best = (int(f), float(threshold), float(decrease[i]))
    return best


class DecisionTree:
    """Greedy binary CART tree; leaves store class counts."""

    def __init__(self, params: TreeParams, n_classes: int, n_features: int, root: TreeNode):
        self.params = params
        self.n_classes = n_classes
        self.n_features = n_features
        self.root = root

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.shape[1] != self.n_features:
            raise DimensionMismatch(f"expected {self.n_features} features, got {X.shape[1]}")
        out = np.empty((X.shape[0], self.n_classes))
        # route index blocks down the tree instead of looping per row
        stack = [(self.root, np.arange(X.shape[0]))]
        while stack:
            node, idx = stack.pop()
            if idx.size == 0:
                continue
            if node.is_leaf:
                out[idx] = node.counts / node.counts.sum()
                continue
            mask = X[idx, node.feature] <= node.threshold
            stack.append((node.left, idx[mask]))
            stack.append((node.right, idx[~mask]))
        return out

    def predict(self, X: np.ndarray) -> np.ndarray:
        return predict_from_proba(self.predict_proba(X))

    def depth(self) -> int:
        def walk(node, d):
            if node.is_leaf:
                return d
            return max(walk(node.left, d + 1), walk(node.right, d + 1))
        return walk(self.root, 0)


def _grow(
    X: np.ndarray,
    y: np.ndarray,
    n_classes: int,
    params: TreeParams,
    depth: int,
    feature_sampler,
) -> TreeNode:
    counts = np.bincount(y, minlength=n_classes).astype(np.float64)
    node = TreeNode(counts=counts)
    n = y.shape[0]
    if (
        counts.max() == n  # pure
        or n < params.min_samples_split
        or (params.max_depth is not None and depth >= params.max_depth)
        or n < 2 * params.min_samples_leaf
    ):
        return node
    split = best_split(X, y, n_classes, feature_sampler(X.shape[1]), params.min_samples_leaf)
    if split is None:
        return node
    f, threshold, _ = split
    mask = X[:, f] <= threshold
    node.feature = f
    node.threshold = threshold
    node.left = _grow(X[mask], y[mask], n_classes, params, depth + 1, feature_sampler)
    node.right = _grow(X[~mask], y[~mask], n_classes, params, depth + 1, feature_sampler)
    return node


def dt_fit(
    X: np.ndarray,
    y: np.ndarray,
    params: TreeParams = TreeParams(),
    n_classes: int | None = None,
    feature_sampler=None,
) -> DecisionTree:
    """Fit a CART tree; ``feature_sampler`` enables per-split subsampling."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or X.shape[0] != y.shape[0] or X.shape[0] < 1:
        raise ShapeMismatch(f"X {X.shape} incompatible with y {y.shape}")
    if n_classes is None:
        n_classes = int(y.max()) + 1
    if feature_sampler is None:
        feature_sampler = np.arange
    root = _grow(X, y, n_classes, params, 0, feature_sampler)
    return DecisionTree(params, n_classes, X.shape[1], root)


def dt_predict_proba(model: DecisionTree, X: np.ndarray) -> np.ndarray:
    return model.predict_proba(X)
