"""Cross-validated model selection and the metric/reporting suite."""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dataset import Dataset, FoldPlan
from .errors import BadSizes, EmptyGrid, EmptyMatrix, LabelOutOfRange
from .preprocess import DROPPED_AMBIENT, VersionSpec, apply_version, drop_columns, fit_scaler
from .reduce import lda_fit, pca_fit


# --- per-fold feature pipeline ------------------------------------------------


class FeaturePipeline:
    """Version projection + z-score scaling, fit on training data only.

    Order: drop ambient columns (V2+), standardize, then reduce (V3/V4).
    """

    def __init__(self, version: str = "V1"):
        self.version = version
        self.scaler = None
        self.reducer = None

    def fit(self, ds: Dataset) -> "FeaturePipeline":
        work = ds if self.version == "V1" else drop_columns(ds, DROPPED_AMBIENT)
        self.scaler = fit_scaler(work.features)
        if self.version in ("V3", "V4"):
            Z = self.scaler.transform(work.features)
            if self.version == "V3":
                self.reducer = pca_fit(Z, Z.shape[1])
            else:
                m = min(ds.n_classes - 1, Z.shape[1])
                self.reducer = lda_fit(Z, ds.labels, m)
        return self

    def transform(self, ds: Dataset) -> Dataset:
        work = ds if self.version == "V1" else drop_columns(ds, DROPPED_AMBIENT)
        Z = self.scaler.transform(work.features)
        if self.reducer is not None:
            scores = self.reducer.transform(Z)
            prefix = "pc" if self.version == "V3" else "ld"
            names = tuple(f"{prefix}{i + 1}" for i in range(scores.shape[1]))
            return work.with_features(names, scores)
        return work.with_features(work.feature_names, Z)

    def version_spec(self) -> VersionSpec:
        dropped = () if self.version == "V1" else DROPPED_AMBIENT
        return VersionSpec(self.version, self.reducer, dropped)


# --- cross-validation and grid search -----------------------------------------


@dataclass
class CvResult:
    accuracies: list[float]
    failures: list[str]

    @property
    def mean(self) -> float:
        return float(np.mean(self.accuracies)) if self.accuracies else float("-inf")

    @property
    def std(self) -> float:
        return float(np.std(self.accuracies)) if self.accuracies else float("nan")


def cross_validate(model_factory, params: dict, ds: Dataset, plan: FoldPlan,
                   version: str = "V1") -> CvResult:
    """Per-fold: refit pipeline and model on train indices, score validation."""
    accs: list[float] = []
    failures: list[str] = []
    for fold_id, (train_idx, val_idx) in enumerate(plan.folds):
        try:
            accs.append(_fit_and_score(model_factory, params, ds, train_idx, val_idx, version))
        except Exception as exc:  # failed fold recorded, not fatal
            failures.append(f"fold {fold_id}: {exc}")
    return CvResult(accs, failures)


def _fit_and_score(model_factory, params, ds, train_idx, val_idx, version) -> float:
    train = ds.subset(train_idx)
    val = ds.subset(val_idx)
    pipe = FeaturePipeline(version).fit(train)
    t = pipe.transform(train)
    v = pipe.transform(val)
    model = model_factory(params)
    model.fit(t.features, t.labels, ds.n_classes)
    return float((model.predict(v.features) == v.labels).mean())


@dataclass(frozen=True)
class GridSpec:
    family: str
    axes: tuple[tuple[str, tuple], ...]  # ordered (name, values); row-major product

    def cells(self) -> list[dict]:
        if not self.axes:
            raise EmptyGrid("grid has no axes")
        names = [a[0] for a in self.axes]
        return [dict(zip(names, combo)) for combo in itertools.product(*(a[1] for a in self.axes))]


@dataclass
class GridCell:
    params: dict
    accuracies: list[float]
    mean: float
    std: float
    failures: list[str]


@dataclass
class GridResult:
    family: str
    cells: list[GridCell]
    best_index: int

    @property
    def best(self) -> GridCell:
        return self.cells[self.best_index]


def grid_search(spec: GridSpec, ds: Dataset, plan: FoldPlan, model_factory,
                version: str = "V1", workers: int = 1) -> GridResult:
    """Evaluate every cell via cross_validate; failed cells score -inf.

    Cells run in a thread pool when workers > 1; results are reduced by cell
    index, so worker count never changes the outcome.
    """
    cell_params = spec.cells()

    def run(params: dict) -> CvResult:
        return cross_validate(model_factory, params, ds, plan, version)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, cell_params))
    else:
        results = [run(p) for p in cell_params]

    cells = [
        GridCell(p, r.accuracies, r.mean if r.accuracies else float("-inf"),
                 r.std, r.failures)
        for p, r in zip(cell_params, results)
    ]
    best = 0
    for i, c in enumerate(cells):
        if c.mean > cells[best].mean:  # strict: earliest cell wins ties
            best = i
    return GridResult(spec.family, cells, best)


# --- metrics ------------------------------------------------------------------


def confusion_matrix(y_true: np.ndarray, y_pred: np.ndarray, n_classes: int) -> np.ndarray:
    y_true = np.asarray(y_true, dtype=np.int64)
    y_pred = np.asarray(y_pred, dtype=np.int64)
    for name, y in (("y_true", y_true), ("y_pred", y_pred)):
        if y.size and (y.min() < 0 or y.max() >= n_classes):
            raise LabelOutOfRange(f"{name} contains labels outside [0, {n_classes})")
    cm = np.zeros((n_classes, n_classes), dtype=np.int64)
    np.add.at(cm, (y_true, y_pred), 1)
    return cm


@dataclass
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int
    degenerate: bool = False  # never-predicted or empty class


@dataclass
class EvalReport:
    confusion: np.ndarray
    per_class: dict[str, ClassMetrics]
    macro: tuple[float, float, float]
    weighted: tuple[float, float, float]
    accuracy: float
    auc: dict | None = None

    def to_dict(self) -> dict:
        out = {
            "accuracy": self.accuracy,
            "confusion": self.confusion.tolist(),
            "per_class": {
                name: {
                    "precision": m.precision,
                    "recall": m.recall,
                    "f1": m.f1,
                    "support": m.support,
                }
                for name, m in self.per_class.items()
            },
            "macro": {"precision": self.macro[0], "recall": self.macro[1], "f1": self.macro[2]},
            "weighted": {"precision": self.weighted[0], "recall": self.weighted[1], "f1": self.weighted[2]},
        }
        if self.auc is not None:
            out["auc"] = {
                "micro": self.auc["micro"],
                "macro": self.auc["macro"],
                "per_class": self.auc["per_class"],
            }
        return out


def f1_score(precision: float, recall: float) -> float:
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def prf_report(confusion: np.ndarray, class_names: list[str] | None = None) -> EvalReport:
    """Precision/recall/F1 per class with macro and support-weighted means."""
    cm = np.asarray(confusion, dtype=np.int64)
    total = int(cm.sum())
    if cm.size == 0 or total == 0:
        raise EmptyMatrix("empty confusion matrix")
    C = cm.shape[0]
    if class_names is None:
        class_names = [str(i) for i in range(C)]
    diag = np.diag(cm).astype(np.float64)
    col = cm.sum(axis=0).astype(np.float64)
    row = cm.sum(axis=1).astype(np.float64)
    per_class: dict[str, ClassMetrics] = {}
    for k in range(C):
        p = diag[k] / col[k] if col[k] > 0 else 0.0
        r = diag[k] / row[k] if row[k] > 0 else 0.0
        per_class[class_names[k]] = ClassMetrics(
            precision=float(p), recall=float(r), f1=f1_score(p, r),
            support=int(row[k]), degenerate=col[k] == 0 or row[k] == 0,
        )
    ms = list(per_class.values())
    macro = tuple(float(np.mean([getattr(m, a) for m in ms])) for a in ("precision", "recall", "f1"))
    w = row / total
    weighted = tuple(float(np.sum(w * [getattr(m, a) for m in ms])) for a in ("precision", "recall", "f1"))
    return EvalReport(cm, per_class, macro, weighted, accuracy=float(diag.sum() / total))


def binary_roc(y_pos: np.ndarray, scores: np.ndarray) -> tuple[np.ndarray, np.ndarray, float]:
    """One-vs-rest ROC points and trapezoidal AUC.

    Thresholds sweep the distinct scores descending, with a sentinel above
    the maximum so the curve starts at (0, 0).
    """
    y_pos = np.asarray(y_pos, dtype=bool)
    scores = np.asarray(scores, dtype=np.float64)
    P = int(y_pos.sum())
    N = int((~y_pos).sum())
    order = np.argsort(-scores, kind="stable")
    ys = y_pos[order]
    ss = scores[order]
    tps = np.cumsum(ys)
    fps = np.cumsum(~ys)
    # keep only the last index of each distinct score block
    last = np.r_[np.flatnonzero(ss[:-1] > ss[1:]), ss.size - 1]
    tpr = np.r_[0.0, tps[last] / P] if P else np.zeros(last.size + 1)
    fpr = np.r_[0.0, fps[last] / N] if N else np.zeros(last.size + 1)
    trapezoid = getattr(np, "trapezoid", np.trapz)
    auc = float(trapezoid(tpr, fpr))
    return fpr, tpr, auc


def roc_auc(y_true: np.ndarray, probas: np.ndarray, class_names: list[str] | None = None) -> dict:
    """Per-class one-vs-rest ROC plus micro- and macro-averaged AUC."""
    y_true = np.asarray(y_true, dtype=np.int64)
    probas = np.asarray(probas, dtype=np.float64)
    C = probas.shape[1]
    if class_names is None:
        class_names = [str(i) for i in range(C)]
    per_class: dict[str, float | None] = {}
    curves: dict[str, tuple[np.ndarray, np.ndarray]] = {}
    defined: list[float] = []
    degenerate: list[str] = []
    for k in range(C):
        pos = y_true == k
        if pos.all() or not pos.any():
            per_class[class_names[k]] = None
            degenerate.append(class_names[k])
            continue
        fpr, tpr, auc = binary_roc(pos, probas[:, k])
        curves[class_names[k]] = (fpr, tpr)
        per_class[class_names[k]] = auc
        defined.append(auc)
    onehot = np.zeros_like(probas, dtype=bool)
    onehot[np.arange(y_true.shape[0]), y_true] = True
    _, _, micro = binary_roc(onehot.ravel(), probas.ravel())
    macro = float(np.mean(defined)) if defined else None
    return {
        "per_class": per_class,
        "curves": curves,
        "micro": micro,
        "macro": macro,
        "degenerate": degenerate,
    }


def evaluate_model(model, X: np.ndarray, y: np.ndarray, class_names: list[str]) -> EvalReport:
    """Full EvalReport (confusion, P/R/F1, ROC/AUC) for a fitted model."""
    proba = model.predict_proba(X)
    y_pred = np.argmax(proba, axis=1)
    cm = confusion_matrix(y, y_pred, len(class_names))
    report = prf_report(cm, class_names)
    report.auc = roc_auc(y, proba, class_names)
    return report


# --- learning curves ----------------------------------------------------------


def stratified_head(indices: np.ndarray, labels: np.ndarray, count: int) -> np.ndarray:
    """First ~count indices, taking a proportional head of every class."""
    frac = count / indices.shape[0]
    parts = []
    for c in np.unique(labels[indices]):
        cls_idx = indices[labels[indices] == c]
        parts.append(cls_idx[: max(1, math.ceil(frac * cls_idx.shape[0]))])
    return np.sort(np.concatenate(parts))


def learning_curve(model_factory, params: dict, ds: Dataset, sizes, plan: FoldPlan,
                   version: str = "V1") -> list[dict]:
    """Mean train/validation accuracy at each training-set size fraction."""
    sizes = list(sizes)
    if not sizes or any(not (0.0 < s <= 1.0) for s in sizes):
        raise BadSizes(f"sizes must lie in (0, 1], got {sizes}")
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise BadSizes(f"sizes must be strictly ascending, got {sizes}")
    rows = []
    for s in sizes:
        train_accs = []
        val_accs = []
        for train_idx, val_idx in plan.folds:
            count = math.ceil(s * train_idx.shape[0])
            sub = stratified_head(train_idx, ds.labels, count)
            train = ds.subset(sub)
            val = ds.subset(val_idx)
            pipe = FeaturePipeline(version).fit(train)
            t = pipe.transform(train)
            v = pipe.transform(val)
            model = model_factory(params)
            model.fit(t.features, t.labels, ds.n_classes)
            train_accs.append(float((model.predict(t.features) == t.labels).mean()))
            val_accs.append(float((model.predict(v.features) == v.labels).mean()))
        rows.append({
            "size": s,
            "train_acc": float(np.mean(train_accs)),
            "val_acc": float(np.mean(val_accs)),
        })
    return rows
