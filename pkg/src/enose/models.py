"""Uniform fit/predict wrappers and default tuning grids for every family."""

from __future__ import annotations

import numpy as np

from .classifiers.forest import ForestParams, rf_fit
from .classifiers.svm import SvmParams, svm_fit_multiclass
from .classifiers.tree import TreeParams, dt_fit
from .dataset import Dataset
from .errors import ConfigError
from .evaluate import GridSpec
from .neural import MlpSpec, mlp_train, mlp_build, variant_spec

FAMILIES = ("dt", "rf", "svm", "mlp")


class Estimator:
    """Adapter giving every family the same fit(X, y, n_classes) surface."""

    def __init__(self, family: str, params: dict):
        self.family = family
        self.params = dict(params)
        self.model = None

    def fit(self, X: np.ndarray, y: np.ndarray, n_classes: int) -> "Estimator":
        p = self.params
        if self.family == "dt":
            tp = TreeParams(
                max_depth=p.get("max_depth"),
                min_samples_split=p.get("min_samples_split", 2),
                min_samples_leaf=p.get("min_samples_leaf", 1),
            )
            self.model = dt_fit(X, y, tp, n_classes=n_classes)
        elif self.family == "rf":
            fp = ForestParams(
                n_estimators=p.get("n_estimators", 100),
                max_features=p.get("max_features", "sqrt"),
                bootstrap=p.get("bootstrap", True),
                tree=TreeParams(
                    max_depth=p.get("max_depth"),
                    min_samples_split=p.get("min_samples_split", 2),
                    min_samples_leaf=p.get("min_samples_leaf", 1),
                ),
                seed=p.get("seed", 0),
            )
            self.model = rf_fit(X, y, fp, n_classes=n_classes)
        elif self.family == "svm":
            sp = SvmParams(
                kernel=p.get("kernel", "rbf"),
                C=p.get("C", 1.0),
                gamma=p.get("gamma", "scale"),
                tol=p.get("tol", 1e-3),
                max_passes=p.get("max_passes", 200),
            )
            self.model = svm_fit_multiclass(X, y, sp, n_classes=n_classes)
        elif self.family == "mlp":
            spec = p.get("spec")
            if spec is None:
                spec = variant_spec(
                    p.get("variant", "baseline"), X.shape[1], n_classes,
                    epochs=p.get("epochs", 50), seed=p.get("seed", 0),
                )
            ds = Dataset(tuple(f"f{i}" for i in range(X.shape[1])), X,
                         np.asarray(y, dtype=np.int64),
                         tuple(str(i) for i in range(n_classes)))
            self.model = mlp_train(mlp_build(spec), ds)
        else:
            raise ConfigError(f"unknown model family {self.family!r}")
        return self

    @property
    def n_classes(self) -> int:
        return self.model.n_classes

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        return self.model.predict_proba(X)

    def predict(self, X: np.ndarray) -> np.ndarray:
        return self.model.predict(X)


def make_factory(family: str):
    if family not in FAMILIES:
        raise ConfigError(f"unknown model family {family!r}")

    def factory(params: dict) -> Estimator:
        return Estimator(family, params)

    return factory


def default_grid(family: str, scale: str = "default") -> GridSpec:
    """Tuning grids spanning kernel/regularization, depth/leaf, and count/subset axes."""
    if scale == "small":
        grids = {
            "svm": (("kernel", ("rbf",)), ("C", (1.0, 10.0))),
            "dt": (("max_depth", (16, None)), ("min_samples_leaf", (1, 5))),
            "rf": (("n_estimators", (25, 50)), ("max_features", ("sqrt", "all"))),
            "mlp": (("variant", ("baseline",)),),
        }
    else:
        grids = {
            "svm": (("kernel", ("linear", "rbf")), ("C", (0.1, 1.0, 10.0)),
                    ("gamma", ("scale", 0.1, 1.0))),
            "dt": (("max_depth", (8, 16, None)), ("min_samples_leaf", (1, 5, 20))),
            "rf": (("n_estimators", (50, 100, 200)),
                   ("max_features", ("sqrt", "log2", "all"))),
            "mlp": (("variant", ("baseline", "deeper", "wider", "l2", "rmsprop")),),
        }
    if family not in grids:
        raise ConfigError(f"no default grid for family {family!r}")
    return GridSpec(family, grids[family])
