"""Soft-margin kernel SVM trained by pairwise dual coordinate ascent (SMO)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateLabels, DimensionMismatch, ShapeMismatch
from .base import predict_from_proba


@dataclass(frozen=True)
class SvmParams:
    kernel: str = "rbf"          # linear | rbf
    C: float = 1.0
    gamma: float | str = "scale"  # rbf width; "scale" = 1 / (d * var(X))
    tol: float = 1e-3
    max_passes: int = 200


def resolve_gamma(gamma: float | str, X: np.ndarray) -> float:
    if gamma == "scale":
        v = X.var()
        return 1.0 / (X.shape[1] * v) if v > 0 else 1.0
    g = float(gamma)
    if g <= 0:
        raise ValueError(f"gamma must be positive, got {g}")
    return g


def kernel_matrix(params: SvmParams, gamma: float, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    if params.kernel == "linear":
        return A @ B.T
    if params.kernel == "rbf":
        sq = (A * A).sum(axis=1)[:, None] + (B * B).sum(axis=1)[None, :] - 2.0 * (A @ B.T)
        return np.exp(-gamma * np.maximum(sq, 0.0))
    raise ValueError(f"unknown kernel {params.kernel!r}")


class BinarySvm:
    """Binary margin machine: f(x) = sum_i alpha_i y_i K(x_i, x) + b."""

    def __init__(self, params, gamma, sv_x, sv_y, sv_alpha, b, converged, n_passes):
        self.params = params
        self.gamma = gamma
        self.sv_x = sv_x
        self.sv_y = sv_y
        self.sv_alpha = sv_alpha
        self.b = b
        self.converged = converged
        self.n_passes = n_passes

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.shape[1] != self.sv_x.shape[1]:
            raise DimensionMismatch(f"expected {self.sv_x.shape[1]} features, got {X.shape[1]}")
        K = kernel_matrix(self.params, self.gamma, X, self.sv_x)
        return K @ (self.sv_alpha * self.sv_y) + self.b


def dual_objective(K: np.ndarray, y: np.ndarray, alpha: np.ndarray) -> float:
    ay = alpha * y
    return float(alpha.sum() - 0.5 * ay @ K @ ay)


class _Smo:
    """Platt-style SMO working state over a precomputed Gram matrix."""

    def __init__(self, K, y, C, tol):
        self.K = K
        self.y = y.astype(np.float64)
        self.C = C
        self.tol = tol
        self.n = y.shape[0]
        self.alpha = np.zeros(self.n)
        self.b = 0.0
        self.errors = -self.y.copy()  # f(x)=0 initially, E = f - y

    def take_step(self, i: int, j: int) -> bool:
        if i == j:
            return False
        ai, aj = self.alpha[i], self.alpha[j]
        yi, yj = self.y[i], self.y[j]
        Ei, Ej = self.errors[i], self.errors[j]
        if yi != yj:
            L = max(0.0, aj - ai)
            H = min(self.C, self.C + aj - ai)
        else:
            L = max(0.0, ai + aj - self.C)
            H = min(self.C, ai + aj)
        if L >= H:
            return False
        Kii, Kjj, Kij = self.K[i, i], self.K[j, j], self.K[i, j]
        eta = Kii + Kjj - 2.0 * Kij
        if eta > 0:
            aj_new = aj + yj * (Ei - Ej) / eta
            aj_new = min(H, max(L, aj_new))
        else:
            # objective is linear (or flat) along the segment: pick the better endpoint
            s = yi * yj
            f1 = yi * (Ei + self.b) - ai * Kii - s * aj * Kij
            f2 = yj * (Ej + self.b) - s * ai * Kij - aj * Kjj
            L1 = ai + s * (aj - L)
            H1 = ai + s * (aj - H)
            obj_L = L1 * f1 + L * f2 + 0.5 * L1 * L1 * Kii + 0.5 * L * L * Kjj + s * L * L1 * Kij
            obj_H = H1 * f1 + H * f2 + 0.5 * H1 * H1 * Kii + 0.5 * H * H * Kjj + s * H * H1 * Kij
            if obj_L < obj_H - 1e-12:
                aj_new = L
            elif obj_H < obj_L - 1e-12:
                aj_new = H
            else:
                return False
        if abs(aj_new - aj) < 1e-12 * (aj_new + aj + 1e-12):
            return False
        ai_new = ai + yi * yj * (aj - aj_new)

        b1 = self.b - Ei - yi * (ai_new - ai) * Kii - yj * (aj_new - aj) * Kij
        b2 = self.b - Ej - yi * (ai_new - ai) * Kij - yj * (aj_new - aj) * Kjj
        if 0.0 < ai_new < self.C:
            b_new = b1
        elif 0.0 < aj_new < self.C:
            b_new = b2
        else:
            b_new = 0.5 * (b1 + b2)

        self.errors += (
            yi * (ai_new - ai) * self.K[i]
            + yj * (aj_new - aj) * self.K[j]
            + (b_new - self.b)
        )
        self.alpha[i] = ai_new
        self.alpha[j] = aj_new
        self.b = b_new
        return True

    def examine(self, i: int) -> bool:
        yi, ai, Ei = self.y[i], self.alpha[i], self.errors[i]
        r = Ei * yi
        if not ((r < -self.tol and ai < self.C) or (r > self.tol and ai > 0.0)):
            return False
        non_bound = np.flatnonzero((self.alpha > 0.0) & (self.alpha < self.C))
        if non_bound.size > 1:
            j = int(non_bound[np.argmax(np.abs(Ei - self.errors[non_bound]))])
            if self.take_step(i, j):
                return True
        for j in non_bound:
            if self.take_step(i, int(j)):
                return True
        for j in range(self.n):
            if self.take_step(i, j):
                return True
        return False


def svm_fit_binary(X: np.ndarray, y: np.ndarray, params: SvmParams = SvmParams()) -> BinarySvm:
    """Solve the soft-margin dual for labels in {-1, +1} by SMO."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] != y.shape[0]:
        raise ShapeMismatch(f"X {X.shape} incompatible with y {y.shape}")
    if np.unique(y).shape[0] < 2:
        raise DegenerateLabels("both -1 and +1 labels are required")
    gamma = resolve_gamma(params.gamma, X)
    K = kernel_matrix(params, gamma, X, X)
    smo = _Smo(K, y, params.C, params.tol)

    n = X.shape[0]
    passes = 0
    examine_all = True
    converged = False
    while passes < params.max_passes:
        passes += 1
        changed = 0
        if examine_all:
            candidates = range(n)
        else:
            candidates = np.flatnonzero((smo.alpha > 0.0) & (smo.alpha < params.C))
        for i in candidates:
            if smo.examine(int(i)):
                changed += 1
        if examine_all:
            if changed == 0:
                converged = True
                break
            examine_all = False
        elif changed == 0:
            examine_all = True

    mask = smo.alpha > 1e-12
    return BinarySvm(
        params, gamma, X[mask], y[mask], smo.alpha[mask],
        smo.b, converged, passes,
    )


def softmax(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


class MulticlassSvm:
    """One-vs-rest reduction; probabilities via softmax over decision values."""

    def __init__(self, machines: list[BinarySvm], n_classes: int):
        self.machines = machines
        self.n_classes = n_classes

    @property
    def converged(self) -> bool:
        return all(m.converged for m in self.machines)

    def decision_values(self, X: np.ndarray) -> np.ndarray:
        return np.column_stack([m.decision_function(X) for m in self.machines])

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        return softmax(self.decision_values(X))

    def predict(self, X: np.ndarray) -> np.ndarray:
        return predict_from_proba(self.predict_proba(X))


def svm_fit_multiclass(
    X: np.ndarray, y: np.ndarray, params: SvmParams = SvmParams(), n_classes: int | None = None
) -> MulticlassSvm:
    y = np.asarray(y, dtype=np.int64)
    if n_classes is None:
        n_classes = int(y.max()) + 1
    if n_classes < 2:
        raise DegenerateLabels("multiclass SVM needs at least 2 classes")
    machines = []
    for c in range(n_classes):
        yc = np.where(y == c, 1.0, -1.0)
        machines.append(svm_fit_binary(X, yc, params))
    return MulticlassSvm(machines, n_classes)
