"""Linear SVM fusion of single-frame features."""

import logging
import math
from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np

from ..errors import ConfigError, EmptyClass, LayoutError, MissingFeature
from ..features import FeatureLayout, FeatureVector, to_vector
from .training import TrainingSet

logger = logging.getLogger(__name__)

OBJECTIVE_TOLERANCE = 1e-4


@dataclass(frozen=True)
class SvmModel:
    """
    Hyperplane w . x~ - b = 0 over z-scored features x~ = (x - mean) / std.

    `fallback` is the speed-free model used when an observation has no speed yet.
    """

    layout: FeatureLayout
    mean: Tuple[float, ...]
    std: Tuple[float, ...]
    w: Tuple[float, ...]
    b: float
    warnings: Tuple[str, ...] = ()
    objective: Optional[float] = None
    iterations: int = 0
    fallback: Optional["SvmModel"] = None

    kind = "svm"

    def __post_init__(self):
        d = len(self.layout)
        if not (len(self.w) == len(self.mean) == len(self.std) == d):
            raise ConfigError(
                f"SVM has {len(self.w)} weights, {len(self.mean)} means, {len(self.std)} stddevs "
                f"for a {d}-feature layout"
            )
        if any(not s > 0 for s in self.std):
            raise ConfigError("SVM standardization stddevs must be positive")

    def standardize(self, X: np.ndarray) -> np.ndarray:
        return (np.asarray(X, dtype=np.float64) - np.asarray(self.mean)) / np.asarray(self.std)

    def scores(self, X: np.ndarray) -> np.ndarray:
        """F for every row of a matrix in layout order."""
        return self.standardize(X) @ np.asarray(self.w) - self.b

    def decide(self, fv: FeatureVector) -> bool:
        return svm_decide(svm_score(self, fv))

    def scaled(self, c: float) -> "SvmModel":
        """Same hyperplane with (w, b) multiplied by c."""
        return replace(self, w=tuple(c * v for v in self.w), b=c * self.b)


def svm_objective(w: np.ndarray, b: float, X: np.ndarray, y: np.ndarray, lam: float) -> float:
    """
    Regularized hinge loss minimized by `train_svm`.

    J(w, b) = lam / 2 * (|w|^2 + b^2) + mean(max(0, 1 - y (X w - b)))

    Args:
        w: Weights over standardized features
        b: Bias
        X: Standardized samples, one per row
        y: Labels in {+1, -1}
        lam: Regularization strength
    """
    w = np.asarray(w, dtype=np.float64)
    margins = 1.0 - y * (X @ w - b)
    return float(lam / 2.0 * (w @ w + b * b) + np.maximum(margins, 0.0).mean())


def _standardization(X: np.ndarray, layout: FeatureLayout):
    mean = X.mean(axis=0)
    std = X.std(axis=0)
    keep = [i for i in range(len(layout)) if std[i] > 0 and math.isfinite(std[i])]
    warnings = []
    for i in range(len(layout)):
        if i not in keep:
            message = f"feature {layout.names[i]} is constant in training data; dropped"
            logger.warning(message)
            warnings.append(message)
    return keep, mean, std, warnings


def _fit(data: TrainingSet, lam: float, budget: int) -> SvmModel:
    """Dual coordinate descent on the bias-augmented problem, fixed sample order."""
    data = data.complete_rows()
    if len(data.positives) == 0 or len(data.negatives) == 0:
        raise EmptyClass(
            f"training needs both classes with layout {data.layout}: "
            f"{len(data.positives)} positives, {len(data.negatives)} negatives"
        )
    X = np.vstack([data.positives, data.negatives])
    y = np.concatenate([np.ones(len(data.positives)), -np.ones(len(data.negatives))])

    keep, mean, std, warnings = _standardization(X, data.layout)
    layout = FeatureLayout(tuple(data.layout.names[i] for i in keep))
    mean, std = mean[keep], std[keep]
    Xs = (X[:, keep] - mean) / std

    n, d = Xs.shape
    Z = np.hstack([Xs, np.ones((n, 1))])
    q = np.einsum("ij,ij->i", Z, Z)
    upper = 1.0 / (lam * n)
    alpha = np.zeros(n)
    v = np.zeros(d + 1)

    def objective() -> float:
        return svm_objective(v[:d], -v[d], Xs, y, lam)

    previous = math.inf
    current = objective()
    epochs = 0
    for epochs in range(1, budget + 1):
        for i in range(n):
            zi = Z[i]
            gradient = y[i] * (zi @ v) - 1.0
            old = alpha[i]
            new = min(max(old - gradient / q[i], 0.0), upper)
            if new != old:
                v += (new - old) * y[i] * zi
                alpha[i] = new
        previous, current = current, objective()
        if abs(previous - current) <= OBJECTIVE_TOLERANCE * max(abs(current), 1e-12):
            break
    logger.debug("svm converged in %d epochs, objective %.6g", epochs, current)

    return SvmModel(
        layout=layout,
        mean=tuple(float(m) for m in mean),
        std=tuple(float(s) for s in std),
        w=tuple(float(c) for c in v[:d]),
        b=float(-v[d]),
        warnings=tuple(warnings),
        objective=current,
        iterations=epochs,
    )


def train_svm(data: TrainingSet, regularization: float = 1e-3, budget: int = 200) -> SvmModel:
    """
    Fit the maximum-margin hyperplane on standardized features.

    When the layout contains speed, rows without speed are left out of the
    main fit and a speed-free fallback model is trained on every row.

    Args:
        data: Positive and negative feature rows
        regularization: Strength lam of the L2 penalty (> 0)
        budget: Maximum number of passes over the data (> 0)

    Returns:
        Trained model

    Raises:
        EmptyClass: Either class has no usable rows
        ConfigError: Non-positive regularization or budget
    """
    if not regularization > 0:
        raise ConfigError(f"regularization must be positive, got {regularization}")
    if budget <= 0:
        raise ConfigError(f"iteration budget must be positive, got {budget}")
    if len(data.positives) == 0 or len(data.negatives) == 0:
        raise EmptyClass(
            f"{len(data.positives)} positives and {len(data.negatives)} negatives; "
            "both must be non-empty"
        )
    model = _fit(data, regularization, budget)
    if data.layout.has_speed:
        fallback = _fit(data.select(data.layout.speed_free()), regularization, budget)
        model = replace(model, fallback=fallback)
    return model


def svm_score(model: SvmModel, fv: FeatureVector) -> float:
    """
    Fusion result F = w . x~ - b.

    Raises:
        LayoutError: The vector lacks a feature the model needs
    """
    if fv.speed is None and model.layout.has_speed:
        if model.fallback is None:
            raise LayoutError("observation has no speed and the model has no speed-free fallback")
        return svm_score(model.fallback, fv)
    try:
        x = to_vector(fv, model.layout)
    except MissingFeature as e:
        raise LayoutError(str(e)) from e
    return float(model.standardize(x) @ np.asarray(model.w) - model.b)


def svm_decide(F: float) -> bool:
    """Bicycle iff F >= 0 (the boundary counts as bicycle)."""
    return F >= 0.0
