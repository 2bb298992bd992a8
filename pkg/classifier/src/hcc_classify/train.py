"""Training: fold-wise standardization, minority upsampling, model fitting."""

from __future__ import annotations

from dataclasses import dataclass

import joblib
import numpy as np
from sklearn.model_selection import StratifiedKFold
from sklearn.preprocessing import StandardScaler

from .data import load_training_data
from .errors import ClassifierError, ConfigError
from .models import MODEL_NAMES, build_model
from .schema import FEATURE_COLUMNS


@dataclass(frozen=True)
class TrainConfig:
    positive_csv: str
    unlabeled_csv: str
    classifier: str = "rf"
    folds: int = 2
    trees: int = 1000
    seed: int = 0
    model_path: str = "model.joblib"

    def __post_init__(self):
        if self.classifier not in MODEL_NAMES:
            raise ConfigError(
                f"classifier must be one of {MODEL_NAMES}, got {self.classifier!r}"
            )
        if self.folds < 2:
            raise ConfigError(f"folds must be >= 2, got {self.folds}")
        if self.trees < 1:
            raise ConfigError(f"trees must be >= 1, got {self.trees}")
        if self.seed < 0:
            raise ConfigError(f"seed must be >= 0, got {self.seed}")


def upsample_to_parity(
    X: np.ndarray, y: np.ndarray, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Balance the classes by re-drawing minority rows with replacement.

    Original rows are kept as-is; duplicates are appended after them, so
    the majority class and the minority originals are untouched.
    """
    counts = {label: int(np.sum(y == label)) for label in (0, 1)}
    if counts[0] == counts[1]:
        return X, y
    minority = 0 if counts[0] < counts[1] else 1
    deficit = abs(counts[0] - counts[1])
    pool = np.flatnonzero(y == minority)
    extra = pool[rng.integers(0, pool.shape[0], size=deficit)]
    return np.vstack([X, X[extra]]), np.concatenate([y, y[extra]])


def _fit_fold(X_train, y_train, config: TrainConfig, rng: np.random.Generator):
    """Scaler and model fitted on one training split only."""
    scaler = StandardScaler().fit(X_train)
    scaled = scaler.transform(X_train)
    balanced_X, balanced_y = upsample_to_parity(scaled, y_train, rng)
    model = build_model(config.classifier, config.trees, config.seed)
    model.fit(balanced_X, balanced_y)
    return scaler, model


def cross_validate(X: np.ndarray, y: np.ndarray, config: TrainConfig) -> list[float]:
    """Held-out accuracy per fold; standardization never sees the held-out rows."""
    splitter = StratifiedKFold(n_splits=config.folds, shuffle=True, random_state=config.seed)
    accuracies: list[float] = []
    try:
        splits = list(splitter.split(X, y))
    except ValueError as exc:
        raise ClassifierError(f"cross-validation split failed: {exc}") from None
    for fold, (train_idx, test_idx) in enumerate(splits):
        rng = np.random.default_rng([config.seed, fold])
        scaler, model = _fit_fold(X[train_idx], y[train_idx], config, rng)
        predictions = model.predict(scaler.transform(X[test_idx]))
        accuracies.append(float(np.mean(predictions == y[test_idx])))
    return accuracies


def train(config: TrainConfig) -> dict:
    """Cross-validate, fit the final model on all rows, persist, report."""
    X, y = load_training_data(config.positive_csv, config.unlabeled_csv)
    cv_accuracy = cross_validate(X, y, config)
    rng = np.random.default_rng([config.seed, config.folds])
    scaler, model = _fit_fold(X, y, config, rng)
    training_accuracy = float(np.mean(model.predict(scaler.transform(X)) == y))
    artifact = {
        "model": model,
        "scaler": scaler,
        "classifier": config.classifier,
        "trees": config.trees,
        "folds": config.folds,
        "seed": config.seed,
        "feature_columns": list(FEATURE_COLUMNS),
    }
    joblib.dump(artifact, config.model_path)
    return {
        "classifier": config.classifier,
        "folds": config.folds,
        "trees": config.trees,
        "seed": config.seed,
        "positives": int(np.sum(y == 1)),
        "unlabeled": int(np.sum(y == 0)),
        "cv_accuracy": cv_accuracy,
        "cv_accuracy_mean": float(np.mean(cv_accuracy)),
        "training_accuracy": training_accuracy,
        "model": config.model_path,
    }
