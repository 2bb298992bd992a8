"""Evaluation of a persisted model against a labeled feature CSV."""

from __future__ import annotations

import os

import joblib
import numpy as np

from .data import read_feature_csv
from .errors import ClassifierError, SchemaError
from .metrics import class_metrics
from .schema import FEATURE_COLUMNS, NEGATIVE_CLASS, POSITIVE_CLASS, POSITIVE_LABEL

_ARTIFACT_KEYS = ("model", "scaler", "classifier", "trees", "folds", "seed", "feature_columns")


def load_model(path: str) -> dict:
    if not os.path.exists(path):
        raise ClassifierError(f"model file {path!r} does not exist; run train first")
    artifact = joblib.load(path)
    if not isinstance(artifact, dict) or any(key not in artifact for key in _ARTIFACT_KEYS):
        raise ClassifierError(f"model file {path!r} is not a persisted classifier artifact")
    if artifact["feature_columns"] != list(FEATURE_COLUMNS):
        raise SchemaError(
            f"model file {path!r} was trained on different feature columns: "
            f"{artifact['feature_columns']}"
        )
    return artifact


def evaluate(artifact: dict, test_csv: str) -> dict:
    table = read_feature_csv(test_csv)
    if table.values.shape[0] == 0:
        raise ClassifierError(f"test CSV {test_csv!r} has no data rows")
    y_true = np.asarray([1 if label == POSITIVE_LABEL else 0 for label in table.labels])
    y_pred = artifact["model"].predict(artifact["scaler"].transform(table.values))
    y_pred = np.asarray(y_pred, dtype=int)

    tp = int(np.sum((y_pred == 1) & (y_true == 1)))
    fp = int(np.sum((y_pred == 1) & (y_true == 0)))
    fn = int(np.sum((y_pred == 0) & (y_true == 1)))
    tn = int(np.sum((y_pred == 0) & (y_true == 0)))

    flags: list[str] = []
    predicted = set(int(v) for v in y_pred)
    if predicted == {1}:
        flags.append(f"model predicted {POSITIVE_CLASS} for every row")
    elif predicted == {0}:
        flags.append(f"model predicted {NEGATIVE_CLASS} for every row")

    positive, pos_flags = class_metrics(tp, fp, fn, POSITIVE_CLASS)
    negative, neg_flags = class_metrics(tn, fn, fp, NEGATIVE_CLASS)
    flags.extend(pos_flags)
    flags.extend(neg_flags)

    return {
        "accuracy": (tp + tn) / len(y_true),
        "rows": len(y_true),
        "classifier": artifact["classifier"],
        "seed": artifact["seed"],
        "classes": {POSITIVE_CLASS: positive, NEGATIVE_CLASS: negative},
        "counts": {
            "true_positive": tp,
            "false_positive": fp,
            "false_negative": fn,
            "true_negative": tn,
        },
        "flags": flags,
    }
