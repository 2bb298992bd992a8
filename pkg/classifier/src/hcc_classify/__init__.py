"""Positive-unlabeled classification of coordinating-community feature CSVs.

Consumes the feature CSV schema published by the detection pipeline,
trains one of three classifiers on positive versus unlabeled rows, and
reports per-class precision, recall, and F1.
"""

from .data import FeatureTable, load_training_data, read_feature_csv
from .errors import ClassifierError, ConfigError, SchemaError
from .evaluate import evaluate, load_model
from .metrics import class_metrics, f1
from .models import MODEL_NAMES, PuBaggingClassifier, build_model
from .train import TrainConfig, cross_validate, train, upsample_to_parity

__version__ = "0.1.0"

__all__ = [
    "ClassifierError",
    "ConfigError",
    "SchemaError",
    "FeatureTable",
    "load_training_data",
    "read_feature_csv",
    "evaluate",
    "load_model",
    "class_metrics",
    "f1",
    "MODEL_NAMES",
    "PuBaggingClassifier",
    "build_model",
    "TrainConfig",
    "cross_validate",
    "train",
    "upsample_to_parity",
    "__version__",
]
