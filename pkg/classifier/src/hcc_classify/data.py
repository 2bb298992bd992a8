"""Loading and validating feature CSVs."""

from __future__ import annotations

import csv
from typing import NamedTuple

import numpy as np

from .errors import SchemaError
from .schema import ALL_COLUMNS, FEATURE_COLUMNS, POSITIVE_LABEL, UNLABELED_LABEL


class FeatureTable(NamedTuple):
    """One parsed feature CSV: row identity, labels, and the numeric block."""

    account_ids: list[str]
    group_ids: list[str]
    labels: list[str]
    values: np.ndarray


def check_header(header: list[str], path: str) -> None:
    """Raise SchemaError naming the offending columns on any mismatch."""
    expected = list(ALL_COLUMNS)
    if header == expected:
        return
    missing = [name for name in expected if name not in header]
    unexpected = [name for name in header if name not in expected]
    problems = []
    if missing:
        problems.append(f"missing columns {missing}")
    if unexpected:
        problems.append(f"unexpected columns {unexpected}")
    if not problems:
        first = next(i for i, name in enumerate(header) if name != expected[i])
        problems.append(
            f"columns out of order from position {first}: "
            f"expected {expected[first]!r}, got {header[first]!r}"
        )
    raise SchemaError(f"feature CSV {path!r} does not match the schema: " + "; ".join(problems))


def read_feature_csv(path: str) -> FeatureTable:
    account_ids: list[str] = []
    group_ids: list[str] = []
    labels: list[str] = []
    rows: list[list[float]] = []
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"feature CSV {path!r} is empty") from None
        check_header(header, path)
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(ALL_COLUMNS):
                raise SchemaError(
                    f"feature CSV {path!r} line {lineno}: "
                    f"expected {len(ALL_COLUMNS)} fields, got {len(row)}"
                )
            account_ids.append(row[0])
            group_ids.append(row[1])
            labels.append(row[2])
            try:
                rows.append([float(value) for value in row[3:]])
            except ValueError as exc:
                raise SchemaError(f"feature CSV {path!r} line {lineno}: {exc}") from None
    values = np.asarray(rows, dtype=float).reshape(len(rows), len(FEATURE_COLUMNS))
    return FeatureTable(account_ids, group_ids, labels, values)


def load_training_data(positive_csv: str, unlabeled_csv: str) -> tuple[np.ndarray, np.ndarray]:
    """Assemble a training matrix from the two configured CSVs.

    The positive file contributes its rows labeled coordinating, the
    unlabeled file its rows labeled unlabeled, so one exported CSV can
    serve as both inputs. Returns (X, y) with y = 1 for positives.
    """
    positives = read_feature_csv(positive_csv)
    pos_mask = [label == POSITIVE_LABEL for label in positives.labels]
    pos_values = positives.values[np.asarray(pos_mask, dtype=bool)]
    if pos_values.shape[0] == 0:
        raise SchemaError(
            f"feature CSV {positive_csv!r} has no rows labeled {POSITIVE_LABEL!r}"
        )

    unlabeled = read_feature_csv(unlabeled_csv)
    unl_mask = [label == UNLABELED_LABEL for label in unlabeled.labels]
    unl_values = unlabeled.values[np.asarray(unl_mask, dtype=bool)]
    if unl_values.shape[0] == 0:
        raise SchemaError(
            f"feature CSV {unlabeled_csv!r} has no rows labeled {UNLABELED_LABEL!r}"
        )

    X = np.vstack([pos_values, unl_values])
    y = np.concatenate(
        [np.ones(pos_values.shape[0], dtype=int), np.zeros(unl_values.shape[0], dtype=int)]
    )
    return X, y
