"""Release criteria for the classifier package.

Each test is one criterion and prints one pass/fail line under pytest -v.
"""

from __future__ import annotations

import csv
import json
import random

import pytest

from hcc_classify.cli import main
from hcc_classify.evaluate import evaluate, load_model
from hcc_classify.metrics import f1
from hcc_classify.schema import ALL_COLUMNS, FEATURE_COLUMNS
from hcc_classify.train import TrainConfig, train

SEED = 20260817


def write_feature_csv(path, rows):
    with open(path, "w", encoding="utf-8", newline="") as out:
        writer = csv.writer(out)
        writer.writerow(ALL_COLUMNS)
        writer.writerows(rows)


def gaussian_rows(rng, n, label, mean, prefix, group):
    rows = []
    for i in range(n):
        values = [f"{rng.gauss(mean, 1.0):.6f}" for _ in FEATURE_COLUMNS]
        rows.append([f"{prefix}{i}", group, label, *values])
    return rows


def two_class_csv(path, rng, n_each, pos_mean, unl_mean, tag):
    rows = gaussian_rows(rng, n_each, "coordinating", pos_mean, f"{tag}p", "h0")
    rows += gaussian_rows(rng, n_each, "unlabeled", unl_mean, f"{tag}u", "r0")
    write_feature_csv(path, rows)
    return str(path)


def test_f1_identity_on_1000_random_pairs(tmp_path):
    rng = random.Random(SEED)
    checked = 0
    for _ in range(1000):
        precision = rng.random()
        recall = rng.random()
        if precision == 0.0 and recall == 0.0:
            continue
        expected = 2.0 * precision * recall / (precision + recall)
        assert abs(f1(precision, recall) - expected) <= 1e-12
        checked += 1
    assert checked >= 999
    for x in (0.0, 0.31, 0.5, 1.0):
        assert abs(f1(x, x) - x) <= 1e-12
    assert abs(f1(1.00, 0.81) - 0.895) <= 0.005


def test_forest_separates_planted_from_background(tmp_path):
    rng = random.Random(SEED)
    train_csv = two_class_csv(tmp_path / "train.csv", rng, 60, 1.5, -1.5, "tr")
    test_csv = two_class_csv(tmp_path / "test.csv", rng, 40, 1.5, -1.5, "te")
    model_path = str(tmp_path / "model.joblib")
    report = train(TrainConfig(train_csv, train_csv, classifier="rf", seed=1, model_path=model_path))
    assert report["cv_accuracy_mean"] >= 0.9
    held_out = evaluate(load_model(model_path), test_csv)
    assert held_out["accuracy"] >= 0.9


def test_identical_distributions_score_near_chance(tmp_path):
    rng = random.Random(SEED)
    train_csv = two_class_csv(tmp_path / "train.csv", rng, 400, 0.0, 0.0, "tr")
    test_csv = two_class_csv(tmp_path / "test.csv", rng, 200, 0.0, 0.0, "te")
    model_path = str(tmp_path / "model.joblib")
    report = train(TrainConfig(train_csv, train_csv, classifier="rf", seed=1, model_path=model_path))
    assert 0.4 <= report["cv_accuracy_mean"] <= 0.6
    held_out = evaluate(load_model(model_path), test_csv)
    assert 0.4 <= held_out["accuracy"] <= 0.6


def test_single_class_predictions_flagged_not_crashed(tmp_path):
    rng = random.Random(SEED)
    train_csv = two_class_csv(tmp_path / "train.csv", rng, 30, 1.5, -1.5, "tr")
    # every test row sits on the unlabeled side, so a sound model puts
    # all of them in one class and the report must say so
    skew_csv = two_class_csv(tmp_path / "skew.csv", rng, 10, -1.5, -1.5, "sk")
    model_path = str(tmp_path / "model.joblib")
    train(TrainConfig(train_csv, train_csv, classifier="rf", trees=200, seed=1, model_path=model_path))
    eval_config = tmp_path / "eval.json"
    report_path = tmp_path / "report.json"
    eval_config.write_text(
        json.dumps({"model": model_path, "test_csv": skew_csv, "report": str(report_path)}),
        encoding="utf-8",
    )
    assert main(["evaluate", "--config", str(eval_config)]) == 0
    report = json.loads(report_path.read_text())
    assert any("predicted NON-COORDINATING for every row" in flag for flag in report["flags"])
    assert any("precision undefined for COORDINATING" in flag for flag in report["flags"])
    assert report["accuracy"] == pytest.approx(0.5)
    assert report["classes"]["COORDINATING"]["recall"] == 0.0
    assert report["classes"]["NON-COORDINATING"]["recall"] == 1.0
