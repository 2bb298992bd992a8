"""Command-line behaviour tests."""

from __future__ import annotations

import csv
import json
import random

import pytest

from hcc_classify.cli import main
from hcc_classify.schema import ALL_COLUMNS, FEATURE_COLUMNS


def write_feature_csv(path, rows, header=ALL_COLUMNS):
    with open(path, "w", encoding="utf-8", newline="") as out:
        writer = csv.writer(out)
        writer.writerow(header)
        writer.writerows(rows)


def gaussian_rows(rng, n, label, mean, prefix, group):
    rows = []
    for i in range(n):
        values = [f"{rng.gauss(mean, 1.0):.6f}" for _ in FEATURE_COLUMNS]
        rows.append([f"{prefix}{i}", group, label, *values])
    return rows


@pytest.fixture
def corpus(tmp_path):
    rng = random.Random(17)
    train_rows = gaussian_rows(rng, 12, "coordinating", 1.5, "p", "h0")
    train_rows += gaussian_rows(rng, 12, "unlabeled", -1.5, "u", "r0")
    test_rows = gaussian_rows(rng, 8, "coordinating", 1.5, "tp", "h1")
    test_rows += gaussian_rows(rng, 8, "unlabeled", -1.5, "tu", "r1")
    train_csv = tmp_path / "train.csv"
    test_csv = tmp_path / "test.csv"
    write_feature_csv(train_csv, train_rows)
    write_feature_csv(test_csv, test_rows)
    return tmp_path, str(train_csv), str(test_csv)


def write_config(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


def train_config(tmp_path, train_csv, **overrides):
    payload = {
        "positive_csv": train_csv,
        "unlabeled_csv": train_csv,
        "classifier": "rf",
        "trees": 15,
        "seed": 2,
        "model": str(tmp_path / "model.joblib"),
        "report": str(tmp_path / "train_report.json"),
    }
    payload.update(overrides)
    return write_config(tmp_path, "train.json", payload)


class TestTrainCommand:
    def test_writes_model_and_report(self, corpus):
        tmp_path, train_csv, _ = corpus
        assert main(["train", "--config", train_config(tmp_path, train_csv)]) == 0
        report = json.loads((tmp_path / "train_report.json").read_text())
        assert report["classifier"] == "rf"
        assert report["seed"] == 2
        assert len(report["cv_accuracy"]) == 2
        assert (tmp_path / "model.joblib").exists()

    def test_report_to_stdout_when_no_path(self, corpus, capsys):
        tmp_path, train_csv, _ = corpus
        config = train_config(tmp_path, train_csv)
        payload = json.loads(open(config).read())
        del payload["report"]
        config = write_config(tmp_path, "train2.json", payload)
        assert main(["train", "--config", config]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["training_accuracy"] >= 0.9

    def test_unknown_key_rejected(self, corpus, capsys):
        tmp_path, train_csv, _ = corpus
        config = train_config(tmp_path, train_csv, learning_rate=0.1)
        assert main(["train", "--config", config]) == 2
        assert "unknown config keys" in capsys.readouterr().err

    def test_missing_required_key_rejected(self, corpus, capsys):
        tmp_path, _, _ = corpus
        config = write_config(tmp_path, "bad.json", {"positive_csv": "x.csv"})
        assert main(["train", "--config", config]) == 2
        assert "unlabeled_csv" in capsys.readouterr().err

    def test_bad_classifier_rejected(self, corpus, capsys):
        tmp_path, train_csv, _ = corpus
        config = train_config(tmp_path, train_csv, classifier="gbm")
        assert main(["train", "--config", config]) == 2
        assert "classifier" in capsys.readouterr().err

    def test_bool_folds_rejected(self, corpus, capsys):
        tmp_path, train_csv, _ = corpus
        config = train_config(tmp_path, train_csv, folds=True)
        assert main(["train", "--config", config]) == 2
        assert "folds" in capsys.readouterr().err

    def test_invalid_json_config_rejected(self, corpus, capsys):
        tmp_path, _, _ = corpus
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        assert main(["train", "--config", str(path)]) == 2
        assert "not valid JSON" in capsys.readouterr().err

    def test_schema_mismatch_is_runtime_error(self, corpus, capsys):
        tmp_path, _, _ = corpus
        rng = random.Random(1)
        bad_csv = tmp_path / "bad.csv"
        header = [name for name in ALL_COLUMNS if name != "url_uses"]
        rows = [
            row[:11] + row[12:]
            for row in gaussian_rows(rng, 4, "coordinating", 1.0, "p", "h0")
        ]
        write_feature_csv(bad_csv, rows, header=header)
        config = train_config(tmp_path, str(bad_csv))
        assert main(["train", "--config", config]) == 1
        assert "url_uses" in capsys.readouterr().err


class TestEvaluateCommand:
    def test_full_loop(self, corpus):
        tmp_path, train_csv, test_csv = corpus
        assert main(["train", "--config", train_config(tmp_path, train_csv)]) == 0
        eval_config = write_config(
            tmp_path,
            "eval.json",
            {
                "model": str(tmp_path / "model.joblib"),
                "test_csv": test_csv,
                "report": str(tmp_path / "eval_report.json"),
            },
        )
        assert main(["evaluate", "--config", eval_config]) == 0
        report = json.loads((tmp_path / "eval_report.json").read_text())
        assert set(report["classes"]) == {"COORDINATING", "NON-COORDINATING"}
        assert report["rows"] == 16
        assert 0.0 <= report["accuracy"] <= 1.0
        for block in report["classes"].values():
            for key in ("precision", "recall", "f1"):
                assert 0.0 <= block[key] <= 1.0

    def test_missing_model_file(self, corpus, capsys):
        tmp_path, _, test_csv = corpus
        config = write_config(
            tmp_path, "eval.json", {"model": str(tmp_path / "nope.joblib"), "test_csv": test_csv}
        )
        assert main(["evaluate", "--config", config]) == 1
        assert "run train first" in capsys.readouterr().err

    def test_single_class_predictions_flagged(self, corpus, capsys):
        tmp_path, train_csv, _ = corpus
        assert main(["train", "--config", train_config(tmp_path, train_csv)]) == 0
        rng = random.Random(23)
        one_sided = gaussian_rows(rng, 6, "coordinating", -1.5, "xp", "h2")
        one_sided += gaussian_rows(rng, 6, "unlabeled", -1.5, "xu", "r2")
        skew_csv = tmp_path / "skew.csv"
        write_feature_csv(skew_csv, one_sided)
        config = write_config(
            tmp_path, "eval.json", {"model": str(tmp_path / "model.joblib"), "test_csv": str(skew_csv)}
        )
        assert main(["evaluate", "--config", config]) == 0
        report = json.loads(capsys.readouterr().out)
        assert any("every row" in flag for flag in report["flags"])
        assert report["accuracy"] == pytest.approx(0.5)

    def test_no_subcommand_is_usage_error(self):
        with pytest.raises(SystemExit) as excinfo:
            main([])
        assert excinfo.value.code == 2
