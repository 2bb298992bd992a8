"""Command-line interface: train and evaluate, both driven by a JSON config."""

from __future__ import annotations

import argparse
import json
import sys

from .errors import ClassifierError, ConfigError
from .evaluate import evaluate, load_model
from .train import TrainConfig, train

_TRAIN_KEYS = {
    "positive_csv",
    "unlabeled_csv",
    "classifier",
    "folds",
    "trees",
    "seed",
    "model",
    "report",
}
_EVAL_KEYS = {"model", "test_csv", "report"}


def _load_config(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as handle:
            raw = json.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path!r} is not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError(f"config {path!r} must hold a JSON object")
    return raw


def _check_keys(raw: dict, allowed: set, required: tuple) -> None:
    unknown = sorted(set(raw) - allowed)
    if unknown:
        raise ConfigError(f"unknown config keys {unknown}; allowed keys are {sorted(allowed)}")
    missing = [key for key in required if key not in raw]
    if missing:
        raise ConfigError(f"config is missing required keys {missing}")


def _int_field(raw: dict, key: str, default: int) -> int:
    value = raw.get(key, default)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{key} must be an integer, got {value!r}")
    return value


def _emit_report(report: dict, path) -> None:
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)


def cmd_train(args) -> int:
    raw = _load_config(args.config)
    _check_keys(raw, _TRAIN_KEYS, ("positive_csv", "unlabeled_csv"))
    config = TrainConfig(
        positive_csv=raw["positive_csv"],
        unlabeled_csv=raw["unlabeled_csv"],
        classifier=raw.get("classifier", "rf"),
        folds=_int_field(raw, "folds", 2),
        trees=_int_field(raw, "trees", 1000),
        seed=_int_field(raw, "seed", 0),
        model_path=raw.get("model", "model.joblib"),
    )
    _emit_report(train(config), raw.get("report"))
    return 0


def cmd_evaluate(args) -> int:
    raw = _load_config(args.config)
    _check_keys(raw, _EVAL_KEYS, ("model", "test_csv"))
    artifact = load_model(raw["model"])
    _emit_report(evaluate(artifact, raw["test_csv"]), raw.get("report"))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hcc-classify",
        description="Train and evaluate coordinating-community classifiers on feature CSVs.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    train_parser = commands.add_parser("train", help="fit and persist a classifier")
    train_parser.add_argument("--config", required=True, help="JSON config path")
    train_parser.set_defaults(handler=cmd_train)

    eval_parser = commands.add_parser("evaluate", help="score a persisted classifier")
    eval_parser.add_argument("--config", required=True, help="JSON config path")
    eval_parser.set_defaults(handler=cmd_evaluate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ClassifierError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
