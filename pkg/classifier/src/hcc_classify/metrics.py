"""Per-class evaluation metrics computed from raw confusion counts."""

from __future__ import annotations


def f1(precision: float, recall: float) -> float:
    """Harmonic mean of precision and recall; 0.0 when both are zero."""
    if not 0.0 <= precision <= 1.0:
        raise ValueError(f"precision must be in [0, 1], got {precision}")
    if not 0.0 <= recall <= 1.0:
        raise ValueError(f"recall must be in [0, 1], got {recall}")
    if precision == 0.0 and recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def class_metrics(tp: int, fp: int, fn: int, class_name: str) -> tuple[dict, list[str]]:
    """Precision, recall, and F1 for one class, with degeneracy flags.

    An empty denominator makes the corresponding metric undefined; it is
    reported as 0.0 and flagged rather than raised, so evaluation of a
    degenerate model still produces a complete report.
    """
    flags: list[str] = []
    if tp + fp == 0:
        precision = 0.0
        flags.append(f"precision undefined for {class_name} (no predicted rows); reported as 0.0")
    else:
        precision = tp / (tp + fp)
    if tp + fn == 0:
        recall = 0.0
        flags.append(f"recall undefined for {class_name} (no true rows); reported as 0.0")
    else:
        recall = tp / (tp + fn)
    if precision == 0.0 and recall == 0.0:
        flags.append(f"F1 undefined for {class_name} (precision and recall both 0); reported as 0.0")
    metrics = {
        "precision": precision,
        "recall": recall,
        "f1": f1(precision, recall),
        "support": tp + fn,
    }
    return metrics, flags
