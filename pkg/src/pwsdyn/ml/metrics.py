"""Model evaluation: accuracy, per-class accuracy, per-label mean prediction, confusion."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import EmptyDatasetError

__all__ = ["EvalReport", "evaluate", "report_text", "report_csv_lines"]


@dataclass(frozen=True)
class EvalReport:
    accuracy: float
    per_class_accuracy: dict[int, float]
    per_label_mean_prediction: dict[int, float]
    confusion: np.ndarray  # rows = true class, cols = predicted class
    classes: tuple[int, ...]
    n_rows: int


def evaluate(model, test) -> EvalReport:
    if test.n_rows == 0:
        raise EmptyDatasetError("cannot evaluate on zero rows")
    y = test.labels
    preds = np.asarray(model.predict(test.features), dtype=np.int64)
    accuracy = float(np.mean(preds == y))
    classes = tuple(int(c) for c in np.unique(np.concatenate([y, preds])))
    lookup = {c: i for i, c in enumerate(classes)}
    confusion = np.zeros((len(classes), len(classes)), dtype=np.int64)
    for t, p in zip(y, preds):
        confusion[lookup[int(t)], lookup[int(p)]] += 1
    per_class = {}
    mean_pred = {}
    for c in sorted(set(int(v) for v in y)):
        sel = y == c
        per_class[c] = float(np.mean(preds[sel] == c))
        mean_pred[c] = float(np.mean(preds[sel]))
    return EvalReport(accuracy, per_class, mean_pred, confusion, classes, test.n_rows)


def report_text(report: EvalReport) -> str:
    lines = [f"rows: {report.n_rows}", f"accuracy: {report.accuracy:.6f}"]
    for c, acc in report.per_class_accuracy.items():
        lines.append(f"class {c}: accuracy {acc:.6f}, mean prediction "
                     f"{report.per_label_mean_prediction[c]:.6f}")
    lines.append("confusion (rows true, cols predicted; classes "
                 + " ".join(str(c) for c in report.classes) + "):")
    for row in report.confusion:
        lines.append("  " + " ".join(f"{v:6d}" for v in row))
    return "\n".join(lines) + "\n"


def report_csv_lines(report: EvalReport) -> list[str]:
    """CSV rows: one per true class with accuracy and normalized mean prediction."""
    lines = ["class,support,accuracy,mean_prediction"]
    for c in report.per_class_accuracy:
        i = report.classes.index(c)
        support = int(report.confusion[i].sum())
        lines.append(f"{c},{support},{report.per_class_accuracy[c]:.17g},"
                     f"{report.per_label_mean_prediction[c]:.17g}")
    return lines
