"""Confusion-matrix metrics and ROC AUC."""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np


@dataclass(frozen=True)
class MetricsReport:
    tp: int
    fp: int
    tn: int
    fn: int
    accuracy: float
    se: float | None
    sp: float | None
    auc: float | None = None

    def with_auc(self, auc: float) -> "MetricsReport":
        return replace(self, auc=auc)

    def render(self) -> str:
        def pct(v):
            return "n/a" if v is None else f"{100 * v:.2f}"

        auc = "n/a" if self.auc is None else f"{self.auc:.4f}"
        return (
            f"accuracy {pct(self.accuracy)}%\n"
            f"SE {pct(self.se)}\n"
            f"SP {pct(self.sp)}\n"
            f"AUC {auc}\n"
            f"TP {self.tp} FP {self.fp} TN {self.tn} FN {self.fn}\n"
        )


def confusion_metrics(actual, predicted, positive) -> MetricsReport:
    actual, predicted = list(actual), list(predicted)
    if len(actual) != len(predicted):
        raise ValueError(f"length mismatch: {len(actual)} actual vs {len(predicted)} predicted")
    if not actual:
        raise ValueError("no cases to score")
    tp = fp = tn = fn = 0
    for a, p in zip(actual, predicted):
        if a == positive:
            tp += p == positive
            fn += p != positive
        else:
            fp += p == positive
            tn += p != positive
    return MetricsReport(
        tp, fp, tn, fn,
        accuracy=(tp + tn) / len(actual),
        se=tp / (tp + fn) if tp + fn else None,
        sp=tn / (tn + fp) if tn + fp else None,
    )


def roc_auc(scores, labels, positive) -> float:
    """Trapezoidal area under the ROC swept from the highest score down.

    Tied scores enter the curve together, which makes the area equal to the
    Mann-Whitney statistic with ties counted as one half.
    """
    s = np.asarray(scores, dtype=float)
    y = np.array([lab == positive for lab in labels])
    if len(s) != len(y):
        raise ValueError("scores and labels differ in length")
    n_pos, n_neg = int(y.sum()), int((~y).sum())
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUC needs both classes present")
    order = np.argsort(-s, kind="mergesort")
    s, y = s[order], y[order]
    # last index of each block of tied scores
    ends = np.r_[np.flatnonzero(np.diff(s) != 0), len(s) - 1]
    tps = np.r_[0, np.cumsum(y)[ends]]
    fps = np.r_[0, np.cumsum(~y)[ends]]
    area = np.sum((fps[1:] - fps[:-1]) * (tps[1:] + tps[:-1])) / 2
    return float(area / (n_pos * n_neg))
