"""Evaluation: folds, metrics, Wilcoxon test, pipeline driver (``.pipeline``) and benchmark (``.bench``)."""
from .folds import FoldPlan, stratified_folds
from .metrics import MetricsReport, confusion_metrics, roc_auc
from .wilcoxon import WilcoxonResult, wilcoxon_signed_rank

__all__ = [
    "FoldPlan", "stratified_folds", "MetricsReport", "confusion_metrics", "roc_auc",
    "WilcoxonResult", "wilcoxon_signed_rank",
]
