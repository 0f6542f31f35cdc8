"""Stratified k-fold partitions."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class FoldPlan:
    k: int
    train: tuple
    test: tuple
    seed: int

    def __iter__(self):
        return iter(zip(self.train, self.test))


def stratified_folds(labels, k: int, seed: int) -> FoldPlan:
    """Shuffle each class and deal its rows round-robin over the k folds.

    ``labels`` is a Dataset or a sequence of labels. Dealing continues where
    the previous class stopped, so fold sizes differ by at most one overall.
    """
    if hasattr(labels, "rows"):
        labels = [r[-1] for r in labels.rows]
    labels = list(labels)
    if k < 2:
        raise ValueError(f"need k >= 2 folds, got {k}")
    rng = np.random.default_rng(seed)
    fold_of = np.empty(len(labels), dtype=np.int64)
    offset = 0
    for lab in dict.fromkeys(labels):
        idx = np.array([i for i, v in enumerate(labels) if v == lab])
        if len(idx) < k:
            raise ValueError(f"class {lab!r} has {len(idx)} records, fewer than k={k} folds")
        idx = rng.permutation(idx)
        fold_of[idx] = (offset + np.arange(len(idx))) % k
        offset = (offset + len(idx)) % k
    everything = np.arange(len(labels))
    test = tuple(tuple(int(i) for i in everything[fold_of == f]) for f in range(k))
    train = tuple(tuple(int(i) for i in everything[fold_of != f]) for f in range(k))
    return FoldPlan(k, train, test, seed)
