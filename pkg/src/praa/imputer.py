"""Missing-value imputation over the proximity index.

Neighbors of a record are the other records whose distance scores at or
below the median under a median-absolute-deviation scale. Nominal cells take
the neighbors' mode and real cells an inverse-distance weighted mean.
:func:`knni_impute` is the plain k-nearest-neighbor baseline over the same
distances.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from .dataset import Dataset
from .proximity import IndexContext


@dataclass(frozen=True)
class NeighborSet:
    target: int
    rows: np.ndarray
    distances: np.ndarray


@dataclass(frozen=True)
class AuditEntry:
    row: int
    column: str
    method: str
    value: object
    neighbors: int
    fallback: bool = False


@dataclass
class ImputationReport:
    method: str
    filled: dict = field(default_factory=dict)
    audit: list = field(default_factory=list)

    @property
    def total(self) -> int:
        return sum(self.filled.values())

    def lines(self) -> list[str]:
        out = []
        for e in self.audit:
            note = " (global fallback)" if e.fallback else ""
            out.append(f"{e.row},{e.column},{e.method},{e.value},{e.neighbors}{note}")
        return out

    def write(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("# row,column,method,value,neighbors\n")
            for line in self.lines():
                fh.write(line + "\n")


def _median_and_mad(distances):
    med = np.median(distances)
    return med, np.median(np.abs(distances - med))


def alpha_score(x_k: float, distances) -> float:
    """Robust z-score of one distance: (x - median) / MAD.

    With MAD = 0 the score is 0 at or below the median and 1 above it.
    """
    d = np.asarray(distances, dtype=float)
    if d.size == 0:
        raise ValueError("alpha_score needs at least one distance")
    med, mad = _median_and_mad(d)
    if mad == 0:
        return 0.0 if x_k <= med else 1.0
    return float((x_k - med) / mad)


def alpha_scores(distances) -> np.ndarray:
    d = np.asarray(distances, dtype=float)
    med, mad = _median_and_mad(d)
    if mad == 0:
        return np.where(d <= med, 0.0, 1.0)
    return (d - med) / mad


def select_neighbors(distances, i: int) -> NeighborSet:
    """Rows k != i with alpha(d_ik) <= 0.

    ``distances`` is either the full matrix or row ``i`` of it.
    """
    d = np.asarray(distances, dtype=float)
    if d.ndim == 2:
        d = d[i]
    if d.size < 2:
        raise ValueError("neighbor selection needs at least 2 records")
    others = np.delete(np.arange(d.size), i)
    od = d[others]
    keep = alpha_scores(od) <= 0
    if not keep.any():
        keep = np.zeros_like(keep)
        keep[np.argmin(od)] = True
    return NeighborSet(i, others[keep], od[keep])


def _mode_code(codes, dists, rows):
    """Most frequent code; ties go to the value held by the nearest (then lowest-row) neighbor."""
    counts = np.bincount(codes)
    winners = np.flatnonzero(counts == counts.max())
    if len(winners) == 1:
        return int(winners[0])
    order = np.lexsort((rows, dists))
    for c in codes[order]:
        if c in winners:
            return int(c)


def inverse_distance_weights(dists) -> np.ndarray:
    beta = 1.0 / np.asarray(dists, dtype=float)
    return beta / beta.sum()


def _weighted_real(values, dists):
    zero = dists == 0
    if zero.any():
        return float(np.mean(values[zero]))
    w = inverse_distance_weights(dists)
    # convex combination; clip guards the last-ulp drift outside the neighbor range
    return float(np.clip(np.dot(w, values), values.min(), values.max()))


def _global_fill(dataset, l):
    attr = dataset.schema[l]
    if attr.nominal:
        codes, dom = dataset.codes(l)
        obs = codes[codes >= 0]
        if obs.size == 0:
            raise ValueError(f"column {attr.name!r} has no observed values to impute from")
        return dom[int(np.argmax(np.bincount(obs)))]
    vals = dataset.reals(l)
    vals = vals[~np.isnan(vals)]
    if vals.size == 0:
        raise ValueError(f"column {attr.name!r} has no observed values to impute from")
    return float(np.median(vals))


def _fill_from(dataset, l, rows, dists):
    """Impute column ``l`` from the given neighbor rows; returns (value, contributors, fallback)."""
    attr = dataset.schema[l]
    if attr.nominal:
        codes, dom = dataset.codes(l)
        c = codes[rows]
        ok = c >= 0
        if not ok.any():
            return _global_fill(dataset, l), 0, True
        return dom[_mode_code(c[ok], dists[ok], rows[ok])], int(ok.sum()), False
    vals = dataset.reals(l)[rows]
    ok = ~np.isnan(vals)
    if not ok.any():
        return _global_fill(dataset, l), 0, True
    return _weighted_real(vals[ok], dists[ok]), int(ok.sum()), False


def impute_cell(dataset: Dataset, neighbors: NeighborSet, i: int, l: int):
    """Value for MISSING cell (i, l) from the selected neighbors."""
    value, _, _ = _fill_from(dataset, l, neighbors.rows, neighbors.distances)
    return value


def _rows_needing_imputation(dataset):
    by_row = defaultdict(list)
    for i, l in dataset.missing_cells():
        by_row[i].append(l)
    return by_row


def _apply(dataset, fills, method):
    rows = [list(r) for r in dataset.rows]
    report = ImputationReport(method)
    for (i, l), (value, count, fallback) in sorted(fills.items()):
        if dataset.schema[l].kind == "integer":
            value = int(value)
        rows[i][l] = value
        name = dataset.schema[l].name
        report.filled[name] = report.filled.get(name, 0) + 1
        report.audit.append(AuditEntry(i, name, method, value, count, fallback))
    return dataset.with_rows(rows), report


def impute_dataset(dataset: Dataset, cross_real_sets: str = "paper", ctx: IndexContext | None = None):
    """Fill every MISSING cell; returns ``(completed_dataset, report)``.

    Distances come from one pass over the input as given, so cells filled
    earlier never influence later fills.
    """
    todo = _rows_needing_imputation(dataset)
    if not todo:
        return dataset, ImputationReport("praa")
    ctx = ctx or IndexContext(dataset, cross_real_sets)
    fills = {}
    for i, cols in todo.items():
        nb = select_neighbors(ctx.distances_from(i), i)
        for l in cols:
            fills[i, l] = _fill_from(dataset, l, nb.rows, nb.distances)
    return _apply(dataset, fills, "praa")


def _knn_fill(dataset, l, rows, dists, k):
    attr = dataset.schema[l]
    if attr.nominal:
        ok = dataset.codes(l)[0][rows] >= 0
    else:
        ok = ~np.isnan(dataset.reals(l)[rows])
    rows, dists = rows[ok], dists[ok]
    if rows.size == 0:
        return _global_fill(dataset, l), 0, True
    order = np.lexsort((rows, dists))[:k]
    rows, dists = rows[order], dists[order]
    if attr.nominal:
        codes, dom = dataset.codes(l)
        return dom[_mode_code(codes[rows], dists, rows)], len(rows), False
    return float(np.mean(dataset.reals(l)[rows])), len(rows), False


def knni_impute(dataset: Dataset, k: int, cross_real_sets: str = "paper", ctx: IndexContext | None = None):
    """Baseline: mode / unweighted mean of the k nearest rows observing the column."""
    if not 1 <= k < dataset.m:
        raise ValueError(f"k must satisfy 1 <= k < {dataset.m}, got {k}")
    todo = _rows_needing_imputation(dataset)
    if not todo:
        return dataset, ImputationReport("knni")
    ctx = ctx or IndexContext(dataset, cross_real_sets)
    fills = {}
    for i, cols in todo.items():
        d = ctx.distances_from(i)
        others = np.delete(np.arange(dataset.m), i)
        for l in cols:
            fills[i, l] = _knn_fill(dataset, l, others, d[others], k)
    return _apply(dataset, fills, "knni")

