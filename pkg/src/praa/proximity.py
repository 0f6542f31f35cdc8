"""Class-aware, skew-aware proximity between mixed-type records.

Every feature column contributes a per-pair index in [0, 1]; the record
distance is the Euclidean norm of those indices. Which formula a column uses
depends on its kind (nominal = categorical or integer, versus real) and on
whether the two records share a decision label.

Nominal columns compare occurrence counts of the two values. Real columns
count the values of a class lying on one side of a record's value, the side
being chosen by the sign of that class's skewness. All counts include the
records themselves and ignore MISSING cells. A column where either record
is MISSING contributes 0.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset, skewness

CROSS_REAL_SETS = ("paper", "symmetric")


@dataclass(frozen=True)
class _NominalTable:
    codes: np.ndarray      # (m,) value codes, -1 for MISSING
    own_count: np.ndarray  # (m,) count of the record's value inside its own class
    class_size: np.ndarray  # (2,) observed cells per class


@dataclass(frozen=True)
class _RealTable:
    values: np.ndarray     # (m,) NaN for MISSING
    sorted_by_class: tuple  # two sorted arrays of observed values
    skew: np.ndarray       # (2,)
    tail: np.ndarray       # (2, m) size of the skew-selected side of class c relative to row value
    class_size: np.ndarray  # (2,)


def tail_count(sorted_values: np.ndarray, skew: float, value) -> np.ndarray:
    """Count of values strictly above ``value`` when ``skew >= 0``, else at or below it."""
    below_or_equal = np.searchsorted(sorted_values, value, side="right")
    if skew >= 0:
        return len(sorted_values) - below_or_equal
    return below_or_equal


class IndexContext:
    """Precomputed per-class tables for one dataset.

    Parameters
    ----------
    dataset : Dataset
    cross_real_sets : {"paper", "symmetric"}
        How cross-class real columns build their two counting sets. ``paper``
        draws both from the reference class (the first decision label), with
        that class's skewness. ``symmetric`` draws each record's set from its
        own class.
    """

    def __init__(self, dataset: Dataset, cross_real_sets: str = "paper"):
        if cross_real_sets not in CROSS_REAL_SETS:
            raise ValueError(f"cross_real_sets must be one of {CROSS_REAL_SETS}, got {cross_real_sets!r}")
        self.dataset = dataset
        self.cross_real_sets = cross_real_sets
        self.cls = dataset.decision_codes
        self.tables = [self._build(l) for l in range(dataset.n_features)]

    def _build(self, l):
        ds = self.dataset
        cls = self.cls
        if ds.schema[l].nominal:
            codes, dom = ds.codes(l)
            obs = codes >= 0
            counts = np.zeros((2, max(len(dom), 1)), dtype=np.int64)
            np.add.at(counts, (cls[obs], codes[obs]), 1)
            own = np.where(obs, counts[cls, np.maximum(codes, 0)], 0)
            return _NominalTable(codes, own, counts.sum(axis=1))
        values = ds.reals(l)
        obs = ~np.isnan(values)
        sorted_by_class = tuple(np.sort(values[obs & (cls == c)]) for c in (0, 1))
        skew = np.array([skewness(s) if len(s) else 0.0 for s in sorted_by_class])
        tail = np.zeros((2, len(values)), dtype=np.int64)
        for c in (0, 1):
            tail[c, obs] = tail_count(sorted_by_class[c], skew[c], values[obs])
        sizes = np.array([len(s) for s in sorted_by_class], dtype=np.int64)
        return _RealTable(values, sorted_by_class, skew, tail, sizes)

    @property
    def m(self):
        return self.dataset.m

    def observed(self, l):
        t = self.tables[l]
        if isinstance(t, _NominalTable):
            return t.codes >= 0
        return ~np.isnan(t.values)

    def column_index(self, i: int, l: int) -> np.ndarray:
        """Per-column index between row ``i`` and every row, as an (m,) array."""
        t = self.tables[l]
        cls = self.cls
        ci = cls[i]
        same = cls == ci
        obs = self.observed(l)
        out = np.zeros(self.m)
        if not obs[i]:
            return out
        if isinstance(t, _NominalTable):
            beta = t.own_count[i]
            delta = t.own_count
            with np.errstate(divide="ignore", invalid="ignore"):
                same_val = np.minimum(beta, delta) / t.class_size[ci]
                cross_val = np.maximum(beta, delta) / (beta + delta)
        else:
            tail = t.tail
            same_val = np.minimum(tail[ci, i], tail[ci]) / t.class_size[ci]
            lam = t.class_size.sum()
            if self.cross_real_sets == "paper":
                # counting sets come from the reference class 0 for both records
                cross_val = np.minimum(tail[0, i], tail[0]) / lam
            else:
                cross_val = np.minimum(tail[ci, i], tail[1 - ci]) / lam
        out = np.where(same, same_val, cross_val)
        out[~obs] = 0.0
        out[i] = 0.0
        return out

    def distances_from(self, i: int) -> np.ndarray:
        """Distances from row ``i`` to every row (self distance 0)."""
        acc = np.zeros(self.m)
        for l in range(len(self.tables)):
            acc += self.column_index(i, l) ** 2
        return np.sqrt(acc)

    def describe_column(self, l):
        """Per-class cardinality maps (nominal) or sorted values and skewness (real)."""
        t = self.tables[l]
        if isinstance(t, _NominalTable):
            _, dom = self.dataset.codes(l)
            maps = []
            for c in (0, 1):
                sel = (self.cls == c) & (t.codes >= 0)
                vals, cnt = np.unique(t.codes[sel], return_counts=True)
                maps.append({dom[v]: int(k) for v, k in zip(vals, cnt)})
            return maps
        return [(s.copy(), float(k)) for s, k in zip(t.sorted_by_class, t.skew)]


def _check_pair(ctx, i, k, l, same, nominal):
    if (ctx.cls[i] == ctx.cls[k]) != same:
        raise ValueError(f"rows {i} and {k} {'do not share' if same else 'share'} a decision label")
    if ctx.dataset.schema[l].nominal != nominal:
        raise ValueError(f"column {l} is not {'nominal' if nominal else 'real'}")


def index_same_class_nominal(ctx: IndexContext, i: int, k: int, l: int) -> float:
    _check_pair(ctx, i, k, l, same=True, nominal=True)
    return float(ctx.column_index(i, l)[k])


def index_same_class_real(ctx: IndexContext, i: int, k: int, l: int) -> float:
    _check_pair(ctx, i, k, l, same=True, nominal=False)
    return float(ctx.column_index(i, l)[k])


def index_cross_class_nominal(ctx: IndexContext, i: int, k: int, l: int) -> float:
    _check_pair(ctx, i, k, l, same=False, nominal=True)
    return float(ctx.column_index(i, l)[k])


def index_cross_class_real(ctx: IndexContext, i: int, k: int, l: int) -> float:
    _check_pair(ctx, i, k, l, same=False, nominal=False)
    return float(ctx.column_index(i, l)[k])


def record_distance(ctx: IndexContext, i: int, k: int) -> float:
    return float(ctx.distances_from(i)[k])


def distance_matrix(ctx: IndexContext) -> np.ndarray:
    """Full symmetric m x m distance matrix."""
    return np.vstack([ctx.distances_from(i) for i in range(ctx.m)])


def write_distance_csv(matrix: np.ndarray, path) -> None:
    with open(path, "w") as fh:
        for i, row in enumerate(matrix):
            for k, d in enumerate(row):
                fh.write(f"{i},{k},{d:.12g}\n")
