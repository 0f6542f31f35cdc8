"""Typed tabular data with explicit missing cells.

A dataset is a list of records whose last column is a two-valued decision.
Feature columns are categorical, integer or real. Cells that were missing in
the source file hold the :data:`MISSING` sentinel.
"""
from __future__ import annotations

import csv
import enum
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Sequence

import numpy as np

KINDS = ("categorical", "integer", "real", "decision")
NOMINAL_KINDS = ("categorical", "integer")


class _Missing(enum.Enum):
    MISSING = "MISSING"

    def __repr__(self):
        return "MISSING"


MISSING = _Missing.MISSING


class SchemaError(ValueError):
    pass


class DataError(ValueError):
    pass


@dataclass(frozen=True)
class AttributeSchema:
    name: str
    kind: str
    missing_marker: str = "?"

    def __post_init__(self):
        if not self.name:
            raise SchemaError("attribute name must be nonempty")
        if self.kind not in KINDS:
            raise SchemaError(
                f"unknown kind {self.kind!r} for {self.name!r}; allowed kinds: {', '.join(KINDS)}"
            )

    @property
    def nominal(self) -> bool:
        return self.kind in NOMINAL_KINDS


def validate_schema(schema: Sequence[AttributeSchema]) -> tuple[AttributeSchema, ...]:
    schema = tuple(schema)
    names = [a.name for a in schema]
    dupes = sorted(n for n, c in Counter(names).items() if c > 1)
    if dupes:
        raise SchemaError(f"duplicate attribute names: {', '.join(dupes)}")
    decisions = [a.name for a in schema if a.kind == "decision"]
    if not decisions:
        raise SchemaError("no decision column declared")
    if len(decisions) > 1:
        raise SchemaError(f"multiple decision columns: {', '.join(decisions)}")
    if schema[-1].kind != "decision":
        raise SchemaError(f"decision column {decisions[0]!r} must be the last column")
    if len(schema) < 2:
        raise SchemaError("schema needs at least one feature column")
    return schema


def load_schema(path) -> tuple[AttributeSchema, ...]:
    """Parse a schema file: ``name kind [missing_marker]`` per line, ``#`` comments."""
    attrs = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) not in (2, 3):
            raise SchemaError(f"line {lineno}: expected 'name kind [marker]', got {raw!r}")
        try:
            attrs.append(AttributeSchema(*tokens))
        except SchemaError as exc:
            raise SchemaError(f"line {lineno}: {exc}") from None
    return validate_schema(attrs)


def write_schema(schema: Sequence[AttributeSchema], path) -> None:
    lines = []
    for a in schema:
        tokens = [a.name, a.kind]
        if a.missing_marker != "?":
            tokens.append(a.missing_marker)
        lines.append(" ".join(tokens))
    Path(path).write_text("\n".join(lines) + "\n")


def _parse_cell(text: str, attr: AttributeSchema, row: int):
    if text == attr.missing_marker:
        if attr.kind == "decision":
            raise DataError(f"row {row}: missing value in decision column {attr.name!r}")
        return MISSING
    if attr.kind in ("categorical", "decision"):
        return text
    try:
        if attr.kind == "integer":
            return int(text)
        value = float(text)
    except ValueError:
        raise DataError(
            f"row {row}: column {attr.name!r} expects {attr.kind}, got {text!r}"
        ) from None
    if not math.isfinite(value):
        raise DataError(f"row {row}: column {attr.name!r} has non-finite value {text!r}")
    return value


@dataclass(frozen=True)
class ColumnStats:
    column: int
    skewness: float
    mean: float
    counts: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Dataset:
    """Immutable m x n table; ``rows[i][-1]`` is the decision label."""

    schema: tuple[AttributeSchema, ...]
    rows: tuple[tuple, ...]
    # row subsets (CV folds) may hold a single class; loaded data never does
    partial: bool = field(default=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "schema", validate_schema(self.schema))
        object.__setattr__(self, "rows", tuple(tuple(r) for r in self.rows))
        n = len(self.schema)
        for i, row in enumerate(self.rows, start=1):
            if len(row) != n:
                raise DataError(f"row {i}: expected {n} fields, got {len(row)}")
            for cell, attr in zip(row, self.schema):
                if not _cell_ok(cell, attr):
                    raise DataError(f"row {i}: cell {cell!r} does not match {attr.kind} column {attr.name!r}")
        if len(self.rows) < 2:
            raise DataError(f"need at least 2 records, got {len(self.rows)}")
        labels = self.labels
        if len(labels) > 2 or (len(labels) < 2 and not self.partial):
            raise DataError(
                f"decision column must hold exactly two labels, found {len(labels)}: {list(labels)}"
            )

    @property
    def m(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return len(self.schema)

    @property
    def n_features(self) -> int:
        return len(self.schema) - 1

    @property
    def feature_names(self) -> list[str]:
        return [a.name for a in self.schema[:-1]]

    @cached_property
    def labels(self) -> tuple[str, ...]:
        """Decision labels in order of first appearance."""
        return tuple(dict.fromkeys(r[-1] for r in self.rows))

    @cached_property
    def decision_codes(self) -> np.ndarray:
        index = {lab: c for c, lab in enumerate(self.labels)}
        return np.array([index[r[-1]] for r in self.rows], dtype=np.int64)

    def column(self, l: int) -> list:
        return [r[l] for r in self.rows]

    def observed(self, l: int) -> np.ndarray:
        return np.array([r[l] is not MISSING for r in self.rows], dtype=bool)

    def domain(self, l: int) -> list:
        """Sorted distinct observed values of column ``l``."""
        return sorted({c for c in self.column(l) if c is not MISSING})

    def codes(self, l: int) -> tuple[np.ndarray, list]:
        """Integer codes into :meth:`domain` for column ``l``; -1 marks MISSING."""
        return self._codes[l]

    def reals(self, l: int) -> np.ndarray:
        """Float view of a numeric column with NaN for MISSING."""
        return self._reals[l]

    @cached_property
    def _codes(self) -> dict:
        out = {}
        for l in range(self.n):
            dom = self.domain(l)
            index = {v: c for c, v in enumerate(dom)}
            out[l] = (np.array([index.get(c, -1) for c in self.column(l)], dtype=np.int64), dom)
        return out

    @cached_property
    def _reals(self) -> dict:
        return {
            l: np.array([np.nan if c is MISSING else float(c) for c in self.column(l)])
            for l, a in enumerate(self.schema)
            if a.kind in ("integer", "real")
        }

    def missing_count(self) -> int:
        return sum(c is MISSING for r in self.rows for c in r)

    def missing_cells(self) -> list[tuple[int, int]]:
        return [(i, l) for i, r in enumerate(self.rows) for l, c in enumerate(r) if c is MISSING]

    def with_rows(self, rows) -> "Dataset":
        return Dataset(self.schema, rows)

    def subset_rows(self, idx) -> "Dataset":
        return Dataset(self.schema, [self.rows[i] for i in idx], partial=True)

    def select_features(self, features: Sequence[int]) -> "Dataset":
        keep = list(features) + [self.n - 1]
        return Dataset([self.schema[j] for j in keep], [[r[j] for j in keep] for r in self.rows])


def _cell_ok(cell, attr: AttributeSchema) -> bool:
    if cell is MISSING:
        return attr.kind != "decision"
    if attr.kind in ("categorical", "decision"):
        return isinstance(cell, str)
    if attr.kind == "integer":
        return isinstance(cell, (int, np.integer)) and not isinstance(cell, bool)
    return isinstance(cell, (float, int, np.floating)) and not isinstance(cell, bool)


def load_csv(path, schema: Sequence[AttributeSchema], header: bool = False) -> Dataset:
    schema = validate_schema(schema)
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        if header:
            next(reader, None)
        for rowno, fields in enumerate(reader, start=1):
            if not fields or (len(fields) == 1 and not fields[0].strip()):
                continue
            if len(fields) != len(schema):
                raise DataError(f"row {rowno}: expected {len(schema)} fields, got {len(fields)}")
            rows.append([_parse_cell(f.strip(), a, rowno) for f, a in zip(fields, schema)])
    return Dataset(schema, rows)


def format_cell(cell, attr: AttributeSchema) -> str:
    if cell is MISSING:
        return attr.missing_marker
    if attr.kind == "real":
        return repr(float(cell))
    return str(cell)


def write_csv(dataset: Dataset, path, header: bool = False) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if header:
            writer.writerow(dataset.feature_names + [dataset.schema[-1].name])
        for row in dataset.rows:
            writer.writerow([format_cell(c, a) for c, a in zip(row, dataset.schema)])


def skewness(values) -> float:
    """Population skewness (divisor m); 0 for a constant sample."""
    x = np.asarray(values, dtype=float)
    if x.size == 0:
        raise ValueError("skewness of an empty sample")
    if x.min() == x.max():
        # the float mean of equal values can be off by an ulp; don't let that pick a sign
        return 0.0
    dev = x - x.mean()
    scale = math.sqrt(np.mean(dev**2))
    if scale == 0.0:
        return 0.0
    denom = scale**3
    if denom == 0.0:
        # scale**3 underflows; standardize first
        return float(np.mean((dev / scale) ** 3))
    # raw third moment keeps exact symmetry at exactly 0, which decides the sign branch
    return float(np.mean(dev**3) / denom)


def column_stats(dataset: Dataset, l: int) -> ColumnStats:
    attr = dataset.schema[l]
    values = [c for c in dataset.column(l) if c is not MISSING]
    counts = dict(Counter(values)) if attr.kind in NOMINAL_KINDS + ("decision",) else {}
    if attr.kind in ("integer", "real") and values:
        return ColumnStats(l, skewness(values), float(np.mean(values)), counts)
    return ColumnStats(l, 0.0, math.nan, counts)


def describe(dataset: Dataset) -> list[ColumnStats]:
    return [column_stats(dataset, l) for l in range(dataset.n)]


def generate_synthetic(
    m: int,
    n: int,
    missing_rate: float,
    seed: int,
    separable: bool = False,
    noise: float = 0.15,
) -> Dataset:
    """Random mixed-type dataset with MCAR missingness.

    Column ``f0`` is a categorical copy of the label (flipped with
    probability ``noise`` unless ``separable``). The remaining features cycle
    through integer, real (log-normal, so right-skewed) and categorical, each
    mildly shifted by the label. Exactly ``floor(missing_rate * m * (n-1))``
    feature cells are blanked.
    """
    if not 0 <= missing_rate < 1:
        raise ValueError(f"missing_rate must be in [0, 1), got {missing_rate}")
    if n < 2:
        raise ValueError(f"need n >= 2 columns, got {n}")
    if m < 2:
        raise ValueError(f"need m >= 2 records, got {m}")
    rng = np.random.default_rng(seed)
    y = rng.permutation(np.arange(m) % 2)

    schema = []
    columns = []
    for j in range(n - 1):
        if j == 0:
            flip = np.zeros(m, dtype=bool) if separable else rng.random(m) < noise
            schema.append(AttributeSchema("f0", "categorical"))
            columns.append(["a" if v else "b" for v in (y.astype(bool) ^ flip)])
            continue
        kind = ("integer", "real", "categorical")[(j - 1) % 3]
        schema.append(AttributeSchema(f"f{j}", kind))
        if kind == "integer":
            columns.append([int(v) for v in rng.integers(0, 6, m) + y])
        elif kind == "real":
            vals = rng.lognormal(mean=0.3 * y, sigma=0.6)
            columns.append([float(round(v, 6)) for v in vals])
        else:
            cats = np.array(["u", "v", "w"])
            pick = np.where(rng.random(m) < 0.3, y, rng.integers(0, 3, m))
            columns.append([str(c) for c in cats[pick]])
    schema.append(AttributeSchema("class", "decision"))

    rows = [[columns[j][i] for j in range(n - 1)] + [str(int(y[i]))] for i in range(m)]
    n_missing = math.floor(missing_rate * m * (n - 1))
    if n_missing:
        cells = rng.choice(m * (n - 1), size=n_missing, replace=False)
        for c in cells:
            rows[c // (n - 1)][c % (n - 1)] = MISSING
    return Dataset(schema, rows)
