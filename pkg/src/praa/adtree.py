"""Alternating decision trees (Freund & Mason boosting).

A tree is a root prediction plus splitters. Each splitter hangs under an
existing prediction node and owns two new prediction nodes, one for records
satisfying its condition and one for the rest. A record's score is the sum of
the predictions on every path it reaches. The sign picks the label.

Prediction nodes are numbered implicitly: 0 is the root, splitter ``j``
creates node ``2j + 1`` (condition true) and ``2j + 2`` (condition false).
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .dataset import MISSING, Dataset

log = logging.getLogger(__name__)

SMOOTHING = 1.0
DEFAULT_ITERATIONS = 10


@dataclass(frozen=True)
class Condition:
    """``attr = value`` for categorical columns, ``attr < value`` otherwise."""

    column: int
    name: str
    op: str
    value: object

    def holds(self, cell) -> bool:
        if self.op == "=":
            return cell == self.value
        return cell < self.value

    def render(self, satisfied: bool = True) -> str:
        if self.op == "=":
            op = "=" if satisfied else "!="
        else:
            op = "<" if satisfied else ">="
        value = self.value if self.op == "=" else f"{self.value:g}"
        return f"{self.name} {op} {value}"


@dataclass(frozen=True)
class Splitter:
    parent: int
    condition: Condition
    true_value: float
    false_value: float


@dataclass(frozen=True)
class Margin:
    score: float
    label: str


@dataclass
class AdTree:
    root: float
    labels: tuple  # (label for score >= 0, label for score < 0)
    splitters: list = field(default_factory=list)
    iterations: int = 0

    def node_value(self, node: int) -> float:
        if node == 0:
            return self.root
        s = self.splitters[(node - 1) // 2]
        return s.true_value if node % 2 == 1 else s.false_value

    def children(self, node: int) -> list[int]:
        return [j for j, s in enumerate(self.splitters) if s.parent == node]


def prediction_value(w_pos: float, w_neg: float) -> float:
    return 0.5 * math.log((w_pos + SMOOTHING) / (w_neg + SMOOTHING))


def encode_features(dataset: Dataset, columns: Sequence[int]):
    """Numeric matrix for training; categorical cells become domain codes."""
    X = np.empty((dataset.m, len(columns)))
    for j, l in enumerate(columns):
        if dataset.schema[l].kind == "categorical":
            X[:, j] = dataset.codes(l)[0]
        else:
            X[:, j] = dataset.reals(l)
    return X


def _candidate_conditions(dataset, columns, X):
    """Boolean (n_conditions, m) truth table plus the matching Condition objects."""
    conds, table = [], []
    for j, l in enumerate(columns):
        attr = dataset.schema[l]
        x = X[:, j]
        if attr.kind == "categorical":
            codes, dom = dataset.codes(l)
            for c in np.unique(codes[codes >= 0]):
                conds.append(Condition(l, attr.name, "=", dom[c]))
                table.append(x == c)
        else:
            vals = np.unique(x[~np.isnan(x)])
            for t in (vals[:-1] + vals[1:]) / 2:
                conds.append(Condition(l, attr.name, "<", float(t)))
                table.append(x < t)
    if not table:
        return conds, np.zeros((0, dataset.m), dtype=bool)
    return conds, np.array(table)


def train_adtree(
    dataset: Dataset,
    iterations: int = DEFAULT_ITERATIONS,
    features: Sequence[int] | None = None,
    labels: Sequence[str] | None = None,
) -> AdTree:
    """Boost an ADTree on a dataset without MISSING cells.

    ``features`` restricts the candidate columns (default: all features).
    ``labels`` fixes the (positive, negative) mapping; by default the first
    label in the data is positive.
    """
    if iterations < 1:
        raise ValueError(f"iterations must be >= 1, got {iterations}")
    if dataset.missing_count():
        raise ValueError("train_adtree needs a dataset without MISSING cells; impute first")
    labels = tuple(labels) if labels is not None else dataset.labels
    if len(labels) != 2:
        raise ValueError(f"need a (positive, negative) label pair, got {labels}; pass labels=")
    y = np.array([1.0 if r[-1] == labels[0] else -1.0 for r in dataset.rows])
    if set(r[-1] for r in dataset.rows) - set(labels):
        raise ValueError(f"dataset labels {dataset.labels} not covered by {labels}")
    w = np.ones(dataset.m)
    pos = y > 0
    root = prediction_value(w[pos].sum(), w[~pos].sum())
    tree = AdTree(root, labels)
    if pos.all() or not pos.any():
        log.warning("single-class training data: returning root-only tree")
        return tree
    w = w * np.exp(-y * root)

    columns = list(range(dataset.n_features)) if features is None else list(features)
    X = encode_features(dataset, columns)
    conds, table = _candidate_conditions(dataset, columns, X)
    if not conds:
        return tree
    table_f = table.astype(float)
    preconditions = [np.ones(dataset.m, dtype=bool)]

    for _ in range(iterations):
        best = None
        total = w.sum()
        wp, wn = w * pos, w * ~pos
        for node, p in enumerate(preconditions):
            if not p.any():
                continue
            pos_true = table_f[:, p] @ wp[p]
            neg_true = table_f[:, p] @ wn[p]
            pos_false = wp[p].sum() - pos_true
            neg_false = wn[p].sum() - neg_true
            n_true = table[:, p].sum(axis=1)
            splits = (n_true > 0) & (n_true < p.sum())
            if not splits.any():
                continue
            z = 2 * (np.sqrt(pos_true * neg_true) + np.sqrt(np.maximum(pos_false, 0) * np.maximum(neg_false, 0)))
            z += total - w[p].sum()
            z[~splits] = np.inf
            c = int(np.argmin(z))
            if best is None or z[c] < best[0]:
                best = (z[c], node, c, pos_true[c], neg_true[c], pos_false[c], neg_false[c])
        if best is None:
            break
        _, node, c, pt, nt, pf, nf = best
        a_true, a_false = prediction_value(pt, nt), prediction_value(pf, nf)
        tree.splitters.append(Splitter(node, conds[c], a_true, a_false))
        p = preconditions[node]
        in_true, in_false = p & table[c], p & ~table[c]
        preconditions += [in_true, in_false]
        w = w * np.exp(-y * (a_true * in_true + a_false * in_false))
        tree.iterations += 1
    return tree


def score(tree: AdTree, record) -> Margin:
    """Sum of predictions over all reached paths.

    A MISSING cell under a condition stops traversal below that splitter.
    """
    total = tree.root
    stack = [0]
    while stack:
        node = stack.pop()
        for j in tree.children(node):
            s = tree.splitters[j]
            cell = record[s.condition.column]
            if cell is MISSING:
                continue
            if s.condition.holds(cell):
                total += s.true_value
                stack.append(2 * j + 1)
            else:
                total += s.false_value
                stack.append(2 * j + 2)
    return Margin(total, tree.labels[0] if total >= 0 else tree.labels[1])


def score_dataset(tree: AdTree, dataset: Dataset) -> np.ndarray:
    return np.array([score(tree, r).score for r in dataset.rows])


def predict(tree: AdTree, dataset: Dataset) -> list:
    return [score(tree, r).label for r in dataset.rows]


@dataclass(frozen=True)
class Rule:
    conditions: tuple  # of (Condition, satisfied)
    contributions: tuple
    score: float

    def render(self) -> str:
        lhs = " AND ".join(c.render(ok) for c, ok in self.conditions) or "TRUE"
        return f"{lhs} => score {round(self.score, 3):g}"


def extract_rules(tree: AdTree) -> list[Rule]:
    """One rule per root-to-leaf prediction path, score including the root."""
    n_nodes = 1 + 2 * len(tree.splitters)
    parents = set(s.parent for s in tree.splitters)
    rules = []
    for node in range(n_nodes):
        if node in parents:
            continue
        path, contrib = [], []
        cur = node
        while cur != 0:
            j = (cur - 1) // 2
            s = tree.splitters[j]
            path.append((s.condition, cur % 2 == 1))
            contrib.append(tree.node_value(cur))
            cur = s.parent
        path.reverse()
        contrib.reverse()
        rules.append(Rule(tuple(path), tuple(contrib), tree.root + sum(contrib)))
    return rules


def serialize(tree: AdTree) -> str:
    lines = [
        "# adtree v1",
        f"# labels\t{tree.labels[0]}\t{tree.labels[1]}",
        f"# iterations\t{tree.iterations}",
        "# id\tparent\tcolumn\tname\top\tvalue\ttrue_value\tfalse_value",
        f"root\t{tree.root!r}",
    ]
    for j, s in enumerate(tree.splitters):
        c = s.condition
        value = c.value if c.op == "=" else repr(c.value)
        lines.append(
            f"{j}\t{s.parent}\t{c.column}\t{c.name}\t{c.op}\t{value}\t{s.true_value!r}\t{s.false_value!r}"
        )
    return "\n".join(lines) + "\n"


def deserialize(text: str) -> AdTree:
    labels, iterations, root, splitters = None, 0, None, []
    for line in text.splitlines():
        if not line.strip():
            continue
        fields = line.split("\t")
        if line.startswith("# labels"):
            labels = (fields[1], fields[2])
        elif line.startswith("# iterations"):
            iterations = int(fields[1])
        elif line.startswith("#"):
            continue
        elif fields[0] == "root":
            root = float(fields[1])
        else:
            j, parent, column, name, op, value, tv, fv = fields
            if int(j) != len(splitters):
                raise ValueError(f"splitter ids must be consecutive, got {j}")
            if int(parent) > 2 * len(splitters):
                raise ValueError(f"splitter {j} references unknown parent {parent}")
            cond = Condition(int(column), name, op, value if op == "=" else float(value))
            splitters.append(Splitter(int(parent), cond, float(tv), float(fv)))
    if labels is None or root is None:
        raise ValueError("tree text lacks a labels header or root line")
    return AdTree(root, labels, splitters, iterations)
