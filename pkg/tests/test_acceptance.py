"""Acceptance criteria 1-9, each at its stated tolerance.

Every test records one ``criterion N: PASS|FAIL ...`` line; the lines are
printed in the terminal summary. Run alone with

    pytest tests/test_acceptance.py -v
"""
import random
import re
import time

import numpy as np
import pytest

from praa.adtree import AdTree, Condition, Splitter, extract_rules
from praa.dataset import MISSING, generate_synthetic
from praa.eval_stats import roc_auc, wilcoxon_signed_rank
from praa.eval_stats.bench import bench_scalability
from praa.eval_stats.pipeline import PipelineConfig, run_praa_pipeline
from praa.imputer import impute_dataset
from praa.proximity import IndexContext, distance_matrix
from praa.pso_select import SwarmConfig, run_selection

from conftest import ACCEPTANCE_LINES, random_dataset
from oracles import brute_matrix, brute_neighbors, enumerate_wilcoxon_p, mann_whitney_auc


def record(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_1_proximity_oracle():
    t0 = time.perf_counter()
    worst, fixtures = 0.0, 0
    for seed in range(12):
        ds = random_dataset(seed, m=random.Random(seed).randint(5, 12), n_features=4)
        kinds = {a.kind for a in ds.schema[:-1]}
        if len(kinds) < 2:
            continue  # mixed types only
        D = distance_matrix(IndexContext(ds))
        worst = max(worst, float(np.abs(D - np.array(brute_matrix(ds.schema, ds.rows))).max()))
        fixtures += 1
    elapsed = time.perf_counter() - t0
    record(1, fixtures >= 5 and worst <= 1e-12 and elapsed < 1.0,
           f"{fixtures} fixtures, max |D - oracle| = {worst:.2e}, {elapsed:.2f} s")


def test_2_index_bounds_and_symmetry():
    cases, violations = 0, 0
    for seed in range(10_000):
        ds = random_dataset(50_000 + seed)
        ctx = IndexContext(ds)
        cls = ds.decision_codes
        for l in range(ds.n_features):
            I = np.vstack([ctx.column_index(i, l) for i in range(ds.m)])
            bad = ~((I >= 0) & (I <= 1))
            bad |= I != I.T
            bad[np.diag_indices(ds.m)] |= np.diag(I) != 0
            if ds.schema[l].nominal:
                obs = ds.observed(l)
                cross = (cls[:, None] != cls[None, :]) & obs[:, None] & obs[None, :]
                bad |= cross & ~((I >= 0.5) & (I <= 1))
            violations += int(bad.sum())
            cases += I.size
        D = distance_matrix(ctx)
        violations += int((D != D.T).sum())
    record(2, cases >= 10_000 and violations == 0,
           f"{cases} index cases over 10000 datasets, {violations} violations")


def _imputation_violations(ds):
    out, _ = impute_dataset(ds)
    D = brute_matrix(ds.schema, ds.rows)
    bad = 0
    for i, row in enumerate(ds.rows):
        for l, cell in enumerate(row):
            got = out.rows[i][l]
            if cell is not MISSING:
                bad += got != cell
                continue
            observed = [c for c in ds.column(l) if c is not MISSING]
            if got is MISSING:
                bad += 1
            elif ds.schema[l].nominal:
                bad += got not in observed
            else:
                nb = [k for k, _ in brute_neighbors(D[i], i) if ds.rows[k][l] is not MISSING]
                contrib = [ds.rows[k][l] for k in nb] or observed
                bad += not (min(contrib) <= got <= max(contrib))
    return bad


def test_3_imputation_safety():
    rng = random.Random(3)
    checked, filled, bad = 0, 0, 0
    for seed in range(400):
        rate = rng.uniform(0.0, 0.3)
        if seed % 2:
            ds = generate_synthetic(rng.randint(4, 40), rng.randint(3, 7), rate, seed)
        else:
            ds = random_dataset(seed, missing=rate)
        if any(all(c is MISSING for c in ds.column(l)) for l in range(ds.n_features)):
            continue  # nothing to impute from
        bad += _imputation_violations(ds)
        filled += ds.missing_count()
        checked += 1
    record(3, bad == 0 and checked >= 300,
           f"{checked} datasets, {filled} cells filled, {bad} violations")


def test_4_wilcoxon():
    t0 = time.perf_counter()
    rng = np.random.default_rng(4)
    worst = 0.0
    for n in range(1, 13):
        for _ in range(15):
            diffs = [int(d) for d in rng.integers(-6, 7, n) if d] or [1]
            got = wilcoxon_signed_rank([(d, 0) for d in diffs]).p_value
            worst = max(worst, abs(got - enumerate_wilcoxon_p(diffs)))
    fkmi = wilcoxon_signed_rank([(0.95 + 0.005 * j, 0.9) for j in range(7)])
    row = (fkmi.w_plus, fkmi.w_minus, fkmi.statistic)
    elapsed = time.perf_counter() - t0
    record(4, worst <= 1e-12 and row == (28.0, 0.0, 0.0) and elapsed < 10,
           f"max |p - enumeration| = {worst:.1e}, uniform-sign row {row}, {elapsed:.2f} s")


def test_5_auc_oracle():
    rng = random.Random(5)
    worst, fixtures = 0.0, 0
    while fixtures < 500:
        m = rng.randint(2, 50)
        labels = [rng.choice("+-") for _ in range(m)]
        if len(set(labels)) < 2:
            continue
        scores = [rng.randint(0, 8) / 4 for _ in range(m)]
        worst = max(worst, abs(roc_auc(scores, labels, "+") - mann_whitney_auc(scores, labels, "+")))
        fixtures += 1
    perfect = roc_auc([4, 3, 2, 1, 0], "+++--", "+")
    record(5, worst <= 1e-12 and perfect == 1.0,
           f"{fixtures} fixtures, max |AUC - Mann-Whitney| = {worst:.1e}, perfect ranking {perfect}")


def test_6_pso_onemax():
    t0 = time.perf_counter()
    reached, monotone = 0, 0
    for seed in range(30):
        res = run_selection(None, SwarmConfig(particles=20, iterations=50, seed=seed),
                            lambda m: sum(m) / 8, n_features=8)
        reached += res.fitness == 1.0
        monotone += all(b >= a for a, b in zip(res.history, res.history[1:]))
    elapsed = time.perf_counter() - t0
    record(6, reached == 30 and monotone == 30 and elapsed < 5,
           f"{reached}/30 runs optimal, {monotone}/30 monotone, {elapsed:.2f} s")


def test_7_separable_pipeline():
    t0 = time.perf_counter()
    ds = generate_synthetic(200, 6, 0.1, 0, separable=True)
    cfg = PipelineConfig(folds=10, fitness_folds=10, swarm=SwarmConfig(particles=20, iterations=20), seed=0)
    rep = run_praa_pipeline(ds, cfg)
    elapsed = time.perf_counter() - t0
    m = rep.metrics
    record(7, m.accuracy >= 0.99 and m.auc >= 0.99 and rep.selection.mask[0] == 1 and elapsed < 60,
           f"accuracy {m.accuracy:.4f}, AUC {m.auc:.4f}, mask {rep.selection.mask}, {elapsed:.1f} s")


@pytest.mark.slow
def test_8_scalability():
    t0 = time.perf_counter()
    rep = bench_scalability([1000, 2000, 4000, 8000], seed=0, n=6, missing_rate=0.1, repeats=3)
    elapsed = time.perf_counter() - t0
    ratios = ", ".join(f"{r:.2f}" for _, r in rep.doubling_ratios())
    record(8, rep.r2 >= 0.95 and elapsed < 600,
           f"{rep.summary()}; doubling ratios {ratios}; {elapsed:.0f} s")


def test_9_rule_rendering():
    values = [-2.098, -1.348, -2.849, -0.966, -0.43, -0.249]
    conds = [
        (Condition(0, "HYPLTRV", "<", 1.5), False),
        (Condition(0, "HYPLTRV", "<", 4.0), True),
        (Condition(1, "HTTRV", "<", 3.5), False),
        (Condition(2, "CHLST", "<", 166.0), True),
        (Condition(3, "HYPLIP", "=", "1"), True),
        (Condition(4, "MOC", "=", "1"), True),
    ]
    splitters, parent = [], 0
    for j, ((c, ok), a) in enumerate(zip(conds, values)):
        splitters.append(Splitter(parent, c, a if ok else 0.0, 0.0 if ok else a))
        parent = 2 * j + 1 if ok else 2 * j + 2
    tree = AdTree(0.0, ("1", "0"), splitters, len(splitters))
    rule = max(extract_rules(tree), key=lambda r: len(r.conditions))
    text = rule.render()
    shown = float(re.search(r"=> score (\S+)$", text).group(1))
    record(9, len(rule.conditions) == 6 and abs(shown + 7.94) <= 0.005, text)
