"""Wrapper feature selection with binary particle swarm optimization.

Positions are feature masks. Velocities follow the classic binary PSO update
without inertia, v += c1*r1*(L - x) + c2*r2*(G - x), clamped to +-vmax, and
each bit is resampled as 1 with probability sigmoid(v). Fitness defaults to
the stratified cross-validated accuracy of an ADTree on the masked features.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .adtree import DEFAULT_ITERATIONS, score, train_adtree
from .dataset import Dataset
from .eval_stats.folds import stratified_folds


@dataclass(frozen=True)
class SwarmConfig:
    particles: int = 50
    iterations: int = 100
    c1: float = 2.0
    c2: float = 2.0
    vmax: float = 4.0
    seed: int = 0

    def __post_init__(self):
        if self.particles < 1 or self.iterations < 1:
            raise ValueError("particles and iterations must be >= 1")
        if self.c1 < 0 or self.c2 < 0:
            raise ValueError("c1 and c2 must be >= 0")
        if self.vmax <= 0:
            raise ValueError("vmax must be > 0")


@dataclass
class Swarm:
    positions: np.ndarray     # (Z, d) of 0/1
    velocities: np.ndarray    # (Z, d)
    local_best: np.ndarray    # (Z, d)
    local_fitness: np.ndarray  # (Z,)
    global_best: np.ndarray   # (d,)
    global_fitness: float
    iteration: int = 0


@dataclass
class SelectionResult:
    mask: tuple
    fitness: float
    history: list
    evaluations: int
    selected: list = field(default_factory=list)


def sigmoid(v):
    return 1.0 / (1.0 + np.exp(-v))


def particle_rng(seed: int, iteration: int, particle: int) -> np.random.Generator:
    """Independent stream per (run, iteration, particle)."""
    return np.random.default_rng([seed, iteration, particle])


class CachedFitness:
    """Memoizes a mask -> fitness function; counts calls and distinct evaluations."""

    def __init__(self, fn: Callable):
        self.fn = fn
        self.cache = {}
        self.calls = 0

    def __call__(self, mask) -> float:
        key = tuple(int(b) for b in mask)
        self.calls += 1
        if key not in self.cache:
            self.cache[key] = float(self.fn(key))
        return self.cache[key]


def fitness(mask, dataset: Dataset, folds: int = 10, iterations: int = DEFAULT_ITERATIONS, seed: int = 0) -> float:
    """Mean stratified k-fold accuracy of an ADTree on the masked features; 0 for an empty mask."""
    mask = [bool(b) for b in mask]
    if len(mask) != dataset.n_features:
        raise ValueError(f"mask has {len(mask)} bits, dataset has {dataset.n_features} features")
    features = [j for j, b in enumerate(mask) if b]
    if not features:
        return 0.0
    plan = stratified_folds(dataset, folds, seed)
    accs = []
    for train, test in plan:
        tree = train_adtree(dataset.subset_rows(train), iterations, features, labels=dataset.labels)
        rows = [dataset.rows[i] for i in test]
        accs.append(np.mean([score(tree, r).label == r[-1] for r in rows]))
    return float(np.mean(accs))


def adtree_fitness(dataset: Dataset, folds: int = 10, iterations: int = DEFAULT_ITERATIONS, seed: int = 0) -> CachedFitness:
    return CachedFitness(lambda mask: fitness(mask, dataset, folds, iterations, seed))


def init_swarm(n_features: int, config: SwarmConfig, fitness_fn: Callable) -> Swarm:
    z, d = config.particles, n_features
    pos = np.zeros((z, d), dtype=np.int8)
    vel = np.zeros((z, d))
    for p in range(z):
        rng = particle_rng(config.seed, 0, p)
        pos[p] = rng.random(d) < 0.5
        vel[p] = rng.uniform(-config.vmax, config.vmax, d)
    fit = np.array([fitness_fn(pos[p]) for p in range(z)])
    g = int(np.argmax(fit))  # first maximum: lowest particle index wins ties
    return Swarm(pos, vel, pos.copy(), fit, pos[g].copy(), float(fit[g]), 0)


def step(swarm: Swarm, config: SwarmConfig, fitness_fn: Callable) -> Swarm:
    """One velocity/position update and best refresh; returns a new Swarm."""
    it = swarm.iteration + 1
    pos = swarm.positions.copy()
    vel = swarm.velocities.copy()
    lbest, lfit = swarm.local_best.copy(), swarm.local_fitness.copy()
    x = pos.astype(float)
    for p in range(len(pos)):
        rng = particle_rng(config.seed, it, p)
        r1, r2, u = rng.random((3, pos.shape[1]))
        vel[p] += config.c1 * r1 * (lbest[p] - x[p]) + config.c2 * r2 * (swarm.global_best - x[p])
        np.clip(vel[p], -config.vmax, config.vmax, out=vel[p])
        pos[p] = u < sigmoid(vel[p])
    gbest, gfit = swarm.global_best.copy(), swarm.global_fitness
    for p in range(len(pos)):
        f = fitness_fn(pos[p])
        if f > lfit[p]:
            lfit[p] = f
            lbest[p] = pos[p]
        if f > gfit:
            gfit = f
            gbest = pos[p].copy()
    return Swarm(pos, vel, lbest, lfit, gbest, float(gfit), it)


def run_selection(
    dataset: Dataset | None,
    config: SwarmConfig = SwarmConfig(),
    fitness_fn: Callable | None = None,
    folds: int = 10,
    adt_iterations: int = DEFAULT_ITERATIONS,
    n_features: int | None = None,
) -> SelectionResult:
    """Run the swarm for ``config.iterations`` generations (the first is initialization).

    Pass ``fitness_fn`` to replace the ADTree wrapper, e.g. with a surrogate;
    then ``dataset`` may be None if ``n_features`` is given.
    """
    if fitness_fn is None:
        fitness_fn = adtree_fitness(dataset, folds, adt_iterations, config.seed)
    elif not isinstance(fitness_fn, CachedFitness):
        fitness_fn = CachedFitness(fitness_fn)
    d = dataset.n_features if dataset is not None else n_features
    if not d:
        raise ValueError("feature count unknown: pass a dataset or n_features")
    swarm = init_swarm(d, config, fitness_fn)
    history = [swarm.global_fitness]
    for _ in range(config.iterations - 1):
        swarm = step(swarm, config, fitness_fn)
        history.append(swarm.global_fitness)
    mask = tuple(int(b) for b in swarm.global_best)
    names = dataset.feature_names if dataset is not None else [f"f{j}" for j in range(d)]
    return SelectionResult(
        mask, swarm.global_fitness, history, fitness_fn.calls, [nm for nm, b in zip(names, mask) if b]
    )

