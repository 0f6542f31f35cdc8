"""Wall-clock scaling of the imputation pass against dataset size."""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass

import numpy as np
from scipy.stats import linregress

from ..dataset import generate_synthetic
from ..imputer import impute_dataset

log = logging.getLogger(__name__)

MIN_RELIABLE_SECONDS = 1e-3
MAX_REPEATS = 50


@dataclass
class BenchReport:
    sizes: list
    seconds: list
    repeats: list
    slope: float
    intercept: float
    r2: float

    def doubling_ratios(self) -> list:
        """(T(2D) - b) / (T(D) - b) for each size pair that exactly doubles."""
        t = dict(zip(self.sizes, self.seconds))
        return [
            (d, (t[2 * d] - self.intercept) / (t[d] - self.intercept))
            for d in self.sizes
            if 2 * d in t
        ]

    def summary(self) -> str:
        return f"T = a*D + b  a={self.slope:.6g} b={self.intercept:.6g} r2={self.r2:.6g}"

    def write_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("size,median_seconds,repeats\n")
            for d, s, r in zip(self.sizes, self.seconds, self.repeats):
                fh.write(f"{d},{s:.6g},{r}\n")


def _time_once(fn):
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


def bench_scalability(
    sizes,
    seed: int = 0,
    n: int = 6,
    missing_rate: float = 0.1,
    repeats: int = 3,
    full_pipeline: bool = False,
    pipeline_config=None,
) -> BenchReport:
    """Median wall time per size and an ordinary least-squares line through it.

    By default only the imputation pass is timed; ``full_pipeline`` times
    :func:`run_praa_pipeline` instead.
    """
    sizes = [int(s) for s in sizes]
    if len(sizes) < 4:
        raise ValueError(f"need at least 4 sizes, got {len(sizes)}")
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ValueError("sizes must be strictly increasing")
    if repeats < 3:
        raise ValueError("need at least 3 repeats")

    if full_pipeline:
        from .pipeline import PipelineConfig, run_praa_pipeline

        cfg = pipeline_config or PipelineConfig()
        run = lambda ds: run_praa_pipeline(ds, cfg)  # noqa: E731
    else:
        run = impute_dataset

    medians, used = [], []
    for d in sizes:
        ds = generate_synthetic(d, n, missing_rate, seed)
        reps = repeats
        times = [_time_once(lambda: run(ds)) for _ in range(reps)]
        while np.median(times) < MIN_RELIABLE_SECONDS and reps < MAX_REPEATS:
            log.warning("size %d times under %.0e s; adding repeats", d, MIN_RELIABLE_SECONDS)
            times += [_time_once(lambda: run(ds)) for _ in range(reps)]
            reps *= 2
        medians.append(float(np.median(times)))
        used.append(len(times))
    fit = linregress(sizes, medians)
    return BenchReport(sizes, medians, used, float(fit.slope), float(fit.intercept), float(fit.rvalue**2))
