"""Scaling benchmark for the perturbation engine, IO excluded."""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .errors import ValidationError
from .perturbation import PerturbationConfig, perturb_dataset

THROUGHPUT_TARGET = 10_000  # rows/sec; soft target on desktop-class hardware


def uniform_dataset(rows: int, attrs: int, seed: int = 0) -> Dataset:
    """Synthetic unlabeled dataset of uniform(0, 1) cells."""
    rng = np.random.default_rng(seed)
    return Dataset(rows=rng.random((rows, attrs)))


@dataclass(frozen=True)
class BenchResult:
    rows: int
    attrs: int
    window_size: int
    epsilon: float
    seconds_base: float
    seconds_double: float
    time_ratio: float
    rows_per_sec: float


def _time_once(dataset: Dataset, config: PerturbationConfig) -> float:
    start = time.perf_counter()
    perturb_dataset(dataset, config)
    return time.perf_counter() - start


def run_benchmark(
    rows: int,
    attrs: int,
    window_size: int = 10_000,
    epsilon: float = 1.0,
    repeats: int = 3,
    seed: int = 0,
) -> BenchResult:
    """Time perturbation at `rows` and `2 * rows`; median of `repeats` each.

    The median damps scheduler jitter in both directions, which best-of
    would fold asymmetrically into the ratio.
    """
    if rows < 4 or attrs < 1 or repeats < 1:
        raise ValidationError("benchmark needs rows >= 4, attrs >= 1, repeats >= 1")
    timings = {}
    for size in (rows, 2 * rows):
        dataset = uniform_dataset(size, attrs, seed=seed + size)
        config = PerturbationConfig(
            epsilon=epsilon, window_size=min(window_size, size), seed=seed
        )
        _time_once(dataset, config)  # warm-up: caches, allocator
        timings[size] = statistics.median(
            _time_once(dataset, config) for _ in range(repeats)
        )
    base = timings[rows]
    double = timings[2 * rows]
    return BenchResult(
        rows=rows,
        attrs=attrs,
        window_size=window_size,
        epsilon=epsilon,
        seconds_base=base,
        seconds_double=double,
        time_ratio=double / base,
        rows_per_sec=rows / base,
    )
