"""Figure rendering for the CLI report paths (written next to CSV output)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def save_sweep_figure(path, param_name: str, entries) -> str:
    """Accuracy-vs-parameter curve for one sweep."""
    values = [v for v, _ in entries]
    accuracies = [a for _, a in entries]
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    ax.plot(values, accuracies, marker="o")
    if param_name == "epsilon" and min(values) > 0 and max(values) / min(values) >= 10:
        ax.set_xscale("log")
    ax.set_xlabel(param_name)
    ax.set_ylabel("1-NN accuracy")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)


def save_resistance_figure(path, report, column_names=None) -> str:
    """Per-attribute resistance bars for the attacks that were run."""
    series = []
    if report.ni is not None:
        series.append(("naive inference", report.ni.per_attribute))
    if report.io is not None:
        series.append(("known I/O", report.io.per_attribute))
    if not series:
        raise ValueError("report holds no attack results to plot")
    n_attrs = len(series[0][1])
    positions = np.arange(n_attrs)
    width = 0.8 / len(series)
    fig, ax = plt.subplots(figsize=(max(5.0, 0.45 * n_attrs + 2.0), 3.4))
    for k, (name, stds) in enumerate(series):
        ax.bar(positions + k * width, stds, width=width, label=name)
    ax.set_xticks(positions + 0.4 - width / 2)
    names = column_names if column_names is not None else [str(j) for j in range(n_attrs)]
    ax.set_xticklabels(names, rotation=45, ha="right", fontsize=7)
    ax.set_ylabel("std of standardized deviation")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)


def save_overlay_figure(path, original_column, perturbed_column, name: str = "attribute") -> str:
    """Sorted original vs sorted perturbed values: shape retention at a glance."""
    original = np.sort(np.asarray(original_column, dtype=float))
    perturbed = np.sort(np.asarray(perturbed_column, dtype=float))
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    ax.plot(original, label="original (sorted)", linewidth=1.2)
    ax.plot(perturbed, label="perturbed (sorted)", linewidth=1.0, alpha=0.8)
    ax.set_xlabel("rank")
    ax.set_ylabel(name)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)


def save_bench_figure(path, result) -> str:
    """Wall time at N and 2N rows; linear scaling shows as a ~2x step."""
    fig, ax = plt.subplots(figsize=(4.2, 3.4))
    sizes = [result.rows, 2 * result.rows]
    times = [result.seconds_base, result.seconds_double]
    ax.plot(sizes, times, marker="o")
    ax.set_xlabel("rows")
    ax.set_ylabel("seconds")
    ax.set_title(f"{result.rows_per_sec:,.0f} rows/sec at N={result.rows:,}", fontsize=9)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)


def ensure_dir(path) -> Path:
    directory = Path(path)
    directory.mkdir(parents=True, exist_ok=True)
    return directory
