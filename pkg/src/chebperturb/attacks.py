"""Resistance metrics for an (original, released) dataset pair.

Both metrics work at standardized scale, where the deviation between two
unrelated unit-variance series lands near sqrt(2). Datasets are compared in
the row order given; callers who want the release shuffle undone first can
realign through Dataset.restore_original_order().
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .errors import ValidationError


@dataclass(frozen=True)
class AttackStats:
    """Per-attribute deviation stds with their minimum and average."""

    per_attribute: np.ndarray
    min: float
    avg: float


@dataclass(frozen=True)
class AttackReport:
    """Naive-inference and known-I/O resistance of one dataset pair."""

    ni: AttackStats | None = None
    io: AttackStats | None = None
    known_fraction: float | None = None


def _matrix(data) -> np.ndarray:
    rows = data.rows if isinstance(data, Dataset) else np.asarray(data, dtype=float)
    if rows.ndim != 2:
        raise ValidationError("expected a 2-D matrix of attribute values")
    return rows


def standardize(data) -> np.ndarray:
    """z-score each column (sample std); constant columns map to zeros."""
    rows = _matrix(data)
    mean = rows.mean(axis=0)
    std = rows.std(axis=0, ddof=1) if rows.shape[0] > 1 else np.zeros(rows.shape[1])
    out = np.zeros_like(rows)
    live = std > 1e-12
    out[:, live] = (rows[:, live] - mean[live]) / std[live]
    return out


def _stats(deviation: np.ndarray) -> AttackStats:
    stds = deviation.std(axis=0, ddof=1)
    return AttackStats(per_attribute=stds, min=float(stds.min()), avg=float(stds.mean()))


def naive_inference(original, perturbed) -> AttackStats:
    """Std of (standardized original - standardized perturbed), per attribute."""
    orig = _matrix(original)
    pert = _matrix(perturbed)
    if orig.shape != pert.shape:
        raise ValidationError(
            f"shape mismatch: original {orig.shape} vs perturbed {pert.shape}"
        )
    return _stats(standardize(orig) - standardize(pert))


def known_io_attack(
    original,
    perturbed,
    known_fraction: float = 0.10,
    rng=None,
) -> AttackStats:
    """Reconstruction residual of an affine adversary holding some row pairs.

    A least-squares affine map from perturbed to original space is fitted on
    a random known_fraction of row pairs and applied to the remaining rows;
    the result is scored like naive_inference on those rows.
    """
    orig = _matrix(original)
    pert = _matrix(perturbed)
    if orig.shape != pert.shape:
        raise ValidationError(
            f"shape mismatch: original {orig.shape} vs perturbed {pert.shape}"
        )
    if not 0.0 < known_fraction <= 1.0:
        raise ValidationError(f"known fraction must be in (0, 1], got {known_fraction}")
    n_rows, n_attrs = orig.shape
    n_known = int(round(known_fraction * n_rows))
    if n_known < n_attrs + 1:
        raise ValidationError(
            f"known fraction {known_fraction} yields {n_known} pairs; "
            f"the affine map needs at least {n_attrs + 1}"
        )
    rng = np.random.default_rng(rng)
    known = rng.choice(n_rows, size=n_known, replace=False)
    unknown = np.setdiff1d(np.arange(n_rows), known)
    if unknown.size == 0:
        # Everything known: score the reconstruction on the known rows.
        unknown = np.arange(n_rows)

    design_known = np.column_stack([pert[known], np.ones(n_known)])
    coeffs, *_ = np.linalg.lstsq(design_known, orig[known], rcond=None)
    design_unknown = np.column_stack([pert[unknown], np.ones(unknown.size)])
    reconstruction = design_unknown @ coeffs
    return _stats(standardize(orig[unknown]) - standardize(reconstruction))


def evaluate_attacks(
    original,
    perturbed,
    run_ni: bool = True,
    run_io: bool = True,
    known_fraction: float = 0.10,
    rng=None,
) -> AttackReport:
    """Bundle the selected resistance metrics into one report."""
    ni = naive_inference(original, perturbed) if run_ni else None
    io = known_io_attack(original, perturbed, known_fraction, rng) if run_io else None
    return AttackReport(ni=ni, io=io, known_fraction=known_fraction if run_io else None)
