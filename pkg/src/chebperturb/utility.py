"""Classification-utility measurement with a built-in 1-nearest-neighbor.

The classifier stays deliberately minimal: Euclidean distance on z-scored
attributes, stratified cross-validation with a fixed fold seed, ties broken
by the lower training-row index.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .attacks import standardize
from .dataset import Dataset
from .errors import ValidationError
from .perturbation import PerturbationConfig, perturb_dataset


@dataclass(frozen=True)
class UtilityReport:
    """1-NN accuracy, either a single figure or a parameter sweep."""

    accuracy: float | None
    folds: int
    classifier: str = "1-NN"
    sweep: list[tuple[float, float]] = field(default_factory=list)


def _label_codes(labels: list[str]) -> np.ndarray:
    mapping = {label: code for code, label in enumerate(sorted(set(labels)))}
    return np.array([mapping[label] for label in labels], dtype=np.int64)


def _stratified_folds(codes: np.ndarray, folds: int, rng: np.random.Generator) -> np.ndarray:
    assignment = np.empty(codes.size, dtype=np.int64)
    for code in np.unique(codes):
        members = np.flatnonzero(codes == code)
        if members.size < folds:
            raise ValidationError(
                f"class {code} has {members.size} members; fewer than {folds} folds"
            )
        assignment[rng.permutation(members)] = np.arange(members.size) % folds
    return assignment


def _one_nn(train_z: np.ndarray, test_z: np.ndarray) -> np.ndarray:
    """Index (into train_z) of each test row's nearest neighbor.

    argmin returns the first minimum, so ties resolve to the lower index.
    """
    d2 = (
        (test_z * test_z).sum(axis=1)[:, None]
        + (train_z * train_z).sum(axis=1)[None, :]
        - 2.0 * test_z @ train_z.T
    )
    return d2.argmin(axis=1)


def knn_accuracy(dataset: Dataset, folds: int = 10, rng=None) -> UtilityReport:
    """Pooled 1-NN accuracy over stratified cross-validation folds."""
    if dataset.labels is None:
        raise ValidationError("dataset has no class labels; nothing to classify")
    if folds < 2:
        raise ValidationError(f"need at least 2 folds, got {folds}")
    codes = _label_codes(dataset.labels)
    fold_of = _stratified_folds(codes, folds, np.random.default_rng(rng))
    z = standardize(dataset.rows)

    correct = 0
    for fold in range(folds):
        test = np.flatnonzero(fold_of == fold)
        train = np.flatnonzero(fold_of != fold)
        nearest = _one_nn(z[train], z[test])
        correct += int((codes[train][nearest] == codes[test]).sum())
    return UtilityReport(accuracy=correct / codes.size, folds=folds)


def _sweep(dataset, config, values, seed, folds, apply_value) -> UtilityReport:
    if len(values) == 0:
        raise ValidationError("sweep needs at least one parameter value")
    rng = np.random.default_rng(seed)
    fold_seed = int(rng.integers(2**63))
    entries = []
    for value in values:
        run_seed = int(rng.integers(2**63))
        run_config = apply_value(config, value, run_seed)
        released = perturb_dataset(dataset, run_config)
        accuracy = knn_accuracy(released, folds, fold_seed).accuracy
        entries.append((float(value), accuracy))
    return UtilityReport(accuracy=None, folds=folds, sweep=entries)


def epsilon_sweep(
    dataset: Dataset,
    config: PerturbationConfig,
    epsilons,
    seed=None,
    folds: int = 5,
) -> UtilityReport:
    """Accuracy after perturbing at each privacy budget, fresh seeds per run."""
    return _sweep(
        dataset,
        config,
        epsilons,
        seed,
        folds,
        lambda cfg, value, run_seed: replace(
            cfg, epsilon=float(value), seed=run_seed, threshold=-1
        ),
    )


def window_sweep(
    dataset: Dataset,
    config: PerturbationConfig,
    window_sizes,
    seed=None,
    folds: int = 5,
) -> UtilityReport:
    """Accuracy after perturbing at each window size, epsilon held fixed."""
    return _sweep(
        dataset,
        config,
        window_sizes,
        seed,
        folds,
        lambda cfg, value, run_seed: replace(
            cfg, window_size=int(value), seed=run_seed, threshold=-1
        ),
    )


def spearman_rho(xs, ys) -> float:
    """Spearman rank correlation with average ranks for ties.

    Returns 0.0 when either side has zero rank variance (no trend evidence).
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.size != ys.size or xs.size < 2:
        raise ValidationError("spearman_rho needs two equally long sequences (n >= 2)")
    rx = _average_ranks(xs)
    ry = _average_ranks(ys)
    sx = rx.std()
    sy = ry.std()
    if sx == 0.0 or sy == 0.0:
        return 0.0
    return float(((rx - rx.mean()) * (ry - ry.mean())).mean() / (sx * sy))


def _average_ranks(values: np.ndarray) -> np.ndarray:
    order = np.argsort(values, kind="stable")
    ranks = np.empty(values.size)
    sorted_values = values[order]
    i = 0
    while i < values.size:
        j = i
        while j < values.size and sorted_values[j] == sorted_values[i]:
            j += 1
        ranks[order[i:j]] = 0.5 * (i + j - 1) + 1.0
        i = j
    return ranks
