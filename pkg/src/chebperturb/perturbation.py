"""The window-wise perturbation engine.

For each window and attribute: normalize to [0, 1], sort, fit the noisy
synthesis model, regenerate the values, rescale back to the attribute's raw
range, and return each regenerated value to the row that held its rank.
Released blocks are shuffled whole-row so tuple order leaks nothing.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .dataset import Dataset
from .errors import DegenerateWindowError, ValidationError
from .laplace import NoiseSpec, fresh_entropy, noise_stream, sample_laplace, shuffle_stream
from .noisy_fit import AttributeSeries, build_normal_system, solve, synthesize

# The 4x4 system needs at least 4 distinct abscissae.
MIN_MODEL_ROWS = 4
# Below this spread a column is treated as constant and passed through.
RANGE_EPS = 1e-12


@dataclass(frozen=True)
class PerturbationConfig:
    """Knobs of one perturbation run.

    threshold = -1 selects the static single-release path; threshold >= 1 is
    the stream cadence (windows per release). disable_noise is a test hook
    for noiseless oracle checks and is never reachable from the CLI.
    """

    epsilon: float
    window_size: int
    threshold: int = -1
    seed: int | None = None
    class_policy: str | int = "auto"
    disable_noise: bool = False

    def __post_init__(self):
        if not np.isfinite(self.epsilon) or self.epsilon <= 0:
            raise ValidationError(f"privacy budget epsilon must be > 0, got {self.epsilon}")
        if int(self.window_size) != self.window_size or self.window_size < MIN_MODEL_ROWS:
            raise ValidationError(
                f"window size must be an integer >= {MIN_MODEL_ROWS}, got {self.window_size}"
            )
        if self.threshold != -1 and self.threshold < 1:
            raise ValidationError(
                f"threshold must be -1 (static) or >= 1 (stream), got {self.threshold}"
            )
        if self.seed is not None and (int(self.seed) != self.seed or self.seed < 0):
            raise ValidationError(f"seed must be a non-negative integer, got {self.seed}")


@dataclass
class WindowFrame:
    """One window's data, row identities, labels, and raw per-column range."""

    data: np.ndarray
    original_row_ids: np.ndarray
    labels: list[str] | None
    col_min: np.ndarray
    col_max: np.ndarray


def frame_from_rows(data, row_ids, labels=None) -> WindowFrame:
    """Build a frame, capturing the raw min/max before any normalization."""
    data = np.asarray(data, dtype=float)
    return WindowFrame(
        data=data,
        original_row_ids=np.asarray(row_ids, dtype=np.int64),
        labels=labels,
        col_min=data.min(axis=0),
        col_max=data.max(axis=0),
    )


def window_extents(n_rows: int, window_size: int) -> list[tuple[int, int]]:
    """Consecutive [start, end) extents of size window_size over n_rows.

    A trailing remainder smaller than MIN_MODEL_ROWS is folded into the
    preceding window, so every window can support the 4-coefficient fit.
    """
    if n_rows < MIN_MODEL_ROWS:
        raise ValidationError(
            f"dataset has {n_rows} rows; at least {MIN_MODEL_ROWS} are needed to fit the model"
        )
    if window_size < MIN_MODEL_ROWS:
        raise ValidationError(f"window size must be >= {MIN_MODEL_ROWS}, got {window_size}")
    extents = [(s, min(s + window_size, n_rows)) for s in range(0, n_rows, window_size)]
    if len(extents) > 1 and extents[-1][1] - extents[-1][0] < MIN_MODEL_ROWS:
        last = extents.pop()
        prev = extents.pop()
        extents.append((prev[0], last[1]))
    return extents


def partition(dataset: Dataset, window_size: int) -> list[WindowFrame]:
    """Split a dataset into consecutive window frames in original row order."""
    ids = dataset.effective_row_ids()
    frames = []
    for start, end in window_extents(dataset.n_rows, window_size):
        labels = dataset.labels[start:end] if dataset.labels is not None else None
        frames.append(frame_from_rows(dataset.rows[start:end], ids[start:end], labels))
    return frames


@lru_cache(maxsize=64)
def _abscissae(n: int) -> np.ndarray:
    x = np.linspace(0.0, 1.0, n)
    x.flags.writeable = False
    return x


def perturb_attribute(
    column: np.ndarray,
    x: np.ndarray,
    config: PerturbationConfig,
    rng: np.random.Generator,
) -> np.ndarray:
    """Perturb one attribute column, preserving its raw [min, max] envelope.

    The value synthesized for sorted position j lands on the row that held
    rank j, so the column's ordering structure survives the rewrite.
    """
    column = np.asarray(column, dtype=float)
    n = column.size
    raw_min = column.min()
    raw_max = column.max()
    if raw_max - raw_min < RANGE_EPS:
        # Zero spread: min-max normalization is undefined, pass through.
        return column.copy()

    normalized = (column - raw_min) / (raw_max - raw_min)
    order = np.argsort(normalized, kind="stable")
    series = AttributeSeries(x=x, y=normalized[order])

    if config.disable_noise:
        noise = np.zeros(n)
    else:
        noise = sample_laplace(NoiseSpec(config.epsilon), n, rng)
    model = solve(build_normal_system(series, noise), epsilon=config.epsilon)
    synth = synthesize(model, x)

    lo = synth.min()
    span = synth.max() - lo
    if span < RANGE_EPS:
        # Degenerate flat synthesis: park every rank at the window midpoint.
        unit = np.full(n, 0.5)
    else:
        unit = (synth - lo) / span
    rescaled = raw_min + unit * (raw_max - raw_min)

    result = np.empty_like(column)
    result[order] = rescaled
    return result


def perturb_window(
    frame: WindowFrame,
    config: PerturbationConfig,
    entropy: int,
    window_index: int,
) -> WindowFrame:
    """Perturb every attribute of a window with its own noise substream."""
    n = frame.data.shape[0]
    x = _abscissae(n)
    out = np.empty_like(frame.data)
    for j in range(frame.data.shape[1]):
        rng = noise_stream(entropy, window_index, j)
        try:
            out[:, j] = perturb_attribute(frame.data[:, j], x, config, rng)
        except DegenerateWindowError as exc:
            raise DegenerateWindowError(
                f"window {window_index}, attribute {j}: {exc}"
            ) from exc
    return WindowFrame(
        data=out,
        original_row_ids=frame.original_row_ids,
        labels=frame.labels,
        col_min=frame.col_min.copy(),
        col_max=frame.col_max.copy(),
    )


def shuffle_and_release(
    frames: list[WindowFrame],
    rng: np.random.Generator,
    column_names: list[str] | None = None,
    label_name: str | None = None,
) -> Dataset:
    """Concatenate accumulated frames and shuffle whole rows uniformly."""
    if not frames:
        raise ValidationError("nothing accumulated to release")
    rows = np.concatenate([f.data for f in frames], axis=0)
    ids = np.concatenate([f.original_row_ids for f in frames])
    labeled = [f.labels is not None for f in frames]
    if any(labeled) and not all(labeled):
        raise ValidationError("frames mix labeled and unlabeled rows")
    labels = None
    if all(labeled):
        labels = [lab for f in frames for lab in f.labels]
    perm = rng.permutation(rows.shape[0])
    return Dataset(
        rows=rows[perm],
        labels=[labels[i] for i in perm] if labels is not None else None,
        column_names=column_names,
        label_name=label_name,
        row_ids=ids[perm],
    )


def perturb_dataset(dataset: Dataset, config: PerturbationConfig) -> Dataset:
    """Static path: perturb all windows, shuffle once, release one block."""
    if config.threshold != -1:
        raise ValidationError(
            "static perturbation requires threshold=-1; use StreamPerturber for stream mode"
        )
    entropy = config.seed if config.seed is not None else fresh_entropy()
    frames = partition(dataset, config.window_size)
    perturbed = [
        perturb_window(frame, config, entropy, index)
        for index, frame in enumerate(frames)
    ]
    return shuffle_and_release(
        perturbed,
        shuffle_stream(entropy, 0),
        column_names=dataset.column_names,
        label_name=dataset.label_name,
    )
