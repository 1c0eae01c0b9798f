"""Streaming wrapper: buffer tuples into windows, release every t windows."""

from __future__ import annotations

import numpy as np

from .dataset import Dataset
from .errors import PrivacyFloorError, ValidationError
from .laplace import fresh_entropy, shuffle_stream
from .perturbation import (
    MIN_MODEL_ROWS,
    PerturbationConfig,
    frame_from_rows,
    perturb_window,
    shuffle_and_release,
)


class StreamPerturber:
    """Single-owner stream state: ingest rows, emit releases, drain with flush.

    Each time the buffer reaches window_size rows a window is perturbed and
    accumulated; every `threshold` completed windows the accumulator is
    shuffled and emitted as one released block.
    """

    def __init__(
        self,
        config: PerturbationConfig,
        column_names: list[str] | None = None,
        label_name: str | None = None,
    ):
        if config.threshold < 1:
            raise ValidationError(
                f"stream mode needs threshold >= 1, got {config.threshold}"
            )
        self._config = config
        self._entropy = config.seed if config.seed is not None else fresh_entropy()
        self._column_names = column_names
        self._label_name = label_name
        self._chunks: list[np.ndarray] = []
        self._label_chunks: list[list[str]] = []
        self._buffered = 0
        self._expects_labels: bool | None = None
        self._n_attrs: int | None = None
        self._next_row_id = 0
        self._windows_since_release = 0
        self._accumulator = []
        self._window_index = 0
        self._release_index = 0
        self.rows_ingested = 0
        self.rows_released = 0
        self.rows_refused = 0
        self.windows_processed = 0
        self.releases = 0

    @property
    def buffered_rows(self) -> int:
        return self._buffered

    def ingest(self, rows, labels: list[str] | None = None) -> list[Dataset]:
        """Append rows to the buffer and return any blocks released by them."""
        rows = np.asarray(rows, dtype=float)
        if rows.ndim != 2:
            raise ValidationError(f"ingested rows must form a 2-D matrix, got {rows.ndim}-D")
        if rows.shape[0] == 0:
            return []
        if not np.all(np.isfinite(rows)):
            raise ValidationError("ingested rows contain non-finite values")
        if self._n_attrs is None:
            self._n_attrs = rows.shape[1]
        elif rows.shape[1] != self._n_attrs:
            raise ValidationError(
                f"arity mismatch: stream carries {self._n_attrs} attributes, got {rows.shape[1]}"
            )
        has_labels = labels is not None
        if self._expects_labels is None:
            self._expects_labels = has_labels
        elif has_labels != self._expects_labels:
            raise ValidationError("labels must be supplied consistently across ingest calls")
        if has_labels and len(labels) != rows.shape[0]:
            raise ValidationError(f"{len(labels)} labels for {rows.shape[0]} rows")

        self._chunks.append(rows)
        if has_labels:
            self._label_chunks.append(list(labels))
        self._buffered += rows.shape[0]
        self.rows_ingested += rows.shape[0]

        released = []
        while self._buffered >= self._config.window_size:
            self._perturb_buffered(self._config.window_size)
            self._windows_since_release += 1
            if self._windows_since_release == self._config.threshold:
                released.append(self._release())
        return released

    def flush(self) -> Dataset | None:
        """Drain the stream: perturb any viable remainder, release the rest.

        Fewer than MIN_MODEL_ROWS buffered rows cannot be fitted; they are
        refused outright (never emitted raw), and if nothing else is pending
        the flush fails so the caller knows no release happened.
        """
        if self._buffered >= MIN_MODEL_ROWS:
            self._perturb_buffered(self._buffered)
        elif self._buffered > 0:
            count = self._buffered
            self.rows_refused += count
            self._drop_buffer()
            if not self._accumulator:
                raise PrivacyFloorError(
                    f"only {count} buffered rows and no accumulated windows; "
                    f"at least {MIN_MODEL_ROWS} rows are needed to fit, refusing to release"
                )
        if self._accumulator:
            return self._release()
        return None

    def _perturb_buffered(self, count: int) -> None:
        data, ids, labels = self._take(count)
        frame = frame_from_rows(data, ids, labels)
        self._accumulator.append(
            perturb_window(frame, self._config, self._entropy, self._window_index)
        )
        self._window_index += 1
        self.windows_processed += 1

    def _take(self, count: int):
        data = self._chunks[0] if len(self._chunks) == 1 else np.concatenate(self._chunks)
        taken, rest = data[:count], data[count:]
        self._chunks = [rest] if rest.shape[0] else []
        labels = None
        if self._expects_labels:
            flat = [lab for chunk in self._label_chunks for lab in chunk]
            labels, rest_labels = flat[:count], flat[count:]
            self._label_chunks = [rest_labels] if rest_labels else []
        ids = np.arange(self._next_row_id, self._next_row_id + count, dtype=np.int64)
        self._next_row_id += count
        self._buffered -= count
        return taken, ids, labels

    def _drop_buffer(self) -> None:
        self._chunks = []
        self._label_chunks = []
        self._next_row_id += self._buffered
        self._buffered = 0

    def _release(self) -> Dataset:
        block = shuffle_and_release(
            self._accumulator,
            shuffle_stream(self._entropy, self._release_index),
            column_names=self._column_names,
            label_name=self._label_name,
        )
        self._accumulator = []
        self._windows_since_release = 0
        self._release_index += 1
        self.releases += 1
        self.rows_released += block.n_rows
        return block
