"""In-memory numeric dataset with optional class labels and row identities."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import ValidationError


@dataclass
class Dataset:
    """Row-major numeric matrix plus class labels that travel with their rows.

    row_ids record each row's position in the originally ingested data, so a
    shuffled release can still be mapped back for diagnostics.
    """

    rows: np.ndarray
    labels: list[str] | None = None
    column_names: list[str] | None = None
    label_name: str | None = None
    row_ids: np.ndarray | None = None

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=float)
        if rows.ndim != 2:
            raise ValidationError(f"dataset rows must form a 2-D matrix, got {rows.ndim}-D")
        if not np.all(np.isfinite(rows)):
            raise ValidationError("dataset contains non-finite cells")
        self.rows = rows
        if self.labels is not None and len(self.labels) != rows.shape[0]:
            raise ValidationError(
                f"{len(self.labels)} labels for {rows.shape[0]} rows"
            )
        if self.column_names is not None and len(self.column_names) != rows.shape[1]:
            raise ValidationError(
                f"{len(self.column_names)} column names for {rows.shape[1]} columns"
            )
        if self.row_ids is not None:
            ids = np.asarray(self.row_ids, dtype=np.int64)
            if ids.shape != (rows.shape[0],):
                raise ValidationError("row_ids must match the row count")
            self.row_ids = ids

    @property
    def n_rows(self) -> int:
        return self.rows.shape[0]

    @property
    def n_attrs(self) -> int:
        return self.rows.shape[1]

    def effective_row_ids(self) -> np.ndarray:
        """row_ids when present, otherwise the identity 0..R-1."""
        if self.row_ids is not None:
            return self.row_ids
        return np.arange(self.n_rows, dtype=np.int64)

    def restore_original_order(self) -> "Dataset":
        """Undo a release shuffle by sorting rows back by their row ids."""
        if self.row_ids is None:
            raise ValidationError("dataset carries no row ids to restore order from")
        order = np.argsort(self.row_ids, kind="stable")
        return replace(
            self,
            rows=self.rows[order],
            labels=[self.labels[i] for i in order] if self.labels is not None else None,
            row_ids=self.row_ids[order],
        )
