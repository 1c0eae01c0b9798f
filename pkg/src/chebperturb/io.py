"""CSV ingestion and emission for numeric datasets with a class column."""

from __future__ import annotations

import csv
import math
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dataset import Dataset
from .errors import CsvFormatError, ValidationError


@dataclass(frozen=True)
class CsvSchema:
    """Dialect and column policy for reading/writing datasets.

    class_policy: "auto" treats a non-numeric final column as class labels,
    "last" forces it, "none" reads all columns as numeric, and an integer
    picks the label column explicitly (0-based).
    precision is the number of significant digits emitted per cell.
    """

    delimiter: str = ","
    has_header: bool = True
    class_policy: str | int = "auto"
    precision: int = 9

    def __post_init__(self):
        if len(self.delimiter) != 1:
            raise ValidationError("delimiter must be a single character")
        if isinstance(self.class_policy, str) and self.class_policy not in ("auto", "last", "none"):
            raise ValidationError(
                f"class policy must be auto, last, none, or a column index, got {self.class_policy!r}"
            )
        if self.precision < 1 or self.precision > 17:
            raise ValidationError(f"precision must be in 1..17, got {self.precision}")


def _parses_as_float(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def _resolve_class_index(policy: str | int, n_cols: int, records, first_line: int) -> int | None:
    if policy == "none":
        return None
    if policy == "last" or isinstance(policy, int):
        index = n_cols - 1 if policy == "last" else policy
        if index < 0 or index >= n_cols:
            raise ValidationError(f"class column index {index} out of range for {n_cols} columns")
        if n_cols == 1:
            raise ValidationError("cannot treat the only column as the class column")
        return index
    # auto: a final column is a class column only when some cell in it does
    # not even parse as a float; inf/nan parse and are rejected later with
    # their row and column named.
    if n_cols >= 2 and any(not _parses_as_float(record[-1]) for _, record in records):
        return n_cols - 1
    return None


def read_csv(source, schema: CsvSchema = CsvSchema()) -> Dataset:
    """Parse a CSV file or text stream into a Dataset, preserving row order."""
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8", newline="") as handle:
            return _read_stream(handle, schema)
    return _read_stream(source, schema)


def _read_stream(stream, schema: CsvSchema) -> Dataset:
    reader = csv.reader(stream, delimiter=schema.delimiter)
    header = None
    records = []
    for record in reader:
        if header is None and schema.has_header:
            header = record
            continue
        if record:
            records.append((reader.line_num, record))
    if not records:
        raise CsvFormatError("no data rows found")

    n_cols = len(records[0][1])
    for line, record in records:
        if len(record) != n_cols:
            raise CsvFormatError(
                f"row {line}: expected {n_cols} fields, found {len(record)}"
            )
    if header is not None and len(header) != n_cols:
        raise CsvFormatError(
            f"header has {len(header)} fields but rows have {n_cols}"
        )

    class_index = _resolve_class_index(schema.class_policy, n_cols, records, records[0][0])
    numeric_cols = [j for j in range(n_cols) if j != class_index]
    if not numeric_cols:
        raise CsvFormatError("no numeric columns left after class-column handling")

    rows = np.empty((len(records), len(numeric_cols)))
    labels = [] if class_index is not None else None
    for i, (line, record) in enumerate(records):
        for k, j in enumerate(numeric_cols):
            cell = record[j]
            try:
                value = float(cell)
            except ValueError:
                raise CsvFormatError(
                    f"row {line}, column {j + 1}: cannot parse {cell!r} as a number"
                ) from None
            if not math.isfinite(value):
                raise CsvFormatError(
                    f"row {line}, column {j + 1}: non-finite value {cell!r}"
                )
            rows[i, k] = value
        if labels is not None:
            labels.append(record[class_index])

    column_names = None
    label_name = None
    if header is not None:
        column_names = [header[j] for j in numeric_cols]
        if class_index is not None:
            label_name = header[class_index]
    return Dataset(
        rows=rows,
        labels=labels,
        column_names=column_names,
        label_name=label_name,
        row_ids=np.arange(len(records), dtype=np.int64),
    )


def _format_cell(value: float, precision: int) -> str:
    return format(value, f".{precision}g")


def write_csv(
    dataset: Dataset,
    schema: CsvSchema = CsvSchema(),
    destination=None,
    include_ids: bool = False,
    id_name: str = "row_id",
) -> None:
    """Emit a dataset as CSV; path destinations are written atomically."""
    if destination is None:
        raise ValidationError("write_csv needs a destination path or stream")
    if isinstance(destination, (str, Path)):
        directory = os.path.dirname(os.fspath(destination)) or "."
        fd, temp_path = tempfile.mkstemp(dir=directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
                _write_stream(dataset, schema, handle, include_ids, id_name)
            os.replace(temp_path, destination)
        except BaseException:
            if os.path.exists(temp_path):
                os.unlink(temp_path)
            raise
    else:
        _write_stream(dataset, schema, destination, include_ids, id_name)


def _write_stream(dataset, schema, stream, include_ids, id_name) -> None:
    writer = csv.writer(stream, delimiter=schema.delimiter, lineterminator="\n")
    ids = dataset.effective_row_ids() if include_ids else None
    if schema.has_header and dataset.column_names is not None:
        header = list(dataset.column_names)
        if dataset.labels is not None:
            header.append(dataset.label_name or "class")
        if include_ids:
            header.insert(0, id_name)
        writer.writerow(header)
    for i in range(dataset.n_rows):
        record = [_format_cell(v, schema.precision) for v in dataset.rows[i]]
        if dataset.labels is not None:
            record.append(dataset.labels[i])
        if include_ids:
            record.insert(0, str(int(ids[i])))
        writer.writerow(record)
