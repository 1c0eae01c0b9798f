"""Command-line surface: perturb, stream, evaluate, sweep, bench."""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys
import tempfile
import time
from pathlib import Path

import numpy as np

from . import __version__
from .attacks import evaluate_attacks
from .bench import THROUGHPUT_TARGET, run_benchmark
from .dataset import Dataset
from .errors import CsvFormatError, PerturbationError, ValidationError
from .io import CsvSchema, read_csv, write_csv
from .perturbation import PerturbationConfig, perturb_dataset, window_extents
from .stream import StreamPerturber
from .utility import epsilon_sweep, knn_accuracy, window_sweep

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_ENGINE = 3


def _positive_float(text: str) -> float:
    value = float(text)
    if not math.isfinite(value) or value <= 0:
        raise argparse.ArgumentTypeError(f"must be a positive number, got {text}")
    return value


def _window_size(text: str) -> int:
    value = int(text)
    if value < 4:
        raise argparse.ArgumentTypeError(f"must be >= 4 (model minimum), got {text}")
    return value


def _threshold(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1 for stream mode, got {text}")
    return value


def _seed(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {text}")
    return value


def _fraction(text: str) -> float:
    value = float(text)
    if not 0.0 < value <= 1.0:
        raise argparse.ArgumentTypeError(f"must be in (0, 1], got {text}")
    return value


def _class_policy(text: str):
    if text in ("auto", "last", "none"):
        return text
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"must be auto, last, none, or a column index, got {text!r}"
        ) from None


def _add_csv_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--delimiter", default=",", help="field delimiter (default ',')")
    parser.add_argument(
        "--no-header", action="store_true", help="input has no header row"
    )
    parser.add_argument(
        "--class-column",
        type=_class_policy,
        default="auto",
        help="class-column policy: auto, last, none, or a 0-based index",
    )
    parser.add_argument(
        "--precision",
        type=int,
        default=9,
        help="significant digits emitted per numeric cell (default 9)",
    )


def _schema(args) -> CsvSchema:
    return CsvSchema(
        delimiter=args.delimiter,
        has_header=not args.no_header,
        class_policy=args.class_column,
        precision=args.precision,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chebperturb",
        description=(
            "Privacy-preserving perturbation of numeric datasets and streams via "
            "noisy Chebyshev least-squares synthesis."
        ),
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("perturb", help="perturb a static dataset in one release")
    p.add_argument("--input", required=True, help="input CSV path")
    p.add_argument("--output", required=True, help="output CSV path")
    p.add_argument("--epsilon", required=True, type=_positive_float, help="privacy budget")
    p.add_argument("--window-size", required=True, type=_window_size, help="tuples per fit cycle")
    p.add_argument("--seed", type=_seed, help="master seed; omit for a non-reproducible run")
    p.add_argument("--write-ids", action="store_true", help="emit original row ids as a leading column")
    p.add_argument("--plot-dir", help="directory for diagnostic figures")
    _add_csv_options(p)
    p.set_defaults(handler=run_perturb)

    p = sub.add_parser("stream", help="perturb a stream, releasing every t windows")
    p.add_argument("--input", required=True, help="input CSV path, or - for stdin")
    p.add_argument("--output", required=True, help="output CSV path, directory for block files, or - for stdout")
    p.add_argument("--epsilon", required=True, type=_positive_float, help="privacy budget")
    p.add_argument("--window-size", required=True, type=_window_size, help="buffer size in tuples")
    p.add_argument("--threshold", required=True, type=_threshold, help="windows per release")
    p.add_argument("--seed", type=_seed, help="master seed; omit for a non-reproducible run")
    p.add_argument("--write-ids", action="store_true", help="emit original row ids as a leading column")
    _add_csv_options(p)
    p.set_defaults(handler=run_stream)

    p = sub.add_parser("evaluate", help="attack resistance and 1-NN utility of a released dataset")
    p.add_argument("--original", required=True, help="original CSV path")
    p.add_argument("--perturbed", required=True, help="perturbed CSV path")
    p.add_argument("--attacks", help="comma-separated subset of {ni,io}")
    p.add_argument("--knn", action="store_true", help="also report 1-NN accuracy")
    p.add_argument("--known-fraction", type=_fraction, default=0.10, help="row pairs known to the I/O adversary (default 0.10)")
    p.add_argument("--folds", type=int, default=10, help="cross-validation folds for --knn (default 10)")
    p.add_argument("--seed", type=_seed, help="seed for the adversary's pair sampling and fold assignment")
    p.add_argument("--id-column", help="column of original row ids in the perturbed file; realigns rows before scoring")
    p.add_argument("--csv", help="write per-attribute statistics to this CSV path")
    p.add_argument("--plot-dir", help="directory for report figures")
    _add_csv_options(p)
    p.set_defaults(handler=run_evaluate)

    p = sub.add_parser("sweep", help="1-NN accuracy across a parameter sweep")
    p.add_argument("--input", required=True, help="labeled input CSV path")
    p.add_argument("--param", required=True, choices=("epsilon", "window-size"), help="parameter to sweep")
    p.add_argument("--values", required=True, help="comma-separated parameter values")
    p.add_argument("--epsilon", type=_positive_float, default=1.0, help="fixed budget for window-size sweeps (default 1)")
    p.add_argument("--window-size", type=_window_size, help="fixed window for epsilon sweeps (default: full dataset)")
    p.add_argument("--seeds", type=int, default=1, help="independent repetitions to average (default 1)")
    p.add_argument("--folds", type=int, default=5, help="cross-validation folds (default 5)")
    p.add_argument("--seed", type=_seed, help="master seed for the sweep")
    p.add_argument("--csv", help="write sweep results to this CSV path")
    p.add_argument("--plot-dir", help="directory for the sweep figure")
    _add_csv_options(p)
    p.set_defaults(handler=run_sweep)

    p = sub.add_parser("bench", help="engine throughput and linear-scaling check")
    p.add_argument("--rows", required=True, type=int, help="base row count N (also timed at 2N)")
    p.add_argument("--attrs", required=True, type=int, help="attribute count")
    p.add_argument("--window-size", type=_window_size, default=10_000, help="window size (default 10000)")
    p.add_argument("--epsilon", type=_positive_float, default=1.0, help="privacy budget (default 1)")
    p.add_argument("--repeats", type=int, default=3, help="timing repetitions, best-of (default 3)")
    p.add_argument("--seed", type=_seed, default=0, help="data/engine seed (default 0)")
    p.add_argument("--plot-dir", help="directory for the timing figure")
    p.set_defaults(handler=run_bench)

    return parser


def run_perturb(args) -> int:
    config = PerturbationConfig(
        epsilon=args.epsilon,
        window_size=args.window_size,
        seed=args.seed,
        class_policy=args.class_column,
    )
    schema = _schema(args)
    dataset = read_csv(args.input, schema)
    start = time.perf_counter()
    released = perturb_dataset(dataset, config)
    elapsed = time.perf_counter() - start
    write_csv(released, schema, args.output, include_ids=args.write_ids)
    windows = len(window_extents(dataset.n_rows, config.window_size))
    print(f"rows={dataset.n_rows}")
    print(f"attributes={dataset.n_attrs}")
    print(f"windows={windows}")
    print(f"seconds={elapsed:.4f}")
    print(f"rows_per_sec={dataset.n_rows / elapsed:.0f}")
    if args.plot_dir:
        from . import plots

        directory = plots.ensure_dir(args.plot_dir)
        name = dataset.column_names[0] if dataset.column_names else "attribute 0"
        path = plots.save_overlay_figure(
            directory / "perturbation_overlay.png",
            dataset.rows[:, 0],
            released.rows[:, 0],
            name,
        )
        print(f"figure_overlay={path}")
    return EXIT_OK


class _StreamWriter:
    """Release sink: one file, a directory of block files, or stdout."""

    def __init__(self, target: str, schema: CsvSchema, write_ids: bool):
        self._schema = schema
        self._write_ids = write_ids
        self._header_done = False
        self._block = 0
        self.paths: list[str] = []
        if target == "-":
            self._mode = "stdout"
        elif target.endswith(("/", "\\")) or Path(target).is_dir():
            self._mode = "dir"
            self._dir = Path(target)
            self._dir.mkdir(parents=True, exist_ok=True)
        else:
            self._mode = "file"
            self._path = Path(target)
            self._handle = open(self._path, "w", encoding="utf-8", newline="")

    def emit(self, block: Dataset) -> None:
        if self._mode == "dir":
            path = self._dir / f"block_{self._block:04d}.csv"
            write_csv(block, self._schema, path, include_ids=self._write_ids)
            self.paths.append(str(path))
        else:
            handle = sys.stdout if self._mode == "stdout" else self._handle
            schema = self._schema
            if self._header_done:
                # Header (when any) goes out once, with the first block.
                schema = CsvSchema(
                    delimiter=schema.delimiter,
                    has_header=False,
                    class_policy=schema.class_policy,
                    precision=schema.precision,
                )
            write_csv(block, schema, handle, include_ids=self._write_ids)
            handle.flush()
            self._header_done = True
        self._block += 1

    def close(self) -> None:
        if self._mode == "file":
            self._handle.close()


class _StreamReader:
    """Incremental CSV parse yielding (numeric_values, label) per record.

    The class column is resolved from the first data record, since a stream
    cannot be scanned ahead; "auto" falls back to last-cell detection on
    that record alone. column_names/label_name become available once the
    first data record has been seen.
    """

    def __init__(self, handle, schema: CsvSchema):
        self._reader = csv.reader(handle, delimiter=schema.delimiter)
        self._schema = schema
        self._header: list[str] | None = None
        self._class_index: int | None = None
        self._numeric_cols: list[int] | None = None
        self._n_cols: int | None = None
        self.column_names: list[str] | None = None
        self.label_name: str | None = None

    def _resolve(self, record: list[str]) -> None:
        self._n_cols = len(record)
        policy = self._schema.class_policy
        if policy == "none":
            self._class_index = None
        elif policy == "last":
            self._class_index = self._n_cols - 1
        elif isinstance(policy, int):
            if policy < 0 or policy >= self._n_cols:
                raise ValidationError(
                    f"class column index {policy} out of range for {self._n_cols} columns"
                )
            self._class_index = policy
        else:  # auto
            try:
                float(record[-1])
                self._class_index = None
            except ValueError:
                self._class_index = self._n_cols - 1 if self._n_cols >= 2 else None
        self._numeric_cols = [j for j in range(self._n_cols) if j != self._class_index]
        if not self._numeric_cols:
            raise CsvFormatError("no numeric columns left after class-column handling")
        if self._header is not None:
            self.column_names = [self._header[j] for j in self._numeric_cols]
            if self._class_index is not None:
                self.label_name = self._header[self._class_index]

    def __iter__(self):
        header_pending = self._schema.has_header
        for record in self._reader:
            if header_pending:
                header_pending = False
                self._header = record
                continue
            if not record:
                continue
            if self._n_cols is None:
                self._resolve(record)
            if len(record) != self._n_cols:
                raise CsvFormatError(
                    f"row {self._reader.line_num}: expected {self._n_cols} fields, "
                    f"found {len(record)}"
                )
            values = np.empty(len(self._numeric_cols))
            for k, j in enumerate(self._numeric_cols):
                try:
                    values[k] = float(record[j])
                except ValueError:
                    raise CsvFormatError(
                        f"row {self._reader.line_num}, column {j + 1}: "
                        f"cannot parse {record[j]!r} as a number"
                    ) from None
            label = record[self._class_index] if self._class_index is not None else None
            yield values, label


def run_stream(args) -> int:
    config = PerturbationConfig(
        epsilon=args.epsilon,
        window_size=args.window_size,
        threshold=args.threshold,
        seed=args.seed,
        class_policy=args.class_column,
    )
    schema = _schema(args)
    handle = sys.stdin if args.input == "-" else open(args.input, "r", encoding="utf-8", newline="")
    writer = None
    perturber = None
    chunk_rows: list[np.ndarray] = []
    chunk_labels: list[str] = []
    chunk_size = 4096
    try:
        reader = _StreamReader(handle, schema)
        for values, label in reader:
            if perturber is None:
                perturber = StreamPerturber(
                    config,
                    column_names=reader.column_names,
                    label_name=reader.label_name,
                )
            chunk_rows.append(values)
            if label is not None:
                chunk_labels.append(label)
            if len(chunk_rows) >= chunk_size:
                writer = _ensure_writer(writer, args, schema)
                _ingest_chunk(perturber, chunk_rows, chunk_labels, writer)
                chunk_rows, chunk_labels = [], []
        if perturber is None:
            raise CsvFormatError("no data rows found")
        writer = _ensure_writer(writer, args, schema)
        if chunk_rows:
            _ingest_chunk(perturber, chunk_rows, chunk_labels, writer)
        final = perturber.flush()
        if final is not None:
            writer.emit(final)
        if perturber.rows_refused:
            print(
                f"warning: refused to release {perturber.rows_refused} trailing rows "
                f"(below the {4}-row model minimum)",
                file=sys.stderr,
            )
        print(f"rows_ingested={perturber.rows_ingested}")
        print(f"rows_released={perturber.rows_released}")
        print(f"rows_refused={perturber.rows_refused}")
        print(f"windows={perturber.windows_processed}")
        print(f"releases={perturber.releases}")
    finally:
        if handle is not sys.stdin:
            handle.close()
        if writer is not None:
            writer.close()
    return EXIT_OK


def _ensure_writer(writer, args, schema) -> _StreamWriter:
    return writer if writer is not None else _StreamWriter(args.output, schema, args.write_ids)


def _ingest_chunk(perturber, chunk_rows, chunk_labels, writer) -> None:
    rows = np.vstack(chunk_rows)
    labels = chunk_labels if chunk_labels else None
    for block in perturber.ingest(rows, labels):
        writer.emit(block)


def _realign_by_id_column(perturbed: Dataset, id_column: str) -> Dataset:
    if perturbed.column_names is None or id_column not in perturbed.column_names:
        raise ValidationError(f"perturbed file has no column named {id_column!r}")
    index = perturbed.column_names.index(id_column)
    ids = perturbed.rows[:, index]
    if np.any(ids != np.round(ids)):
        raise ValidationError(f"column {id_column!r} does not hold integer row ids")
    keep = [j for j in range(perturbed.n_attrs) if j != index]
    realigned = Dataset(
        rows=perturbed.rows[:, keep],
        labels=perturbed.labels,
        column_names=[perturbed.column_names[j] for j in keep],
        label_name=perturbed.label_name,
        row_ids=ids.astype(np.int64),
    )
    return realigned.restore_original_order()


def run_evaluate(args) -> int:
    selected = [s for s in (args.attacks or "").split(",") if s]
    unknown = [s for s in selected if s not in ("ni", "io")]
    if unknown:
        raise ValidationError(f"unknown attack metric(s): {', '.join(unknown)}")
    if not selected and not args.knn:
        raise ValidationError("nothing to evaluate: pass --attacks ni,io and/or --knn")

    schema = _schema(args)
    original = read_csv(args.original, schema)
    perturbed = read_csv(args.perturbed, schema)
    if args.id_column:
        perturbed = _realign_by_id_column(perturbed, args.id_column)
    if perturbed.rows.shape != original.rows.shape:
        raise ValidationError(
            f"shape mismatch: original {original.rows.shape} vs perturbed {perturbed.rows.shape}"
        )

    report = None
    if selected:
        report = evaluate_attacks(
            original,
            perturbed,
            run_ni="ni" in selected,
            run_io="io" in selected,
            known_fraction=args.known_fraction,
            rng=args.seed,
        )
        if report.ni is not None:
            print(f"ni_min={report.ni.min:.4f}")
            print(f"ni_avg={report.ni.avg:.4f}")
        if report.io is not None:
            print(f"io_min={report.io.min:.4f}")
            print(f"io_avg={report.io.avg:.4f}")
            print(f"known_fraction={report.known_fraction}")

    if args.knn:
        result = knn_accuracy(perturbed, folds=args.folds, rng=args.seed)
        baseline = knn_accuracy(original, folds=args.folds, rng=args.seed)
        print(f"knn_accuracy={result.accuracy:.4f}")
        print(f"knn_accuracy_original={baseline.accuracy:.4f}")
        print(f"knn_folds={result.folds}")
        print(f"knn_classifier={result.classifier}")

    if args.csv and report is not None:
        _write_attack_csv(args.csv, report, original.column_names)
        print(f"csv={args.csv}")
    if args.plot_dir and report is not None:
        from . import plots

        directory = plots.ensure_dir(args.plot_dir)
        path = plots.save_resistance_figure(
            directory / "attack_resistance.png", report, original.column_names
        )
        print(f"figure_resistance={path}")
    return EXIT_OK


def _write_report_csv(path, records) -> None:
    # Same temp-and-rename discipline as dataset output: no partial files.
    directory = os.path.dirname(os.fspath(path)) or "."
    fd, temp_path = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerows(records)
        os.replace(temp_path, path)
    except BaseException:
        if os.path.exists(temp_path):
            os.unlink(temp_path)
        raise


def _write_attack_csv(path, report, column_names) -> None:
    n_attrs = len(
        report.ni.per_attribute if report.ni is not None else report.io.per_attribute
    )
    names = column_names if column_names is not None else [f"a{j}" for j in range(n_attrs)]
    header = ["attribute"]
    if report.ni is not None:
        header.append("ni_std")
    if report.io is not None:
        header.append("io_std")
    records = [header]
    for j in range(n_attrs):
        record = [names[j]]
        if report.ni is not None:
            record.append(f"{report.ni.per_attribute[j]:.6f}")
        if report.io is not None:
            record.append(f"{report.io.per_attribute[j]:.6f}")
        records.append(record)
    _write_report_csv(path, records)


def run_sweep(args) -> int:
    if args.seeds < 1:
        raise ValidationError(f"--seeds must be >= 1, got {args.seeds}")
    schema = _schema(args)
    dataset = read_csv(args.input, schema)
    if args.param == "epsilon":
        values = [_positive_float(v) for v in args.values.split(",")]
    else:
        values = [_window_size(v) for v in args.values.split(",")]
    window = args.window_size if args.window_size is not None else dataset.n_rows
    template = PerturbationConfig(
        epsilon=args.epsilon,
        window_size=max(window, 4),
        class_policy=args.class_column,
    )

    master = np.random.default_rng(args.seed)
    accumulated = np.zeros(len(values))
    for _ in range(args.seeds):
        run_seed = int(master.integers(2**63))
        if args.param == "epsilon":
            result = epsilon_sweep(dataset, template, values, seed=run_seed, folds=args.folds)
        else:
            result = window_sweep(dataset, template, values, seed=run_seed, folds=args.folds)
        accumulated += [accuracy for _, accuracy in result.sweep]
    means = accumulated / args.seeds

    label = args.param
    print(f"{label:>12}  accuracy")
    for value, accuracy in zip(values, means):
        print(f"{value:>12g}  {accuracy:.4f}")

    entries = list(zip([float(v) for v in values], means))
    if args.csv:
        records = [[label, "accuracy"]]
        records.extend([f"{value:g}", f"{accuracy:.6f}"] for value, accuracy in entries)
        _write_report_csv(args.csv, records)
        print(f"csv={args.csv}")
    if args.plot_dir:
        from . import plots

        directory = plots.ensure_dir(args.plot_dir)
        path = plots.save_sweep_figure(directory / f"{label}_sweep.png", label, entries)
        print(f"figure_sweep={path}")
    return EXIT_OK


def run_bench(args) -> int:
    result = run_benchmark(
        rows=args.rows,
        attrs=args.attrs,
        window_size=args.window_size,
        epsilon=args.epsilon,
        repeats=args.repeats,
        seed=args.seed,
    )
    print(f"rows={result.rows}")
    print(f"attrs={result.attrs}")
    print(f"window_size={result.window_size}")
    print(f"seconds_n={result.seconds_base:.4f}")
    print(f"seconds_2n={result.seconds_double:.4f}")
    print(f"time_ratio={result.time_ratio:.3f}")
    print(f"rows_per_sec={result.rows_per_sec:.0f}")
    if result.rows_per_sec < THROUGHPUT_TARGET:
        print(
            f"warning: {result.rows_per_sec:.0f} rows/sec is below the "
            f"{THROUGHPUT_TARGET} rows/sec target; hardware may be slow",
            file=sys.stderr,
        )
    if args.plot_dir:
        from . import plots

        directory = plots.ensure_dir(args.plot_dir)
        path = plots.save_bench_figure(directory / "bench_scaling.png", result)
        print(f"figure_bench={path}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (CsvFormatError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PerturbationError as exc:
        print(f"engine error: {exc}", file=sys.stderr)
        return EXIT_ENGINE


if __name__ == "__main__":
    sys.exit(main())
