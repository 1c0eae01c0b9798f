import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chebperturb import (
    Dataset,
    PerturbationConfig,
    ValidationError,
    partition,
    perturb_attribute,
    perturb_dataset,
    perturb_window,
    shuffle_and_release,
    window_extents,
)
from chebperturb.laplace import noise_stream, shuffle_stream
from chebperturb.perturbation import _abscissae, frame_from_rows


def _dataset(rows, attrs, seed=0, labeled=False):
    rng = np.random.default_rng(seed)
    labels = [str(i % 3) for i in range(rows)] if labeled else None
    return Dataset(rng.random((rows, attrs)), labels=labels)


@pytest.mark.parametrize(
    "rows, ws, sizes",
    [
        (20000, 10000, [10000, 10000]),
        (103, 100, [103]),
        (8, 4, [4, 4]),
        (5, 4, [5]),
        (7, 4, [7]),
        (12, 5, [5, 7]),
        (4, 100, [4]),
    ],
)
def test_window_sizes(rows, ws, sizes):
    extents = window_extents(rows, ws)
    assert [end - start for start, end in extents] == sizes
    assert extents[0][0] == 0 and extents[-1][1] == rows


def test_partition_rejects_tiny_datasets():
    with pytest.raises(ValidationError):
        window_extents(3, 10)
    with pytest.raises(ValidationError):
        window_extents(10, 3)


def test_partition_captures_raw_ranges_and_ids():
    ds = _dataset(10, 2, seed=4, labeled=True)
    frames = partition(ds, 5)
    assert len(frames) == 2
    for frame, (start, end) in zip(frames, [(0, 5), (5, 10)]):
        assert np.array_equal(frame.original_row_ids, np.arange(start, end))
        assert np.allclose(frame.col_min, ds.rows[start:end].min(axis=0))
        assert np.allclose(frame.col_max, ds.rows[start:end].max(axis=0))
        assert frame.labels == ds.labels[start:end]


def test_linear_ramp_survives_noiseless_pipeline():
    n = 50
    column = -5.0 + 13.0 * np.linspace(0, 1, n)
    config = PerturbationConfig(epsilon=1.0, window_size=n, disable_noise=True)
    out = perturb_attribute(column, _abscissae(n), config, np.random.default_rng(0))
    assert np.max(np.abs(out - column)) <= 1e-9


def test_constant_column_passes_through():
    column = np.full(20, 3.25)
    config = PerturbationConfig(epsilon=1.0, window_size=20)
    out = perturb_attribute(column, _abscissae(20), config, np.random.default_rng(0))
    assert np.array_equal(out, column)


def test_noisy_column_changes_but_respects_bounds():
    rng = np.random.default_rng(8)
    column = rng.normal(size=200)
    config = PerturbationConfig(epsilon=1.0, window_size=200)
    out = perturb_attribute(column, _abscissae(200), config, np.random.default_rng(1))
    assert not np.allclose(out, column)
    assert out.min() >= column.min() - 1e-12
    assert out.max() <= column.max() + 1e-12


@settings(max_examples=60, deadline=None)
@given(
    values=st.lists(
        st.floats(min_value=-1e6, max_value=1e6, allow_nan=False),
        min_size=4,
        max_size=50,
    ),
    seed=st.integers(min_value=0, max_value=2**32 - 1),
)
def test_bounds_hold_for_arbitrary_columns(values, seed):
    column = np.array(values)
    config = PerturbationConfig(epsilon=0.5, window_size=len(values))
    out = perturb_attribute(
        column, _abscissae(len(values)), config, np.random.default_rng(seed)
    )
    assert out.shape == column.shape
    assert out.min() >= column.min() - 1e-9
    assert out.max() <= column.max() + 1e-9


def test_window_of_ramps_is_unchanged_without_noise():
    ramp = np.linspace(2, 9, 30)
    frame = frame_from_rows(np.column_stack([ramp, ramp * -1 + 5]), np.arange(30))
    config = PerturbationConfig(epsilon=1.0, window_size=30, disable_noise=True)
    out = perturb_window(frame, config, entropy=1, window_index=0)
    assert np.max(np.abs(out.data - frame.data)) <= 1e-9
    assert np.array_equal(out.original_row_ids, frame.original_row_ids)


def test_single_column_window_reduces_to_attribute_path():
    rng = np.random.default_rng(3)
    column = rng.random(40)
    frame = frame_from_rows(column[:, None], np.arange(40))
    config = PerturbationConfig(epsilon=1.0, window_size=40)
    out = perturb_window(frame, config, entropy=21, window_index=5)
    manual = perturb_attribute(column, _abscissae(40), config, noise_stream(21, 5, 0))
    assert np.array_equal(out.data[:, 0], manual)


def test_identical_columns_draw_distinct_substreams():
    column = np.random.default_rng(0).random(60)
    frame = frame_from_rows(np.tile(column[:, None], (1, 17)), np.arange(60))
    config = PerturbationConfig(epsilon=1.0, window_size=60)
    out = perturb_window(frame, config, entropy=9, window_index=0)
    distinct = {out.data[:, j].tobytes() for j in range(17)}
    assert len(distinct) == 17


def test_release_of_single_row_is_identity():
    frame = frame_from_rows(np.array([[1.0, 2.0]]), np.array([0]), labels=["x"])
    released = shuffle_and_release([frame], shuffle_stream(0, 0))
    assert np.array_equal(released.rows, [[1.0, 2.0]])
    assert released.labels == ["x"]


def test_release_preserves_row_label_multiset():
    ds = _dataset(30, 3, seed=1, labeled=True)
    frames = partition(ds, 10)
    released = shuffle_and_release(frames, shuffle_stream(5, 0))
    original = sorted((tuple(r), l) for r, l in zip(ds.rows, ds.labels))
    shuffled = sorted((tuple(r), l) for r, l in zip(released.rows, released.labels))
    assert original == shuffled


def test_release_shuffle_is_seeded():
    ds = _dataset(25, 2, seed=2)
    frames = partition(ds, 25)
    a = shuffle_and_release(frames, shuffle_stream(1, 0))
    b = shuffle_and_release(frames, shuffle_stream(1, 0))
    assert np.array_equal(a.rows, b.rows)
    assert np.array_equal(a.row_ids, b.row_ids)


def test_perturb_dataset_conserves_rows_and_labels():
    ds = _dataset(440, 8, seed=6, labeled=True)
    released = perturb_dataset(ds, PerturbationConfig(epsilon=1.0, window_size=440, seed=3))
    assert released.n_rows == 440
    assert sorted(released.labels) == sorted(ds.labels)
    assert sorted(released.row_ids.tolist()) == list(range(440))


def test_perturb_dataset_is_reproducible_per_seed():
    ds = _dataset(100, 4, seed=10)
    config = PerturbationConfig(epsilon=1.0, window_size=50, seed=77)
    a = perturb_dataset(ds, config)
    b = perturb_dataset(ds, config)
    assert np.array_equal(a.rows, b.rows)
    assert np.array_equal(a.row_ids, b.row_ids)


def test_two_seeds_diverge_inside_the_same_envelope():
    ds = _dataset(150, 3, seed=11)
    a = perturb_dataset(ds, PerturbationConfig(epsilon=1.0, window_size=150, seed=1))
    b = perturb_dataset(ds, PerturbationConfig(epsilon=1.0, window_size=150, seed=2))
    assert not np.array_equal(a.rows, b.rows)
    for out in (a, b):
        assert np.all(out.rows.min(axis=0) >= ds.rows.min(axis=0) - 1e-12)
        assert np.all(out.rows.max(axis=0) <= ds.rows.max(axis=0) + 1e-12)


def test_smaller_budget_perturbs_harder():
    ds = _dataset(400, 3, seed=12)
    mads = {0.1: 0.0, 1.0: 0.0}
    for epsilon in mads:
        for seed in range(20):
            config = PerturbationConfig(epsilon=epsilon, window_size=400, seed=seed)
            aligned = perturb_dataset(ds, config).restore_original_order()
            mads[epsilon] += np.abs(aligned.rows - ds.rows).mean()
    assert mads[0.1] > mads[1.0]


def test_static_path_requires_static_threshold():
    ds = _dataset(20, 2)
    with pytest.raises(ValidationError):
        perturb_dataset(ds, PerturbationConfig(epsilon=1.0, window_size=10, threshold=2))


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(epsilon=0.0, window_size=10),
        dict(epsilon=-1.0, window_size=10),
        dict(epsilon=1.0, window_size=3),
        dict(epsilon=1.0, window_size=10, threshold=0),
        dict(epsilon=1.0, window_size=10, seed=-5),
    ],
)
def test_config_validation(kwargs):
    with pytest.raises(ValidationError):
        PerturbationConfig(**kwargs)
