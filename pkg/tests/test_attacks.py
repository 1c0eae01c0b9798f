import numpy as np
import pytest

from chebperturb import (
    Dataset,
    ValidationError,
    evaluate_attacks,
    known_io_attack,
    naive_inference,
    standardize,
)


def test_standardize_small_column():
    out = standardize(np.array([[1.0], [2.0], [3.0]]))
    assert np.allclose(out[:, 0], [-1.0, 0.0, 1.0])


def test_standardize_constant_column_maps_to_zeros():
    out = standardize(np.column_stack([np.full(5, 4.2), np.arange(5.0)]))
    assert np.array_equal(out[:, 0], np.zeros(5))


def test_standardize_is_idempotent():
    rng = np.random.default_rng(0)
    data = rng.normal(3.0, 7.0, (100, 4))
    once = standardize(data)
    assert np.max(np.abs(standardize(once) - once)) <= 1e-12


def test_naive_inference_of_identical_data_is_zero():
    data = np.random.default_rng(1).random((50, 3))
    stats = naive_inference(data, data.copy())
    assert stats.min == 0.0 and stats.avg == 0.0


def test_naive_inference_of_independent_normals_is_sqrt_two():
    rng = np.random.default_rng(2)
    a = rng.standard_normal((100_000, 2))
    b = rng.standard_normal((100_000, 2))
    stats = naive_inference(a, b)
    assert stats.avg == pytest.approx(np.sqrt(2.0), abs=0.02)


def test_naive_inference_is_symmetric():
    rng = np.random.default_rng(3)
    a = rng.random((200, 4))
    b = rng.random((200, 4))
    assert np.allclose(naive_inference(a, b).per_attribute, naive_inference(b, a).per_attribute)


def test_naive_inference_absorbs_positive_rescaling():
    rng = np.random.default_rng(4)
    a = rng.random((300, 3))
    b = rng.random((300, 3))
    scaled = a.copy()
    scaled[:, 1] *= 137.0
    assert np.allclose(
        naive_inference(a, b).per_attribute,
        naive_inference(scaled, b).per_attribute,
        atol=1e-10,
    )


def test_naive_inference_shape_mismatch():
    with pytest.raises(ValidationError):
        naive_inference(np.ones((5, 2)), np.ones((5, 3)))


def test_known_io_identity_map_is_recovered():
    data = np.random.default_rng(5).random((200, 4))
    stats = known_io_attack(data, data.copy(), known_fraction=0.10, rng=0)
    assert stats.avg <= 1e-6


def test_known_io_full_knowledge_of_identical_data():
    data = np.random.default_rng(6).random((60, 3))
    stats = known_io_attack(data, data.copy(), known_fraction=1.0, rng=0)
    assert stats.avg <= 1e-6


def test_known_io_on_unrelated_noise_stays_high():
    rng = np.random.default_rng(7)
    original = rng.standard_normal((20_000, 4))
    noise = rng.standard_normal((20_000, 4))
    stats = known_io_attack(original, noise, known_fraction=0.10, rng=1)
    assert stats.min >= 0.65


def test_known_io_needs_enough_pairs():
    data = np.random.default_rng(8).random((100, 6))
    with pytest.raises(ValidationError):
        known_io_attack(data, data, known_fraction=0.000001)
    with pytest.raises(ValidationError):
        known_io_attack(data, data, known_fraction=0.05)  # 5 pairs < 7


def test_known_io_absorbs_positive_rescaling():
    rng = np.random.default_rng(9)
    original = rng.standard_normal((500, 3))
    perturbed = original + 0.5 * rng.standard_normal((500, 3))
    scaled = original.copy()
    scaled[:, 0] *= 42.0
    base = known_io_attack(original, perturbed, rng=3).per_attribute
    same = known_io_attack(scaled, perturbed, rng=3).per_attribute
    assert np.allclose(base, same, atol=1e-8)


def test_accepts_datasets_and_reports_selected_metrics():
    rows = np.random.default_rng(10).random((80, 3))
    ds = Dataset(rows)
    report = evaluate_attacks(ds, Dataset(rows.copy()), run_io=False)
    assert report.ni is not None and report.io is None and report.known_fraction is None
    report = evaluate_attacks(ds, Dataset(rows.copy()), run_ni=False, rng=0)
    assert report.ni is None and report.io is not None and report.known_fraction == 0.10
