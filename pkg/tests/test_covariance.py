import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from classifiers.covariance import enroll_cm, sample_covariance, sphericity
from database.models import CovarianceModel, FeatureSequence
from utils.errors import DimensionMismatchError, InsufficientDataError

LOG2 = math.log(2)


def random_spd(rng, dim: int) -> CovarianceModel:
    n = 3 * dim + 5
    a = rng.standard_normal((dim, n))
    matrix = a @ a.T / n + 0.1 * np.eye(dim)
    return CovarianceModel(dim, np.zeros(dim), matrix, n)


def scaled(model: CovarianceModel, factor: float) -> CovarianceModel:
    return CovarianceModel(model.dim, model.mean, model.matrix * factor, model.sample_count)


@pytest.mark.parametrize("dim", range(2, 21))
def test_self_sphericity_is_minus_log_two(rng, dim):
    c = random_spd(rng, dim)
    assert sphericity(c, c) == pytest.approx(-LOG2, abs=1e-12)


@given(seed=st.integers(0, 100_000), dim=st.integers(1, 12))
def test_symmetric(seed, dim):
    rng = np.random.default_rng(seed)
    a, b = random_spd(rng, dim), random_spd(rng, dim)
    assert sphericity(a, b) == pytest.approx(sphericity(b, a), abs=1e-12)


@given(seed=st.integers(0, 100_000), dim=st.integers(1, 12),
       alpha=st.floats(1e-3, 1e3), beta=st.floats(1e-3, 1e3))
def test_scale_invariant(seed, dim, alpha, beta):
    rng = np.random.default_rng(seed)
    a, b = random_spd(rng, dim), random_spd(rng, dim)
    assert sphericity(scaled(a, alpha), scaled(b, beta)) == pytest.approx(sphericity(a, b), abs=1e-10)


def test_lower_bound_on_many_pairs():
    rng = np.random.default_rng(99)
    for _ in range(10_000):
        dim = int(rng.integers(1, 9))
        a, b = random_spd(rng, dim), random_spd(rng, dim)
        assert sphericity(a, b) >= -LOG2 - 1e-12


def test_proportional_matrices_reach_bound(rng):
    a = random_spd(rng, 6)
    assert sphericity(a, scaled(a, 7.5)) == pytest.approx(-LOG2, abs=1e-12)


def test_dimension_mismatch(rng):
    with pytest.raises(DimensionMismatchError):
        sphericity(random_spd(rng, 3), random_spd(rng, 4))


def test_sample_covariance_matches_two_pass(rng):
    vectors = rng.standard_normal((50, 16))
    model = sample_covariance(vectors, 10)

    truncated = vectors[:, :10]
    mean = np.zeros(10)
    for v in truncated:
        mean += v
    mean /= len(truncated)
    naive = np.zeros((10, 10))
    for v in truncated:
        naive += np.outer(v - mean, v - mean)
    naive /= len(truncated)

    np.testing.assert_allclose(model.mean, mean, atol=1e-12)
    np.testing.assert_allclose(model.matrix, naive, atol=1e-12)
    assert model.sample_count == 50
    assert not model.regularized
    np.testing.assert_array_equal(model.matrix, model.matrix.T)


def test_unbiased_variant_does_not_change_sphericity(rng):
    a = rng.standard_normal((40, 5))
    b = rng.standard_normal((30, 5))
    biased = sphericity(sample_covariance(a, 5), sample_covariance(b, 5))
    unbiased = sphericity(sample_covariance(a, 5, bias=False), sample_covariance(b, 5, bias=False))
    assert biased == pytest.approx(unbiased, abs=1e-10)


def test_rank_deficient_is_regularized():
    # 3 вектора размерности 5: ранг не больше 2
    vectors = np.random.default_rng(1).standard_normal((3, 5))
    model = sample_covariance(vectors, 5, ridge=1e-6)
    assert model.regularized
    assert np.all(np.linalg.eigvalsh(model.matrix) > 0)


def test_constant_vectors_use_plain_ridge():
    model = sample_covariance(np.ones((4, 3)), 3, ridge=1e-6)
    assert model.regularized
    np.testing.assert_allclose(model.matrix, 1e-6 * np.eye(3))


def test_sample_covariance_errors():
    with pytest.raises(InsufficientDataError):
        sample_covariance(np.zeros((1, 4)), 4)
    with pytest.raises(DimensionMismatchError):
        sample_covariance(np.zeros((10, 4)), 6)


def test_enroll_cm_truncates_to_p2(rng):
    train = FeatureSequence(rng.standard_normal((200, 16)), "spk")
    model = enroll_cm(train, 10)
    assert model.dim == 10
    assert model.matrix.shape == (10, 10)
