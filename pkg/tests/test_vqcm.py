import math

import numpy as np
import pytest

import classifiers.vqcm as vqcm
from classifiers.covariance import enroll_cm
from classifiers.speaker_classifier import model_parameter_count
from classifiers.vq import quantize
from classifiers.vqcm import enroll_vqcm, min_cluster_occupancy, score_vqcm
from database.models import FeatureSequence, Method
from utils.errors import SingularModelError


def two_clouds(rng, n=400, dim=16) -> FeatureSequence:
    offset = np.zeros(dim)
    offset[0] = 6.0
    vectors = np.vstack([
        rng.standard_normal((n, dim)),
        rng.standard_normal((n, dim)) * 0.5 + offset,
    ])
    return FeatureSequence(vectors, "spk")


@pytest.mark.parametrize("p2, expected", [(2, 2), (3, 2), (4, 2), (10, 5), (12, 6), (20, 10)])
def test_min_cluster_occupancy(p2, expected):
    assert min_cluster_occupancy(p2) == expected


@pytest.mark.parametrize("bits, expected", [(1, 142), (2, 284)])
def test_enrolled_model_shape_and_parameters(rng, bits, expected):
    model = enroll_vqcm(two_clouds(rng), bits, 10)
    assert model.method == Method.VQCM
    assert model.codebook.size == 2 ** bits
    assert len(model.clusters) == 2 ** bits
    assert all(c.dim == 10 for c in model.clusters)
    assert model_parameter_count(model) == expected


def test_bits_zero_reduces_to_global_cm(rng):
    train = two_clouds(rng)
    model = enroll_vqcm(train, 0, 10)
    reference = enroll_cm(train, 10)
    np.testing.assert_array_equal(model.clusters[0].matrix, reference.matrix)
    np.testing.assert_allclose(model.codebook.centroids[0], train.vectors.mean(axis=0))


def test_cluster_matrices_use_only_own_members(rng):
    train = two_clouds(rng)
    model = enroll_vqcm(train, 1, 10)
    labels = quantize(train, model.codebook).labels

    # сдвиг одного вектора внутри своего кластера меняет только его матрицу
    perturbed = train.vectors.copy()
    index = int(np.flatnonzero(labels == 1)[0])
    perturbed[index, 1:] += 0.3
    model2 = enroll_vqcm(FeatureSequence(perturbed, "spk"), 1, 10)

    assert np.array_equal(quantize(FeatureSequence(perturbed), model2.codebook).labels, labels)
    changed = [not np.array_equal(a.matrix, b.matrix) for a, b in zip(model.clusters, model2.clusters)]
    assert changed == [False, True]


def test_self_test_limit(rng):
    train = two_clouds(rng)
    model = enroll_vqcm(train, 1, 10)
    scores = score_vqcm(train, model)
    assert scores.d0 == pytest.approx(model.codebook.training_distortion)
    assert len(scores.di) == 2
    for d in scores.di:
        assert d == pytest.approx(-math.log(2), abs=1e-9)


def test_scaling_changes_d0_but_not_di(rng):
    train = two_clouds(rng)
    model = enroll_vqcm(train, 0, 10)
    test = FeatureSequence(rng.standard_normal((200, 16)))
    doubled = FeatureSequence(test.vectors * 2)
    a = score_vqcm(test, model)
    b = score_vqcm(doubled, model)
    assert a.di[0] == pytest.approx(b.di[0], abs=1e-10)
    assert a.d0 != pytest.approx(b.d0)


def test_starved_cluster_is_missing(rng):
    train = two_clouds(rng)
    model = enroll_vqcm(train, 1, 10)
    near_first = model.codebook.centroids[np.argmin(model.codebook.centroids[:, 0])]
    test = FeatureSequence(near_first + 0.1 * rng.standard_normal((50, 16)))
    scores = score_vqcm(test, model)
    assert scores.classifier_count == 3
    assert sum(d is None for d in scores.di) == 1
    assert scores.d0 is not None


def test_singular_model_is_not_silent(rng, monkeypatch):
    train = two_clouds(rng)
    model = enroll_vqcm(train, 1, 10)

    def broken(c_test, c_model):
        raise SingularModelError("не обращается")

    monkeypatch.setattr(vqcm, "sphericity", broken)
    with pytest.raises(SingularModelError):
        score_vqcm(train, model)


def test_own_speaker_scores_best(rng):
    a = two_clouds(rng)
    b = FeatureSequence(rng.standard_normal((800, 16)) @ np.diag(np.linspace(0.3, 2.0, 16)), "other")
    model_a = enroll_vqcm(a, 1, 10)
    model_b = enroll_vqcm(b, 1, 10)
    test = two_clouds(np.random.default_rng(5), n=100)
    sum_a = score_vqcm(test, model_a)
    sum_b = score_vqcm(test, model_b)
    assert sum(sum_a.available_di) < sum(sum_b.available_di)
