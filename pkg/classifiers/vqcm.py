"""
VQ-CM: кодовая книга на 1-2 бита сегментирует пространство признаков,
в каждом кластере своя ковариационная матрица; N+1 классификаторов
"""
import math
from typing import Optional

from loguru import logger

import config
from database.models import FeatureSequence, FrontendConfig, Method, ScoreVector, SpeakerModel
from utils.errors import EmptyClusterError, InsufficientDataError
from .covariance import sample_covariance, sphericity
from .vq import lbg_train, quantize


def min_cluster_occupancy(p2: int) -> int:
    """Минимум тестовых векторов в кластере для d_i: max(2, ceil(P2 / 2))"""
    return max(config.CM_SETTINGS["min_occupancy_floor"], math.ceil(p2 / 2))


def enroll_vqcm(
    train: FeatureSequence,
    bits: int,
    p2: int,
    speaker_id: Optional[str] = None,
    frontend_config: Optional[FrontendConfig] = None,
    epsilon: float = config.VQ_SETTINGS["epsilon"],
    max_iters: int = config.VQ_SETTINGS["max_iters"],
    tol: float = config.VQ_SETTINGS["tol"],
    ridge: float = config.CM_SETTINGS["ridge"],
) -> SpeakerModel:
    """
    Регистрация диктора:
    1. Кодовая книга на bits бит.
    2. Кластеризация обучающих векторов вокруг центроидов.
    3. Ковариационная матрица по векторам каждого кластера.
    """
    speaker_id = speaker_id or train.source_id
    frontend_config = frontend_config or FrontendConfig(
        cepstral_order_p1=train.dim, lpc_order=max(train.dim, 1), covariance_order_p2=p2)

    codebook = lbg_train(train, bits, epsilon=epsilon, max_iters=max_iters, tol=tol)
    assignment = quantize(train, codebook)

    clusters = []
    for index in range(codebook.size):
        members = train.vectors[assignment.labels == index]
        if len(members) == 0:
            raise EmptyClusterError(f"Кластер {index} пуст после LBG", speaker_id)
        if len(members) < p2 + 1:
            logger.warning(f"[{speaker_id}] кластер {index}: {len(members)} векторов для матрицы {p2}x{p2}")
        try:
            clusters.append(sample_covariance(members, p2, ridge))
        except InsufficientDataError as e:
            raise InsufficientDataError(f"Кластер {index}: {e.message}", speaker_id)

    logger.debug(
        f"[{speaker_id}] VQ-CM: {codebook.size} кластеров, заполненность "
        f"{assignment.per_cluster_counts.tolist()}")
    return SpeakerModel(speaker_id, frontend_config, Method.VQCM, codebook, clusters)


def score_vqcm(
    test: FeatureSequence,
    model: SpeakerModel,
    ridge: float = config.CM_SETTINGS["ridge"],
    min_occupancy: Optional[int] = None,
) -> ScoreVector:
    """
    Тест: кластеризация тестовых векторов кодовой книгой ЭТОГО диктора,
    d_0 = искажение VQ, d_i = сферичность между ковариациями кластера i.
    Кластеры с недостаточной заполненностью дают None.
    """
    p2 = model.config.covariance_order_p2
    min_occupancy = min_occupancy if min_occupancy is not None else min_cluster_occupancy(p2)

    assignment = quantize(test, model.codebook)
    di: list[Optional[float]] = []
    for index, cluster in enumerate(model.clusters):
        members = test.vectors[assignment.labels == index]
        if len(members) < min_occupancy:
            logger.debug(
                f"[{model.speaker_id}] d_{index + 1} отсутствует: {len(members)} < {min_occupancy} векторов")
            di.append(None)
            continue
        test_cov = sample_covariance(members, p2, ridge)
        di.append(sphericity(test_cov, cluster))

    return ScoreVector(model.speaker_id, assignment.mean_distortion, di)
