"""
Векторное квантование: обучение кодовой книги LBG и квантование
"""
import numpy as np
from loguru import logger
from scipy.spatial.distance import cdist

import config
from database.models import ClusterAssignment, Codebook, FeatureSequence
from utils.errors import ConfigError, DimensionMismatchError, EmptyFeaturesError, InsufficientDataError


def _assign(vectors: np.ndarray, centroids: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Ближайший центроид по квадрату евклидова расстояния; при равенстве - меньший индекс"""
    distances = cdist(vectors, centroids, metric="sqeuclidean")
    labels = np.argmin(distances, axis=1)
    return labels, distances[np.arange(len(vectors)), labels]


def _split(centroid: np.ndarray, epsilon: float, spread: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    Расщепить центроид на c(1 + eps) и c(1 - eps).

    Компоненты, пренебрежимо малые относительно разброса данных, сдвигаются
    на +-eps * sigma, иначе расщепление в них вырождается.
    """
    delta = epsilon * centroid
    degenerate = np.abs(centroid) < epsilon * spread
    delta = np.where(degenerate, epsilon * spread, delta)
    return centroid + delta, centroid - delta


def lbg_train(
    vectors: FeatureSequence,
    bits: int,
    epsilon: float = config.VQ_SETTINGS["epsilon"],
    max_iters: int = config.VQ_SETTINGS["max_iters"],
    tol: float = config.VQ_SETTINGS["tol"],
) -> Codebook:
    """
    Обучить кодовую книгу из 2^bits центроидов алгоритмом LBG.

    Старт с глобального среднего; на каждом этапе все центроиды расщепляются,
    затем k-means до относительного уменьшения искажения < tol или max_iters.
    Пустая ячейка восстанавливается расщеплением центроида самого
    заполненного кластера; после этого начинается новая фаза истории.
    """
    if bits < 0:
        raise ConfigError(f"bits должен быть >= 0, получено {bits}")
    if epsilon <= 0:
        raise ConfigError(f"epsilon должен быть > 0, получено {epsilon}")

    data = vectors.vectors
    target = 2 ** bits
    if len(data) < target:
        raise InsufficientDataError(
            f"Для {target} центроидов нужно не меньше {target} векторов, есть {len(data)}",
            path=vectors.source_id or None)

    spread = data.std(axis=0)
    centroids = data.mean(axis=0, keepdims=True)
    history: list[tuple[float, ...]] = []

    while True:
        phase: list[float] = []
        previous = np.inf
        for _ in range(max_iters):
            labels, distances = _assign(data, centroids)
            distortion = float(distances.mean())
            phase.append(distortion)

            if distortion == 0.0 or (np.isfinite(previous) and (previous - distortion) / previous < tol):
                break
            previous = distortion

            counts = np.bincount(labels, minlength=len(centroids))
            for index in np.flatnonzero(counts):
                centroids[index] = data[labels == index].mean(axis=0)

            empty = np.flatnonzero(counts == 0)
            if len(empty):
                for index in empty:
                    largest = int(np.argmax(counts))
                    centroids[largest], centroids[index] = _split(centroids[largest], epsilon, spread)
                    counts[index] = counts[largest] // 2
                    counts[largest] -= counts[index]
                    logger.debug(f"LBG: пустая ячейка {index} восстановлена из {largest}")
                history.append(tuple(phase))
                phase = []
                previous = np.inf

        history.append(tuple(phase))

        if len(centroids) >= target:
            break

        plus, minus = zip(*(_split(c, epsilon, spread) for c in centroids))
        centroids = np.vstack([np.array(plus), np.array(minus)])
        logger.debug(f"LBG: расщепление до {len(centroids)} центроидов")

    _, distances = _assign(data, centroids)
    training_distortion = float(distances.mean())
    history[-1] = history[-1] + (training_distortion,)

    logger.debug(f"LBG: {target} центроидов, искажение {training_distortion:.6g}")
    return Codebook(centroids, bits, training_distortion, tuple(h for h in history if h))


def quantize(vectors: FeatureSequence, codebook: Codebook) -> ClusterAssignment:
    """Отнести каждый вектор к ближайшему центроиду"""
    if len(vectors) == 0:
        raise EmptyFeaturesError("Пустая последовательность признаков", path=vectors.source_id or None)
    if vectors.dim != codebook.dim:
        raise DimensionMismatchError(f"Размерность векторов {vectors.dim} != размерности кодовой книги {codebook.dim}")

    labels, distances = _assign(vectors.vectors, codebook.centroids)
    counts = np.bincount(labels, minlength=codebook.size)
    return ClusterAssignment(labels, counts, float(distances.mean()))


def vq_distance(test: FeatureSequence, codebook: Codebook) -> float:
    """d_0: средняя квадратичная ошибка квантования на вектор"""
    return quantize(test, codebook).mean_distortion
