"""
Ковариационные модели и мера сферичности (арифметико-гармоническая)
"""
import math

import numpy as np
from loguru import logger
from scipy.linalg import LinAlgError, cho_factor, cho_solve, cholesky

import config
from database.models import CovarianceModel, FeatureSequence
from utils.errors import DimensionMismatchError, InsufficientDataError, SingularModelError


def _is_positive_definite(matrix: np.ndarray) -> bool:
    try:
        cholesky(matrix, lower=True, check_finite=False)
        return True
    except LinAlgError:
        return False


def sample_covariance(
    vectors: np.ndarray,
    dim: int,
    ridge: float = config.CM_SETTINGS["ridge"],
    bias: bool = True,
) -> CovarianceModel:
    """
    Ковариация первых dim компонент векторов.

    matrix = (1/M) sum (v - mean)(v - mean)^T (1/(M-1) при bias=False).
    Если матрица не положительно определена, добавляется lambda * I,
    lambda = ridge * trace / dim (или ridge при нулевом следе).
    """
    vectors = np.asarray(vectors, dtype=np.float64)
    if vectors.ndim != 2 or vectors.shape[1] < dim:
        raise DimensionMismatchError(f"Нужны векторы размерности >= {dim}, получено {vectors.shape}")

    truncated = vectors[:, :dim]
    count = len(truncated)
    if count < 2:
        raise InsufficientDataError(f"Для ковариации нужно >= 2 векторов, есть {count}")

    mean = truncated.mean(axis=0)
    centered = truncated - mean
    matrix = centered.T @ centered / (count if bias else count - 1)
    matrix = (matrix + matrix.T) / 2

    regularized = False
    if not _is_positive_definite(matrix):
        trace = float(np.trace(matrix))
        lam = ridge * trace / dim if trace > 0 else ridge
        matrix = matrix + lam * np.eye(dim)
        regularized = True
        logger.warning(f"Ковариация {dim}x{dim} по {count} векторам не положительно определена, lambda={lam:.3g}")
        if not _is_positive_definite(matrix):
            raise SingularModelError(f"Матрица {dim}x{dim} вырождена даже после регуляризации")

    return CovarianceModel(dim, mean, matrix, count, regularized)


def _inverse_trace(factor_of: np.ndarray, other: np.ndarray) -> float:
    """tr(other * factor_of^{-1})"""
    try:
        factor = cho_factor(factor_of, lower=True, check_finite=False)
    except LinAlgError:
        raise SingularModelError("Матрица модели не обращается")
    return float(np.trace(cho_solve(factor, other, check_finite=False)))


def sphericity(c_test: CovarianceModel, c_model: CovarianceModel) -> float:
    """
    mu = log( tr(C_test C_j^{-1}) tr(C_j C_test^{-1}) / 2 ) - 2 log(P)

    Симметрична и инвариантна к масштабу; mu(C, C) = -log 2.
    """
    if c_test.dim != c_model.dim:
        raise DimensionMismatchError(f"Размерности матриц различаются: {c_test.dim} и {c_model.dim}")

    dim = c_test.dim
    forward = _inverse_trace(c_model.matrix, c_test.matrix)
    backward = _inverse_trace(c_test.matrix, c_model.matrix)
    return math.log(forward * backward / 2) - 2 * math.log(dim)


def enroll_cm(
    train: FeatureSequence,
    p2: int,
    ridge: float = config.CM_SETTINGS["ridge"],
) -> CovarianceModel:
    """Одна глобальная ковариационная матрица диктора"""
    if len(train) < p2 + 1:
        logger.warning(f"{train.source_id}: {len(train)} векторов для матрицы {p2}x{p2}, рекомендуется >= {p2 + 1}")
    try:
        return sample_covariance(train.vectors, p2, ridge)
    except InsufficientDataError as e:
        raise InsufficientDataError(e.message, path=train.source_id or None)
