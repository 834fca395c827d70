"""
Линейное предсказание: автокорреляция, рекурсия Левинсона-Дарбина, LPC -> кепстр

Фильтр анализа: A(z) = 1 - sum_{k=1..P} a_k z^{-k}.
"""
import numpy as np

from utils.errors import InvalidFrameError, InvalidAutocorrelationError


def autocorrelate(frame: np.ndarray, order: int) -> np.ndarray:
    """r[k] = sum_{n=k}^{L-1} x[n] x[n-k], k = 0..order"""
    frame = np.asarray(frame, dtype=np.float64)
    length = len(frame)
    if order >= length:
        raise InvalidFrameError(f"Порядок {order} должен быть меньше длины кадра {length}")

    full = np.correlate(frame, frame, mode="full")
    return full[length - 1:length + order].copy()


def levinson_durbin(r: np.ndarray) -> tuple[np.ndarray, float]:
    """
    Решить нормальные уравнения R a = r[1..P] для теплицевой R.

    Returns:
        (a[1..P], ошибка предсказания E = r[0] * prod(1 - k_i^2))
    """
    r = np.asarray(r, dtype=np.float64)
    order = len(r) - 1

    if r[0] <= 0:
        raise InvalidFrameError(f"r[0] = {r[0]} <= 0")

    a = np.zeros(order)
    error = r[0]
    for i in range(order):
        # k_{i+1} = (r[i+1] - sum_j a_j r[i+1-j]) / E
        reflection = (r[i + 1] - np.dot(a[:i], r[i:0:-1])) / error
        previous = a[:i].copy()
        a[:i] = previous - reflection * previous[::-1]
        a[i] = reflection
        error *= 1.0 - reflection * reflection
        if error <= 0:
            raise InvalidAutocorrelationError(
                f"Ошибка предсказания {error:.3g} <= 0 на шаге {i + 1} (|k| = {abs(reflection):.6f})")

    return a, float(error)


def lpc_to_cepstrum(a: np.ndarray, q: int) -> np.ndarray:
    """
    Кепстр c[1..q] из коэффициентов LPC: ln(1/A(z)) = sum c_n z^{-n}.

    c_n = a_n + sum_{k=1}^{n-1} (k/n) c_k a_{n-k}, a_n = 0 при n > P.
    """
    a = np.asarray(a, dtype=np.float64)
    order = len(a)
    padded = np.zeros(q + 1)
    padded[1:min(order, q) + 1] = a[:q]

    c = np.zeros(q + 1)
    for n in range(1, q + 1):
        k = np.arange(1, n)
        c[n] = padded[n] + np.sum(k / n * c[k] * padded[n - k])
    return c[1:]
