"""
Число параметров моделей
"""


def param_count_vq(bits: int, p: int) -> int:
    """VQ: 2^N0 * P"""
    if bits < 0 or p < 1:
        raise ValueError(f"Требуется bits >= 0 и p >= 1, получено bits={bits}, p={p}")
    return 2 ** bits * p


def param_count_cm(p: int) -> int:
    """CM: (P^2 + P) / 2, матрица симметрична"""
    if p < 1:
        raise ValueError(f"Требуется p >= 1, получено {p}")
    return (p * p + p) // 2


def param_count_vqcm(bits: int, p1: int, p2: int) -> int:
    """VQ-CM: 2^N0 * (P1 + (P2^2 + P2) / 2)"""
    if bits < 0 or p1 < 1 or p2 < 1:
        raise ValueError(f"Требуется bits >= 0, p1, p2 >= 1, получено {bits}, {p1}, {p2}")
    return 2 ** bits * (p1 + param_count_cm(p2))
