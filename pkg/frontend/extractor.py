"""
Извлечение LPCC: предыскажение -> кадры Хэмминга -> автокорреляция ->
Левинсон-Дарбин -> кепстр порядка P1
"""
from pathlib import Path
from typing import Union

import numpy as np
from loguru import logger
from numpy.lib.stride_tricks import sliding_window_view

from database.models import AudioSignal, FeatureSequence, FrontendConfig
from utils.errors import ConfigError, EmptyFeaturesError, VqcmError
from .lpc import autocorrelate, levinson_durbin, lpc_to_cepstrum


def preemphasize(signal: AudioSignal, coeff: float) -> AudioSignal:
    """y[0] = x[0], y[n] = x[n] - coeff * x[n-1]"""
    if not 0 <= coeff < 1:
        raise ConfigError(f"Коэффициент предыскажения вне [0, 1): {coeff}")

    x = signal.samples
    if len(x) == 0:
        return signal
    y = np.empty_like(x)
    y[0] = x[0]
    y[1:] = x[1:] - coeff * x[:-1]
    return AudioSignal(y, signal.sample_rate_hz)


def hamming_window(length: int) -> np.ndarray:
    """w[n] = 0.54 - 0.46 cos(2 pi n / (L - 1))"""
    return np.hamming(length)


def frame_signal(signal: AudioSignal, config: FrontendConfig) -> np.ndarray:
    """
    Нарезать сигнал на кадры [kH, kH + L) и умножить на окно Хэмминга.

    Returns:
        np.ndarray shape (n_frames, L); n_frames = floor((len - L) / H) + 1 или 0
    """
    length = config.frame_length
    hop = config.hop_length
    x = signal.samples

    if len(x) < length:
        return np.zeros((0, length))

    frames = sliding_window_view(x, length)[::hop]
    return frames * hamming_window(length)


def extract_features(signal: AudioSignal, config: FrontendConfig, source_id: str = "") -> FeatureSequence:
    """
    Полный конвейер LPCC.

    Кадры, отвергнутые рекурсией Левинсона-Дарбина, пропускаются.
    """
    emphasized = preemphasize(signal, config.preemphasis_coeff)
    frames = frame_signal(emphasized, config)

    vectors = []
    dropped = 0
    for frame in frames:
        try:
            r = autocorrelate(frame, config.lpc_order)
            a, _ = levinson_durbin(r)
        except VqcmError as e:
            dropped += 1
            logger.debug(f"{source_id}: кадр отброшен ({e})")
            continue
        vectors.append(lpc_to_cepstrum(a, config.cepstral_order_p1))

    if dropped:
        logger.debug(f"{source_id}: отброшено {dropped}/{len(frames)} кадров")

    if not vectors:
        raise EmptyFeaturesError(f"Нет пригодных кадров (всего кадров: {len(frames)})", path=source_id or None)

    return FeatureSequence(np.vstack(vectors), source_id)


def dump_features_csv(features: FeatureSequence, path: Union[str, Path]):
    """Отладочный дамп: одна строка на кадр, столбцы c1..cP1"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = ",".join(f"c{i + 1}" for i in range(features.dim))
    np.savetxt(path, features.vectors, delimiter=",", header=header, comments="", fmt="%.17g")
