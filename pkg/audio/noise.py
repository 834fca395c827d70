"""
Добавление белого гауссовского шума с заданным SNR
"""
import math

import numpy as np
from loguru import logger

from database.models import AudioSignal, NoiseSpec
from utils.errors import UndefinedSnrError


def check_snr(snr_db: float) -> float:
    """SNR должен быть конечным числом или +inf"""
    if math.isnan(snr_db) or snr_db == -math.inf:
        raise UndefinedSnrError(f"Недопустимый SNR: {snr_db}")
    return snr_db


def add_noise(signal: AudioSignal, spec: NoiseSpec) -> AudioSignal:
    """
    Добавить шум так, чтобы SNR по всей фразе равнялся spec.snr_db.

    sigma^2 = P_signal / 10^(snr/10), P_signal = средний квадрат отсчетов.
    При snr = inf сигнал возвращается без изменений.
    """
    if check_snr(spec.snr_db) == math.inf:
        return signal

    if len(signal) == 0:
        raise UndefinedSnrError("SNR не определен для пустого сигнала")

    signal_power = float(np.mean(signal.samples ** 2))
    if signal_power == 0.0:
        raise UndefinedSnrError("SNR не определен для нулевого сигнала")

    noise_power = signal_power / 10 ** (spec.snr_db / 10)
    rng = np.random.default_rng(spec.seed)
    noise = math.sqrt(noise_power) * rng.standard_normal(len(signal))

    logger.debug(f"Шум: SNR={spec.snr_db} дБ, sigma^2={noise_power:.3g}, seed={spec.seed}")
    return AudioSignal(signal.samples + noise, signal.sample_rate_hz)


def measure_snr_db(clean: AudioSignal, noisy: AudioSignal) -> float:
    """Фактический SNR по средним квадратам сигнала и разности"""
    noise = noisy.samples - clean.samples
    return 10 * math.log10(np.mean(clean.samples ** 2) / np.mean(noise ** 2))
