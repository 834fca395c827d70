"""
Чтение и запись аудио: PCM WAV (моно, 8/16 бит) и "сырой" A-law без заголовка
"""
from io import BytesIO
from pathlib import Path
from typing import Union

import numpy as np
from loguru import logger
from scipy.io import wavfile

from database.models import AudioSignal
from utils.errors import (
    MalformedHeaderError,
    MultiChannelError,
    UnsupportedEncodingError,
)
from utils.helpers import atomic_write_bytes
from .alaw import alaw_decode, alaw_encode

PathLike = Union[str, Path]

AUDIO_FORMATS = ("wav", "alaw")


def read_wav(path: PathLike) -> AudioSignal:
    """
    Прочитать моно PCM WAV и нормировать отсчеты в [-1, 1].

    16 бит делится на 32768, 8 бит (беззнаковый) приводится как (x - 128) / 128.
    """
    path = str(path)
    try:
        sample_rate, data = wavfile.read(path)
    except OSError:
        raise
    except ValueError as e:
        message = str(e)
        if "Unknown wave file format" in message or "Unsupported" in message:
            raise UnsupportedEncodingError(f"Неподдерживаемая кодировка: {message}", path=path)
        raise MalformedHeaderError(f"Некорректный заголовок WAV: {message}", path=path)
    except Exception as e:
        raise MalformedHeaderError(f"Некорректный заголовок WAV: {e}", path=path)

    if data.ndim != 1:
        raise MultiChannelError(f"Ожидается моно, каналов: {data.shape[1]}", path=path)

    if data.dtype == np.int16:
        samples = data.astype(np.float64) / 32768.0
    elif data.dtype == np.uint8:
        samples = (data.astype(np.float64) - 128.0) / 128.0
    else:
        raise UnsupportedEncodingError(f"Поддерживается только PCM 8/16 бит, получено {data.dtype}", path=path)

    logger.debug(f"Прочитан WAV {path}: {len(samples)} отсчетов, {sample_rate} Гц")
    return AudioSignal(samples, int(sample_rate))


def write_wav(path: PathLike, signal: AudioSignal, sample_width: int = 2):
    """Записать моно PCM WAV (16 бит по умолчанию, 8 бит при sample_width=1)"""
    samples = signal.samples
    clipped = int(np.count_nonzero(np.abs(samples) > 1.0))
    if clipped:
        logger.warning(f"{path}: {clipped} отсчетов вне [-1, 1] ограничены")

    if sample_width == 2:
        data = np.clip(np.round(samples * 32768.0), -32768, 32767).astype(np.int16)
    elif sample_width == 1:
        data = (np.clip(np.round(samples * 128.0), -128, 127) + 128).astype(np.uint8)
    else:
        raise UnsupportedEncodingError(f"Ширина отсчета {sample_width} байт не поддерживается", path=str(path))

    buffer = BytesIO()
    wavfile.write(buffer, signal.sample_rate_hz, data)
    atomic_write_bytes(path, buffer.getvalue())


def read_alaw(path: PathLike) -> AudioSignal:
    """Прочитать A-law без заголовка; частота всегда 8000 Гц"""
    return alaw_decode(Path(path).read_bytes())


def write_alaw(path: PathLike, signal: AudioSignal):
    """Записать сигнал как поток кодов A-law"""
    atomic_write_bytes(path, alaw_encode(signal))


def read_audio(path: PathLike, audio_format: str = "wav") -> AudioSignal:
    """Прочитать файл в указанном формате (wav или alaw)"""
    if audio_format == "wav":
        return read_wav(path)
    if audio_format == "alaw":
        return read_alaw(path)
    raise UnsupportedEncodingError(f"Неизвестный формат {audio_format!r}", path=str(path))


def guess_format(path: PathLike) -> str:
    """Определить формат по расширению: .wav -> wav, остальное -> alaw"""
    return "wav" if Path(path).suffix.lower() == ".wav" else "alaw"
