"""
Кодек G.711 A-law (8 бит/отсчет, 8 кГц)
"""
import numpy as np

from database.models import AudioSignal

ALAW_SAMPLE_RATE = 8000

# Верхние границы сегментов для 13-битной величины
_SEG_END = np.array([0x1F, 0x3F, 0x7F, 0xFF, 0x1FF, 0x3FF, 0x7FF, 0xFFF], dtype=np.int32)


def _build_decode_table() -> np.ndarray:
    """Таблица 256 кодов -> линейные значения в 16-битной шкале"""
    codes = np.arange(256, dtype=np.int32) ^ 0x55
    mantissa = (codes & 0x0F) << 4
    segment = (codes & 0x70) >> 4

    magnitude = np.where(segment == 0, mantissa + 8, mantissa + 0x108)
    magnitude = np.where(segment > 1, magnitude << np.maximum(segment - 1, 0), magnitude)

    # в A-law установленный знаковый бит означает положительное значение
    return np.where(codes & 0x80, magnitude, -magnitude).astype(np.int32)


_DECODE_TABLE = _build_decode_table()
_DECODE_TABLE_FLOAT = _DECODE_TABLE / 32768.0


def alaw_decode(codes: bytes) -> AudioSignal:
    """Расширить коды A-law до 13-битных величин, нормированных в [-1, 1]"""
    data = np.frombuffer(bytes(codes), dtype=np.uint8)
    return AudioSignal(_DECODE_TABLE_FLOAT[data], ALAW_SAMPLE_RATE)


def alaw_encode(signal: AudioSignal) -> bytes:
    """Сжать сигнал в A-law; 0.0 кодируется наименьшим неотрицательным уровнем"""
    samples = np.clip(signal.samples, -1.0, 1.0)
    pcm = np.clip(np.round(samples * 32768.0), -32768, 32767).astype(np.int32) >> 3

    positive = pcm >= 0
    mask = np.where(positive, 0xD5, 0x55)
    magnitude = np.where(positive, pcm, -pcm - 1)

    segment = np.searchsorted(_SEG_END, magnitude, side="left")
    shift = np.where(segment < 2, 1, segment)
    code = (np.minimum(segment, 7) << 4) | ((magnitude >> shift) & 0x0F)
    # переполнение сегмента: максимальный уровень
    code = np.where(segment >= 8, 0x7F, code)

    return (code ^ mask).astype(np.uint8).tobytes()
