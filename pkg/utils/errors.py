"""
Исключения системы идентификации дикторов
"""
from typing import Optional


class VqcmError(Exception):
    """Базовое исключение для всех ошибок пакета"""

    def __init__(self, message: str, speaker_id: Optional[str] = None, path: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.speaker_id = speaker_id
        self.path = path

    def __str__(self) -> str:
        prefix = ""
        if self.speaker_id:
            prefix += f"[{self.speaker_id}] "
        if self.path:
            prefix += f"{self.path}: "
        return f"{prefix}{self.message}"


class ConfigError(VqcmError):
    """Недопустимые параметры конфигурации"""


# === Аудио ===

class AudioFormatError(VqcmError):
    """Ошибка чтения аудиофайла"""


class MalformedHeaderError(AudioFormatError):
    """Поврежденный заголовок WAV"""


class MultiChannelError(AudioFormatError):
    """Поддерживается только моно"""


class UnsupportedEncodingError(AudioFormatError):
    """Кодировка, отличная от PCM 8/16 бит"""


class UndefinedSnrError(VqcmError):
    """SNR не определен для нулевого сигнала"""


# === DSP ===

class InvalidFrameError(VqcmError):
    """Кадр с r[0] <= 0"""


class InvalidAutocorrelationError(VqcmError):
    """Неположительная ошибка предсказания в рекурсии Левинсона-Дарбина"""


class EmptyFeaturesError(VqcmError):
    """Нет ни одного пригодного вектора признаков"""


# === Модели ===

class InsufficientDataError(VqcmError):
    """Недостаточно векторов для обучения"""


class EmptyClusterError(VqcmError):
    """Кластер остался пустым после восстановления"""


class DimensionMismatchError(VqcmError):
    """Несовпадение размерностей"""


class SingularModelError(VqcmError):
    """Матрица не обращается даже после регуляризации"""


class UndecidableScoreError(VqcmError):
    """Схема требует расстояний, которых нет"""


class EmptyModelSetError(VqcmError):
    """Нет ни одной зарегистрированной модели"""


class UnstableFilterError(VqcmError):
    """Полюс фильтра вне единичного круга"""


# === Хранилище и корпус ===

class ModelVersionError(VqcmError):
    """Несовместимая версия файла модели"""


class ModelSchemaError(VqcmError):
    """Файл модели не соответствует схеме"""


class ModelDimensionError(ModelSchemaError):
    """Размерности заголовка и данных модели не согласованы"""


class ManifestError(VqcmError):
    """Ошибка манифеста корпуса"""


class EvaluationAbortedError(VqcmError):
    """Диктор потерял все данные, оценка прервана"""
