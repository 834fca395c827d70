"""
Хранилище моделей дикторов: один JSON-файл на диктора (.vqcm.json)
"""
import json
from pathlib import Path
from typing import Union

from loguru import logger

import config
from utils.errors import ModelDimensionError, ModelSchemaError, ModelVersionError, VqcmError
from utils.helpers import atomic_write_text
from .models import SpeakerModel

FORMAT_VERSION = 1

PathLike = Union[str, Path]

_REQUIRED_KEYS = ("format_version", "speaker_id", "method", "config", "codebook", "clusters")


def _encode(model: SpeakerModel) -> str:
    """Канонический JSON: сортированные ключи, float в кратчайшей точной записи"""
    payload = {"format_version": FORMAT_VERSION, **model.to_dict()}
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def _check_payload(data: dict, path: str):
    """Проверить версию и согласованность размерностей до сборки модели"""
    if not isinstance(data, dict):
        raise ModelSchemaError("Корень файла модели должен быть объектом", path=path)

    version = data.get("format_version")
    if version != FORMAT_VERSION:
        raise ModelVersionError(f"Версия формата {version!r}, поддерживается {FORMAT_VERSION}", path=path)

    missing = [key for key in _REQUIRED_KEYS if key not in data]
    if missing:
        raise ModelSchemaError(f"Нет полей: {', '.join(missing)}", path=path)

    if not isinstance(data["config"], dict):
        raise ModelSchemaError("Поле config должно быть объектом", path=path)
    if data["codebook"] is not None and not isinstance(data["codebook"], dict):
        raise ModelSchemaError("Поле codebook должно быть объектом или null", path=path)
    if not isinstance(data["clusters"], list) or not all(isinstance(c, dict) for c in data["clusters"]):
        raise ModelSchemaError("Поле clusters должно быть списком объектов", path=path)

    p1 = data["config"].get("cepstral_order_p1")
    p2 = data["config"].get("covariance_order_p2")

    codebook = data["codebook"]
    if codebook is not None:
        centroids = codebook.get("centroids") or []
        bits = codebook.get("bits")
        if not isinstance(bits, int) or len(centroids) != 2 ** bits:
            raise ModelSchemaError(f"Число центроидов {len(centroids)} != 2^bits (bits={bits})", path=path)
        if any(len(c) != p1 for c in centroids):
            raise ModelDimensionError(f"Центроиды не совпадают с P1={p1}", path=path)
        if data["method"] == "vqcm" and len(data["clusters"]) != len(centroids):
            raise ModelSchemaError(
                f"Число кластеров {len(data['clusters'])} != 2^bits = {len(centroids)}", path=path)

    for index, cluster in enumerate(data["clusters"]):
        dim = cluster.get("dim")
        if dim != p2 or len(cluster.get("mean", [])) != dim or len(cluster.get("matrix", [])) != dim \
                or any(len(row) != dim for row in cluster["matrix"]):
            raise ModelDimensionError(f"Кластер {index}: размерность не совпадает с P2={p2}", path=path)


def save_model(model: SpeakerModel, path: PathLike):
    """Сохранить модель (запись через временный файл и переименование)"""
    atomic_write_text(path, _encode(model))
    logger.debug(f"Модель {model.speaker_id} сохранена: {path}")


def load_model(path: PathLike) -> SpeakerModel:
    """Загрузить модель с проверкой версии и схемы"""
    path = str(path)
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except json.JSONDecodeError as e:
        raise ModelSchemaError(f"Некорректный JSON: {e}", path=path)

    try:
        _check_payload(data, path)
    except (TypeError, AttributeError) as e:
        raise ModelSchemaError(f"Файл не соответствует схеме: {e}", path=path)
    try:
        return SpeakerModel.from_dict(data)
    except VqcmError as e:
        raise ModelSchemaError(e.message, e.speaker_id, path)
    except (KeyError, TypeError, ValueError) as e:
        raise ModelSchemaError(f"Файл не соответствует схеме: {e}", path=path)


class ModelStore:
    """Каталог с моделями дикторов"""

    def __init__(self, directory: PathLike):
        self.directory = Path(directory)

    def path_for(self, speaker_id: str) -> Path:
        return self.directory / f"{speaker_id}{config.MODEL_SUFFIX}"

    def save(self, model: SpeakerModel) -> Path:
        """Сохранить модель диктора"""
        path = self.path_for(model.speaker_id)
        save_model(model, path)
        return path

    def list_paths(self) -> list[Path]:
        return sorted(self.directory.glob(f"*{config.MODEL_SUFFIX}"))

    def load_all(self) -> list[SpeakerModel]:
        """Загрузить все модели каталога (в порядке имен файлов)"""
        models = [load_model(path) for path in self.list_paths()]
        logger.info(f"Загружено моделей: {len(models)} из {self.directory}")
        return models
