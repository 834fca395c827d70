"""
Вспомогательные функции
"""
import math
import os
import tempfile
from pathlib import Path
from typing import Union

import numpy as np

from .errors import ConfigError


def parse_float_list(raw: str) -> list[float]:
    """Разобрать список через запятую: "inf,30,25" -> [inf, 30.0, 25.0]"""
    values = []
    for item in raw.split(","):
        item = item.strip().lower()
        if not item:
            continue
        if item in ("inf", "+inf", "infinity", "∞"):
            values.append(math.inf)
            continue
        try:
            values.append(float(item))
        except ValueError:
            raise ConfigError(f"Некорректное число в списке: {item!r}")
    return values


def parse_int_list(raw: str) -> list[int]:
    """Разобрать список целых через запятую"""
    values = []
    for item in raw.split(","):
        item = item.strip()
        if not item:
            continue
        try:
            values.append(int(item))
        except ValueError:
            raise ConfigError(f"Некорректное целое в списке: {item!r}")
    return values


def parse_name_list(raw: str) -> list[str]:
    """Разобрать список имен через запятую"""
    return [item.strip() for item in raw.split(",") if item.strip()]


def format_snr(snr_db: float) -> str:
    """Подпись SNR для отчетов"""
    return "inf" if math.isinf(snr_db) else f"{snr_db:g}"


def derive_seed(base_seed: int, *keys: int) -> int:
    """Детерминированно вывести 64-битное зерно из базового и ключей"""
    sequence = np.random.SeedSequence([int(base_seed), *[int(k) for k in keys]])
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def atomic_write_bytes(path: Union[str, Path], data: bytes):
    """Записать файл через временный файл и переименование"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise


def atomic_write_text(path: Union[str, Path], text: str):
    """Текстовый вариант atomic_write_bytes (UTF-8, переводы строк \\n)"""
    atomic_write_bytes(path, text.encode("utf-8"))
