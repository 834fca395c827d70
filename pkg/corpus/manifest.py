"""
Манифест корпуса: CSV с заголовком speaker_id,path,split,format
"""
import csv
import io
from pathlib import Path
from typing import Union

from loguru import logger

from audio.io import AUDIO_FORMATS
from database.models import CorpusManifest, ManifestEntry
from utils.errors import ManifestError
from utils.helpers import atomic_write_text

PathLike = Union[str, Path]

MANIFEST_FIELDS = ("speaker_id", "path", "split", "format")
SPLITS = ("train", "test")


def read_manifest(path: PathLike) -> CorpusManifest:
    """
    Прочитать манифест. Относительные пути разрешаются от каталога манифеста.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ManifestError(f"Не удалось прочитать манифест: {e}", path=str(path))

    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != MANIFEST_FIELDS:
        raise ManifestError(f"Ожидается заголовок {','.join(MANIFEST_FIELDS)}, получено {reader.fieldnames}",
                            path=str(path))

    entries = []
    for line_no, row in enumerate(reader, start=2):
        split = row["split"].strip()
        audio_format = (row["format"] or "wav").strip()
        if split not in SPLITS:
            raise ManifestError(f"Строка {line_no}: неизвестный split {split!r}", path=str(path))
        if audio_format not in AUDIO_FORMATS:
            raise ManifestError(f"Строка {line_no}: неизвестный формат {audio_format!r}", path=str(path))

        audio_path = Path(row["path"].strip())
        if not audio_path.is_absolute():
            audio_path = path.parent / audio_path
        entries.append(ManifestEntry(row["speaker_id"].strip(), str(audio_path), split, audio_format))

    logger.debug(f"Манифест {path}: {len(entries)} записей")
    return CorpusManifest(entries)


def write_manifest(manifest: CorpusManifest, path: PathLike, relative_to: PathLike = None):
    """Записать манифест; пути внутри relative_to записываются относительными"""
    base = Path(relative_to) if relative_to is not None else Path(path).parent
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(MANIFEST_FIELDS)
    for entry in manifest.entries:
        entry_path = Path(entry.path)
        try:
            entry_path = entry_path.relative_to(base)
        except ValueError:
            pass
        writer.writerow([entry.speaker_id, entry_path.as_posix(), entry.split, entry.format])
    atomic_write_text(path, buffer.getvalue())


def check_runnable(manifest: CorpusManifest) -> list[str]:
    """
    Проверить, что у каждого диктора есть хотя бы одна train и одна test запись.

    Returns:
        list[str]: дикторы без нужных записей (пустой список = манифест пригоден)
    """
    broken = []
    for speaker in manifest.speakers:
        if not manifest.split_entries("train", speaker) or not manifest.split_entries("test", speaker):
            broken.append(speaker)
    return broken
