"""
Отчеты оценки: CSV для машин и выровненные текстовые таблицы для людей
"""
import csv
import io
import json
from pathlib import Path
from typing import Optional, Union

from loguru import logger

from database.models import CellResult, EvaluationReport
from utils.helpers import atomic_write_text, format_snr

PathLike = Union[str, Path]

RESULT_FIELDS = ("method", "snr_db", "scheme", "correct", "total", "rate", "undecided", "parameters")
CONFUSION_FIELDS = ("method", "snr_db", "scheme", "true_speaker", "predicted_speaker", "count")
FAILURE_FIELDS = ("speaker_id", "path", "stage", "error", "message")

# порядок предпочтения схемы для сводных таблиц
_GRID_SCHEMES = ("sum-all", "vq", "cm", "d1", "median")


def _csv_text(fields: tuple, rows: list) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(fields)
    writer.writerows(rows)
    return buffer.getvalue()


def _percent(rate: Optional[float]) -> str:
    return "-" if rate is None else f"{100 * rate:.1f}"


def _align(header: list[str], rows: list[list[str]]) -> str:
    """Таблица с колонками, выровненными по ширине"""
    widths = [max(len(str(row[i])) for row in [header] + rows) for i in range(len(header))]
    lines = ["  ".join(str(cell).rjust(width) for cell, width in zip(header, widths))]
    lines.append("  ".join("-" * width for width in widths))
    for row in rows:
        lines.append("  ".join(str(cell).rjust(width) for cell, width in zip(row, widths)))
    return "\n".join(lines) + "\n"


def _cells(report: EvaluationReport, method: str) -> list[CellResult]:
    return [c for c in report.cells if c.method == method]


def _grid_cell(report: EvaluationReport, method: str, snr_db: float) -> Optional[CellResult]:
    """Ячейка для сводной таблицы: первая доступная схема из _GRID_SCHEMES"""
    cells = {c.scheme: c for c in _cells(report, method) if c.snr_db == snr_db}
    for scheme in _GRID_SCHEMES:
        if scheme in cells:
            return cells[scheme]
    return next(iter(cells.values()), None)


def format_method_table(report: EvaluationReport, method: str) -> str:
    """Точность (%) метода: строки - SNR, столбцы - схемы"""
    cells = _cells(report, method)
    schemes = list(dict.fromkeys(c.scheme for c in cells))
    snrs = list(dict.fromkeys(c.snr_db for c in cells))
    by_key = {(c.snr_db, c.scheme): c for c in cells}

    rows = []
    for snr_db in snrs:
        row = [format_snr(snr_db)]
        for scheme in schemes:
            cell = by_key.get((snr_db, scheme))
            row.append(_percent(cell.rate if cell else None))
        rows.append(row)

    lines = [
        f"Метод: {method}",
        f"Параметров: {report.parameter_counts.get(method, '-')}",
        "",
        _align(["SNR, дБ"] + schemes, rows),
    ]
    return "\n".join(lines)


def format_summary(report: EvaluationReport) -> str:
    """
    Сравнение методов: параметры, точность при первом SNR и время фаз.

    Время - телеметрия конкретного запуска, с числом параметров не связано.
    """
    rows = []
    for method in report.methods:
        snr_db = _cells(report, method)[0].snr_db
        cell = _grid_cell(report, method, snr_db)
        timing = report.timings.get(method, {})
        rows.append([
            method,
            str(report.parameter_counts.get(method, "-")),
            f"{_percent(cell.rate)} ({cell.scheme}, {format_snr(snr_db)} дБ)",
            f"{timing.get('enroll_s', 0.0):.2f}",
            f"{timing.get('test_s', 0.0):.2f}",
        ])
    header = ["Метод", "Параметры", "Точность, %", "Регистрация, с", "Тест, с"]
    return _align(header, rows)


def format_snr_grid(report: EvaluationReport) -> str:
    """Точность (%) по SNR для всех методов и строка "Параметры" внизу"""
    methods = report.methods
    snrs = list(dict.fromkeys(c.snr_db for c in report.cells))

    rows = []
    for snr_db in snrs:
        row = [format_snr(snr_db)]
        for method in methods:
            cell = _grid_cell(report, method, snr_db)
            row.append(_percent(cell.rate if cell else None))
        rows.append(row)
    rows.append(["Параметры"] + [str(report.parameter_counts.get(m, "-")) for m in methods])
    return _align(["SNR, дБ"] + methods, rows)


def write_run_metadata(out_dir: PathLike, metadata: dict) -> Path:
    """run_metadata.json: все параметры, необходимые для повтора запуска"""
    path = Path(out_dir) / "run_metadata.json"
    atomic_write_text(path, json.dumps(metadata, sort_keys=True, indent=2, ensure_ascii=False, default=str) + "\n")
    return path


def write_report(report: EvaluationReport, out_dir: PathLike, extra_metadata: Optional[dict] = None) -> list[Path]:
    """
    Записать отчет в out_dir.

    Файлы: <метод>.csv и <метод>.txt на каждый метод, confusion.csv,
    summary.txt, snr_grid.txt, failures.csv (если были ошибки) и
    run_metadata.json.

    Returns:
        list[Path]: записанные файлы
    """
    out_dir = Path(out_dir)
    written = []

    for method in report.methods:
        parameters = report.parameter_counts.get(method, "")
        rows = [
            [c.method, format_snr(c.snr_db), c.scheme, c.correct, c.total, f"{c.rate:.6f}", c.undecided, parameters]
            for c in _cells(report, method)
        ]
        csv_path = out_dir / f"{method}.csv"
        atomic_write_text(csv_path, _csv_text(RESULT_FIELDS, rows))
        txt_path = out_dir / f"{method}.txt"
        atomic_write_text(txt_path, format_method_table(report, method))
        written += [csv_path, txt_path]

    confusion_rows = []
    for cell in report.cells:
        for i, true_speaker in enumerate(report.speakers):
            for j, predicted in enumerate(report.speakers):
                count = cell.confusion[i][j] if cell.confusion else 0
                if count:
                    confusion_rows.append(
                        [cell.method, format_snr(cell.snr_db), cell.scheme, true_speaker, predicted, count])
    path = out_dir / "confusion.csv"
    atomic_write_text(path, _csv_text(CONFUSION_FIELDS, confusion_rows))
    written.append(path)

    path = out_dir / "summary.txt"
    atomic_write_text(path, format_summary(report))
    written.append(path)

    path = out_dir / "snr_grid.txt"
    atomic_write_text(path, format_snr_grid(report))
    written.append(path)

    if report.failures:
        path = out_dir / "failures.csv"
        rows = [[f.speaker_id, f.path, f.stage, f.error, f.message] for f in report.failures]
        atomic_write_text(path, _csv_text(FAILURE_FIELDS, rows))
        written.append(path)

    metadata = {
        **report.metadata,
        **(extra_metadata or {}),
        "parameter_counts": report.parameter_counts,
        "timings_s": report.timings,
        "failures": len(report.failures),
    }
    written.append(write_run_metadata(out_dir, metadata))

    logger.info(f"Отчет записан в {out_dir} ({len(written)} файлов)")
    return written
