#!/usr/bin/env python
"""
Зависимость точности от минимальной разницы углов полюсов между дикторами.

Для каждого значения margin синтезируется корпус, затем оценивается VQ-CM.
При margin -> 0 дикторы становятся неразличимыми и точность падает к 1/n.

Использование:
    python scripts/margin_sweep.py [--margins 0.06,0.03,0.01,0] [--n-speakers 10] [--train-s 20]

Примеры:
    # Быстрый прогон на коротком корпусе
    python scripts/margin_sweep.py --train-s 10 --margins 0.06,0.01,0
"""
import argparse
import csv
import io
import sys
from datetime import datetime
from pathlib import Path

# Добавляем корень проекта в путь для импортов
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from loguru import logger

import config
from utils.helpers import atomic_write_text, parse_float_list

# Настройка логирования
logger.remove()
logger.add(
    sys.stdout,
    format="<green>{time:HH:mm:ss}</green> | <level>{level: <8}</level> | <level>{message}</level>",
    level="INFO"
)

logs_dir = project_root / config.LOG_DIR
logs_dir.mkdir(exist_ok=True)

logger.add(
    str(logs_dir / f"margin_sweep_{datetime.now().strftime('%Y%m%d_%H%M%S')}.log"),
    format="{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {message}",
    level="DEBUG"
)


def parse_args():
    parser = argparse.ArgumentParser(
        description="Точность VQ-CM при уменьшении разницы полюсов между дикторами"
    )
    parser.add_argument(
        "--margins",
        type=str,
        default="0.06,0.04,0.02,0.01,0.005,0",
        help="Список минимальных разниц углов, рад (default: 0.06,...,0)"
    )
    parser.add_argument("--n-speakers", type=int, default=config.CORPUS_SETTINGS["n_speakers"])
    parser.add_argument("--train-s", type=float, default=20.0, help="Длительность обучения, с (default: 20)")
    parser.add_argument("--n-test", type=int, default=config.CORPUS_SETTINGS["n_test"])
    parser.add_argument("--test-s", type=float, default=config.CORPUS_SETTINGS["test_s"])
    parser.add_argument("--seed", type=int, default=config.CORPUS_SETTINGS["seed"])
    parser.add_argument("--bits", type=int, default=1, help="Размер кодовой книги VQ-CM (default: 1)")
    parser.add_argument("--scheme", type=str, default="sum-all")
    parser.add_argument(
        "--out",
        type=str,
        default=str(Path(config.OUTPUT_DIR) / "margin_sweep"),
        help="Каталог для корпусов и margin_sweep.csv"
    )
    return parser.parse_args()


def main():
    args = parse_args()
    margins = parse_float_list(args.margins)

    logger.info("=" * 60)
    logger.info("Точность в зависимости от разницы полюсов")
    logger.info("=" * 60)
    logger.info(f"  - Дикторов: {args.n_speakers}, случайный уровень {1 / args.n_speakers:.3f}")
    logger.info(f"  - Значения margin: {margins}")

    from classifiers.speaker_classifier import initialize_classifier
    from corpus.synth import synth_corpus
    from evaluation.runner import run_evaluation
    from utils.errors import VqcmError

    spec = initialize_classifier("vqcm", bits=args.bits).spec
    out_dir = Path(args.out)
    rows = []

    for margin in margins:
        corpus_dir = out_dir / f"margin_{margin:g}"
        try:
            manifest = synth_corpus(
                corpus_dir,
                n_speakers=args.n_speakers,
                train_s=args.train_s,
                n_test=args.n_test,
                test_s=args.test_s,
                seed=args.seed,
                min_angle_margin=margin,
            )
            report = run_evaluation(manifest, [spec], [float("inf")], [args.scheme], per_classifier=False)
        except VqcmError as e:
            logger.error(f"margin={margin:g}: {e}")
            sys.exit(1)

        rate = report.rate(spec.label, float("inf"), args.scheme)
        rows.append([f"{margin:g}", f"{rate:.6f}"])
        logger.info(f"  margin={margin:g} -> точность {rate:.3f}")

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["min_angle_margin", "rate"])
    writer.writerows(rows)
    atomic_write_text(out_dir / "margin_sweep.csv", buffer.getvalue())

    logger.info("")
    logger.info(f"Результаты: {out_dir / 'margin_sweep.csv'}")


if __name__ == "__main__":
    main()
