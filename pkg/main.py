"""
Идентификация дикторов методами VQ, CM и VQ-CM

Запуск:
    python main.py synth    [--out DIR] [--seed N] [--alaw]
    python main.py enroll   MANIFEST --method vqcm --bits 1 --p2 10 [--out DIR]
    python main.py identify MODEL_DIR AUDIO [--scheme sum-all] [--snr 15 --noise-seed 7] [--csv]
    python main.py evaluate MANIFEST [--methods vq,cm,vqcm] [--snr inf,30,25,20,15] [--p2-sweep 2,4,6]
"""
import argparse
import math
import sys
from pathlib import Path
from typing import Optional

from loguru import logger

import config
from audio.io import AUDIO_FORMATS, guess_format, read_audio
from audio.noise import add_noise, check_snr
from classifiers.fusion import identify as rank_speakers
from classifiers.fusion import resolve_scheme, scheme_name
from classifiers.speaker_classifier import (
    MethodSpec,
    SpeakerClassifier,
    initialize_classifier,
    model_parameter_count,
    score_model,
)
from corpus.manifest import read_manifest
from corpus.synth import synth_corpus
from database.model_store import ModelStore
from database.models import FeatureSequence, FusionScheme, Method, NoiseSpec
from evaluation.runner import run_evaluation
from frontend.extractor import dump_features_csv, extract_features
from reports.report_writer import write_report, write_run_metadata
from utils.errors import ConfigError, EmptyModelSetError, ManifestError, VqcmError
from utils.helpers import format_snr, parse_float_list, parse_int_list, parse_name_list


def setup_logging(console_level: str = "INFO"):
    """Консоль + ежедневный файл в config.LOG_DIR"""
    logger.remove()
    logger.add(
        sys.stderr,
        format="<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | <level>{message}</level>",
        level=console_level,
    )
    logger.add(
        str(Path(config.LOG_DIR) / "vqcm_{time:YYYY-MM-DD}.log"),
        format="{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {message}",
        level="DEBUG",
        rotation="1 day",
        retention="30 days",
    )


def build_spec(method: str, bits: Optional[int] = None, p1: Optional[int] = None,
               p2: Optional[int] = None, lpc_order: Optional[int] = None) -> MethodSpec:
    """
    MethodSpec из флагов CLI.

    Для cm порядок матрицы задается --p2; P1 и порядок LPC при необходимости
    поднимаются до него (режим 20x20).
    """
    if method == Method.CM.value and p2 is not None:
        p1 = max(p1 or config.FRONTEND_SETTINGS["cepstral_order_p1"], p2)
    return initialize_classifier(method, bits=bits, p1=p1, p2=p2, lpc_order=lpc_order).spec


def _snr_value(raw: str) -> float:
    """Одно значение SNR для --snr (argparse type)"""
    try:
        values = parse_float_list(raw)
    except ConfigError as e:
        raise argparse.ArgumentTypeError(e.message)
    if len(values) != 1:
        raise argparse.ArgumentTypeError(f"ожидается одно значение SNR, получено {raw!r}")
    return values[0]


def _flags(args: argparse.Namespace) -> dict:
    return {key: value for key, value in vars(args).items() if key != "handler"}


def cmd_synth(args: argparse.Namespace) -> int:
    """Синтезировать корпус и манифест"""
    out_dir = Path(args.out)
    manifest = synth_corpus(
        out_dir,
        n_speakers=args.n_speakers,
        train_s=args.train_s,
        n_test=args.n_test,
        test_s=args.test_s,
        seed=args.seed,
        min_angle_margin=args.margin,
        alaw=args.alaw,
    )
    write_run_metadata(out_dir, {
        "command": "synth",
        "flags": _flags(args),
        "version": config.__version__,
        "corpus_settings": config.CORPUS_SETTINGS,
        "entries": len(manifest.entries),
    })
    print(out_dir / "manifest.csv")
    return 0


def cmd_enroll(args: argparse.Namespace) -> int:
    """Зарегистрировать всех дикторов манифеста, по одному файлу модели на диктора"""
    spec = build_spec(args.method, args.bits, args.p1, args.p2, args.lpc_order)
    manifest = read_manifest(args.manifest)

    for speaker in manifest.speakers:
        if not manifest.split_entries("train", speaker):
            raise ManifestError("Нет обучающих записей (split=train)", speaker, str(args.manifest))
    if not manifest.speakers:
        raise ManifestError("Манифест пуст", path=str(args.manifest))

    classifier = SpeakerClassifier(spec)
    store = ModelStore(args.out)

    logger.info("=" * 60)
    logger.info(f"Регистрация {len(manifest.speakers)} дикторов: {spec.label}")
    logger.info("=" * 60)

    for speaker in manifest.speakers:
        sequences = []
        for entry in manifest.split_entries("train", speaker):
            try:
                signal = read_audio(entry.path, entry.format)
                features = extract_features(signal, spec.frontend, entry.path)
            except VqcmError as e:
                e.speaker_id = e.speaker_id or speaker
                raise
            if args.dump_features:
                dump_features_csv(features, Path(args.dump_features) / speaker / f"{Path(entry.path).stem}.csv")
            sequences.append(features)

        try:
            model = classifier.enroll(speaker, FeatureSequence.concatenate(sequences, speaker))
        except VqcmError as e:
            e.speaker_id = e.speaker_id or speaker
            raise
        path = store.save(model)
        print(f"{speaker}\t{model_parameter_count(model)} параметров\t{path}")

    write_run_metadata(args.out, {
        "command": "enroll",
        "flags": _flags(args),
        "version": config.__version__,
        "method": spec.to_dict(),
        "parameters_per_model": spec.parameter_count,
    })
    logger.info(f"Сохранено моделей: {len(manifest.speakers)} в {args.out}")
    return 0


def cmd_identify(args: argparse.Namespace) -> int:
    """Ранжировать зарегистрированных дикторов для одной фразы"""
    scheme = resolve_scheme(args.scheme)
    check_snr(args.snr)
    models = ModelStore(args.model_dir).load_all()
    if not models:
        raise EmptyModelSetError("В каталоге нет моделей", path=str(args.model_dir))

    audio_format = args.format or guess_format(args.audio)
    signal = read_audio(args.audio, audio_format)
    if args.snr != math.inf:
        signal = add_noise(signal, NoiseSpec(args.snr, args.noise_seed))

    cache = {}
    scores = []
    for model in models:
        if model.config not in cache:
            cache[model.config] = extract_features(signal, model.config, str(args.audio))
        scores.append(score_model(cache[model.config], model))

    ranked = rank_speakers(scores, scheme, z_norm=args.z_norm)

    if args.csv:
        print("rank,speaker_id,score,votes")
        for rank, entry in enumerate(ranked, start=1):
            print(f"{rank},{entry.speaker_id},{entry.score!r},{entry.votes}")
    else:
        print(f"Схема: {scheme_name(scheme)}, SNR: {format_snr(args.snr)} дБ")
        for rank, entry in enumerate(ranked, start=1):
            flag = "*" if rank == 1 else " "
            votes = f"  голосов: {entry.votes}" if scheme == FusionScheme.VOTE else ""
            print(f"{flag} {rank:>3}  {entry.speaker_id:<20} {entry.score:.6f}{votes}")

    write_run_metadata(args.out, {
        "command": "identify",
        "flags": _flags(args),
        "version": config.__version__,
        "decision": ranked[0].speaker_id,
    })
    return 0


def _evaluation_specs(args: argparse.Namespace) -> list[MethodSpec]:
    """Методы сетки оценки по флагам --methods, --vq-bits, --cm-orders, --bits, --p2-sweep"""
    methods = parse_name_list(args.methods)
    unknown = [m for m in methods if m not in {m.value for m in Method}]
    if unknown:
        raise ConfigError(f"Неизвестные методы: {', '.join(unknown)}")

    specs = []
    if Method.VQ.value in methods:
        specs += [build_spec("vq", b, args.p1, None, args.lpc_order) for b in parse_int_list(args.vq_bits)]
    if Method.CM.value in methods:
        specs += [build_spec("cm", None, args.p1, p, args.lpc_order) for p in parse_int_list(args.cm_orders)]
    if Method.VQCM.value in methods:
        p2_values = parse_int_list(args.p2_sweep) if args.p2_sweep else [args.p2]
        for bits in parse_int_list(args.bits):
            specs += [build_spec("vqcm", bits, args.p1, p2, args.lpc_order) for p2 in p2_values]
    return specs


def cmd_evaluate(args: argparse.Namespace) -> int:
    """Прогнать сетку оценки и записать отчеты"""
    specs = _evaluation_specs(args)
    snrs = [check_snr(snr_db) for snr_db in parse_float_list(args.snr)]
    schemes = parse_name_list(args.schemes)
    for name in schemes:
        resolve_scheme(name)

    manifest = read_manifest(args.manifest)
    report = run_evaluation(
        manifest, specs, snrs, schemes,
        noise_seed=args.noise_seed,
        n_jobs=args.n_jobs,
        z_norm=args.z_norm,
    )
    write_report(report, args.out, {"command": "evaluate", "flags": _flags(args)})
    return 0 if not report.failures else 1


def parse_args(argv: Optional[list[str]] = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(description="Идентификация дикторов: VQ, CM, VQ-CM")
    subparsers = parser.add_subparsers(dest="command", required=True)
    output_dir = Path(config.OUTPUT_DIR)

    def add_orders(sub):
        sub.add_argument("--p1", type=int, default=None,
                         help=f"Порядок кепстра P1 (default: {config.FRONTEND_SETTINGS['cepstral_order_p1']})")
        sub.add_argument("--p2", type=int, default=None,
                         help=f"Порядок ковариации P2 (default: {config.FRONTEND_SETTINGS['covariance_order_p2']})")
        sub.add_argument("--lpc-order", type=int, default=None, help="Порядок LPC (default: max(16, P1))")

    synth = subparsers.add_parser("synth", help="Синтезировать корпус")
    synth.add_argument("--out", default=str(output_dir / "corpus"), help="Каталог корпуса")
    synth.add_argument("--n-speakers", type=int, default=config.CORPUS_SETTINGS["n_speakers"])
    synth.add_argument("--train-s", type=float, default=config.CORPUS_SETTINGS["train_s"])
    synth.add_argument("--n-test", type=int, default=config.CORPUS_SETTINGS["n_test"])
    synth.add_argument("--test-s", type=float, default=config.CORPUS_SETTINGS["test_s"])
    synth.add_argument("--seed", type=int, default=config.CORPUS_SETTINGS["seed"])
    synth.add_argument("--margin", type=float, default=config.CORPUS_SETTINGS["min_angle_margin"],
                       help="Минимальная разница углов полюсов между дикторами, рад")
    synth.add_argument("--alaw", action="store_true", help="Писать файлы A-law вместо WAV")
    synth.set_defaults(handler=cmd_synth)

    enroll = subparsers.add_parser("enroll", help="Зарегистрировать дикторов")
    enroll.add_argument("manifest", help="CSV манифест корпуса")
    enroll.add_argument("--method", choices=[m.value for m in Method], default=Method.VQCM.value)
    enroll.add_argument("--bits", type=int, default=None, help="Размер кодовой книги, бит (N0)")
    add_orders(enroll)
    enroll.add_argument("--out", default=str(output_dir / "models"), help="Каталог моделей")
    enroll.add_argument("--dump-features", default=None, help="Каталог для CSV-дампа признаков")
    enroll.set_defaults(handler=cmd_enroll)

    ident = subparsers.add_parser("identify", help="Идентифицировать фразу")
    ident.add_argument("model_dir", help="Каталог моделей")
    ident.add_argument("audio", help="Аудиофайл")
    ident.add_argument("--format", choices=AUDIO_FORMATS, default=None, help="Формат (default: по расширению)")
    ident.add_argument("--scheme", default=config.FUSION_SETTINGS["scheme"],
                       help="vq, cm, sum-all, sum-cm, median, vote или dK")
    ident.add_argument("--snr", type=_snr_value, default=math.inf, help="SNR, дБ")
    ident.add_argument("--noise-seed", type=int, default=config.NOISE_SETTINGS["seed"])
    ident.add_argument("--z-norm", action="store_true", help="Z-нормализация классификаторов")
    ident.add_argument("--csv", action="store_true", help="Машиночитаемый вывод")
    ident.add_argument("--out", default=str(output_dir / "identify"), help="Каталог для run_metadata.json")
    ident.set_defaults(handler=cmd_identify)

    evaluate = subparsers.add_parser("evaluate", help="Оценка точности по сетке")
    evaluate.add_argument("manifest", help="CSV манифест корпуса")
    evaluate.add_argument("--methods", default=config.EVAL_SETTINGS["methods"])
    evaluate.add_argument("--schemes", default=config.EVAL_SETTINGS["schemes"])
    evaluate.add_argument("--snr", default=config.NOISE_SETTINGS["snr_list"], help="Список SNR через запятую")
    evaluate.add_argument("--noise-seed", type=int, default=config.NOISE_SETTINGS["seed"])
    evaluate.add_argument("--vq-bits", default=config.EVAL_SETTINGS["vq_bits"], help="Размеры книг для vq")
    evaluate.add_argument("--bits", default=config.EVAL_SETTINGS["vqcm_bits"], help="Размеры книг для vqcm")
    evaluate.add_argument("--cm-orders", default=config.EVAL_SETTINGS["cm_orders"], help="Порядки матриц для cm")
    add_orders(evaluate)
    evaluate.add_argument("--p2-sweep", default=None, help="Список P2 для vqcm")
    evaluate.add_argument("--z-norm", action="store_true")
    evaluate.add_argument("--n-jobs", type=int, default=config.EVAL_SETTINGS["n_jobs"])
    evaluate.add_argument("--out", default=str(output_dir / "report"), help="Каталог отчетов")
    evaluate.set_defaults(handler=cmd_evaluate)

    return parser.parse_args(argv)


def main(argv: Optional[list[str]] = None) -> int:
    """Главная функция; возвращает код выхода"""
    args = parse_args(argv)
    setup_logging("WARNING" if getattr(args, "csv", False) else "INFO")
    try:
        return args.handler(args)
    except VqcmError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return 1
    except OSError as e:
        logger.error(f"Ошибка ввода-вывода: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
