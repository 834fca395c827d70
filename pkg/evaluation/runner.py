"""
Оценка идентификации: регистрация на train, зашумление и распознавание test,
сетка (метод, SNR, схема)
"""
import math
import platform
import time
from typing import Optional

import numpy as np
import scipy
import sklearn
from joblib import Parallel, delayed
from loguru import logger
from sklearn.metrics import accuracy_score, confusion_matrix

import config
from audio.io import read_audio
from audio.noise import add_noise, check_snr
from classifiers.fusion import SchemeLike, identify, resolve_scheme, scheme_name
from classifiers.speaker_classifier import MethodSpec, SpeakerClassifier
from corpus.manifest import check_runnable
from database.models import (
    AudioSignal,
    CellResult,
    CorpusManifest,
    EntryFailure,
    EvaluationReport,
    FeatureSequence,
    FrontendConfig,
    FusionScheme,
    Method,
    NoiseSpec,
    ScoreVector,
    SpeakerModel,
)
from frontend.extractor import extract_features
from utils.errors import EvaluationAbortedError, UndecidableScoreError, VqcmError
from utils.helpers import derive_seed, format_snr

# метка решения для фраз без решения; в confusion_matrix не попадает
UNDECIDED = ""


def scheme_applies(scheme: SchemeLike, method: Method, n_clusters: int) -> bool:
    """Имеет ли схема смысл для метода: vq требует d_0, sum-cm требует d_i"""
    has_d0 = method in (Method.VQ, Method.VQCM)
    has_di = n_clusters > 0
    if isinstance(scheme, int):
        return has_d0 if scheme == 0 else scheme <= n_clusters
    if scheme == FusionScheme.VQ_ONLY:
        return has_d0
    if scheme in (FusionScheme.SUM_CM, FusionScheme.CM_ONLY_GLOBAL):
        return has_di
    return True


def _score_entry(classifier: SpeakerClassifier, features: FeatureSequence, models: list[SpeakerModel]):
    """Оценка одной фразы; ошибка возвращается, а не выбрасывается"""
    try:
        return classifier.score_all(features, models), None
    except VqcmError as e:
        return None, e


class EvaluationRunner:
    """
    Прогон сетки оценки по манифесту.

    Признаки обучающих фраз кешируются по FrontendConfig, признаки тестовых -
    по (FrontendConfig, SNR): методы с одинаковым фронтендом используют одни
    и те же зашумленные фразы.
    """

    def __init__(
        self,
        manifest: CorpusManifest,
        method_specs: list[MethodSpec],
        snrs: list[float],
        schemes: list[str],
        noise_seed: int = config.NOISE_SETTINGS["seed"],
        n_jobs: Optional[int] = None,
        z_norm: bool = config.FUSION_SETTINGS["z_norm"],
        per_classifier: bool = True,
    ):
        if not method_specs:
            raise EvaluationAbortedError("Не задан ни один метод")
        if not snrs:
            raise EvaluationAbortedError("Не задан ни один SNR")
        self.manifest = manifest
        self.method_specs = list({spec.label: spec for spec in method_specs}.values())
        self.snrs = [check_snr(snr_db) for snr_db in snrs]
        self.schemes = [resolve_scheme(name) for name in schemes]
        self.noise_seed = noise_seed
        self.n_jobs = n_jobs if n_jobs is not None else config.EVAL_SETTINGS["n_jobs"]
        self.z_norm = z_norm
        self.per_classifier = per_classifier

        self.speakers = manifest.speakers
        self.signals: dict[int, AudioSignal] = {}
        self.failures: list[EntryFailure] = []
        self._feature_cache: dict[tuple, Optional[FeatureSequence]] = {}
        self.stats = {
            "entries": len(manifest.entries),
            "trials": 0,
            "cells": 0,
            "failures": 0,
        }

    def _fail(self, index: int, stage: str, error: Exception):
        entry = self.manifest.entries[index]
        message = getattr(error, "message", str(error))
        self.failures.append(EntryFailure(entry.speaker_id, entry.path, stage, type(error).__name__, message))
        self.stats["failures"] += 1
        logger.error(f"[{entry.speaker_id}] {entry.path}: {stage}: {type(error).__name__}: {message}")

    def _load_audio(self):
        """Прочитать все записи манифеста; ошибки фиксируются по записям"""
        for index, entry in enumerate(self.manifest.entries):
            try:
                self.signals[index] = read_audio(entry.path, entry.format)
            except (VqcmError, OSError) as e:
                self._fail(index, "read", e)

    def _features(self, index: int, frontend: FrontendConfig, snr_db: float = math.inf) -> Optional[FeatureSequence]:
        """Признаки записи index при данном SNR (None, если запись непригодна)"""
        key = (frontend, snr_db, index)
        if key in self._feature_cache:
            return self._feature_cache[key]

        features = None
        signal = self.signals.get(index)
        if signal is not None:
            entry = self.manifest.entries[index]
            try:
                noisy = add_noise(signal, NoiseSpec(snr_db, derive_seed(self.noise_seed, index)))
                features = extract_features(noisy, frontend, entry.path)
            except VqcmError as e:
                self._fail(index, f"features@{format_snr(snr_db)}", e)

        self._feature_cache[key] = features
        return features

    def _indices(self, split: str, speaker_id: Optional[str] = None) -> list[int]:
        return [
            i for i, e in enumerate(self.manifest.entries)
            if e.split == split and (speaker_id is None or e.speaker_id == speaker_id)
        ]

    def _enroll(self, spec: MethodSpec, classifier: SpeakerClassifier) -> list[SpeakerModel]:
        """Модели всех дикторов; потеря диктора прерывает прогон"""
        models = []
        for speaker in self.speakers:
            train = [self._features(i, spec.frontend) for i in self._indices("train", speaker)]
            train = [f for f in train if f is not None]
            if not train:
                raise EvaluationAbortedError(f"{spec.label}: не осталось обучающих данных", speaker)
            try:
                models.append(classifier.enroll(speaker, FeatureSequence.concatenate(train, speaker)))
            except VqcmError as e:
                raise EvaluationAbortedError(f"{spec.label}: регистрация не удалась: {e}", speaker)
        return models

    def _schemes_for(self, spec: MethodSpec, n_clusters: int) -> list[SchemeLike]:
        schemes = list(self.schemes)
        if self.per_classifier and spec.method == Method.VQCM:
            schemes += [k for k in range(n_clusters + 1) if k not in schemes]
        applicable = [s for s in schemes if scheme_applies(s, spec.method, n_clusters)]
        skipped = [scheme_name(s) for s in schemes if s not in applicable]
        if skipped:
            logger.debug(f"{spec.label}: схемы {', '.join(skipped)} неприменимы, пропущены")
        return applicable

    def _decide(self, scores: list[ScoreVector], scheme: SchemeLike) -> str:
        try:
            return identify(scores, scheme, z_norm=self.z_norm)[0].speaker_id
        except UndecidableScoreError:
            return UNDECIDED

    def _tally(self, label: str, snr_db: float, scheme: SchemeLike,
               truth: list[str], scored: list[list[ScoreVector]]) -> CellResult:
        predicted = [self._decide(scores, scheme) for scores in scored]
        undecided = predicted.count(UNDECIDED)
        if undecided:
            logger.warning(f"{label} @ {format_snr(snr_db)} дБ, {scheme_name(scheme)}: {undecided} фраз без решения")

        matrix = confusion_matrix(truth, predicted, labels=self.speakers)
        correct = int(round(accuracy_score(truth, predicted) * len(truth))) if truth else 0
        return CellResult(
            method=label,
            snr_db=snr_db,
            scheme=scheme_name(scheme),
            correct=correct,
            total=len(truth),
            confusion=matrix.tolist(),
            undecided=undecided,
        )

    def _evaluate_method(self, spec: MethodSpec, report: EvaluationReport):
        classifier = SpeakerClassifier(spec)

        started = time.perf_counter()
        models = self._enroll(spec, classifier)
        enroll_s = time.perf_counter() - started

        n_clusters = len(models[0].clusters)
        schemes = self._schemes_for(spec, n_clusters)
        test_s = 0.0

        for snr_db in self.snrs:
            indices = []
            tests = []
            for index in self._indices("test"):
                features = self._features(index, spec.frontend, snr_db)
                if features is not None:
                    indices.append(index)
                    tests.append(features)

            started = time.perf_counter()
            if self.n_jobs == 1 or len(tests) < 2:
                results = [_score_entry(classifier, test, models) for test in tests]
            else:
                results = Parallel(n_jobs=self.n_jobs)(
                    delayed(_score_entry)(classifier, test, models) for test in tests)
            test_s += time.perf_counter() - started

            truth = []
            scored = []
            for index, (scores, error) in zip(indices, results):
                if error is not None:
                    self._fail(index, f"score@{format_snr(snr_db)}", error)
                    continue
                truth.append(self.manifest.entries[index].speaker_id)
                scored.append(scores)

            for scheme in schemes:
                cell = self._tally(spec.label, snr_db, scheme, truth, scored)
                report.cells.append(cell)
                self.stats["cells"] += 1
                logger.info(
                    f"{spec.label} @ {format_snr(snr_db)} дБ, {cell.scheme}: "
                    f"{cell.correct}/{cell.total} = {cell.rate:.3f}")
            self.stats["trials"] += len(truth)

        report.parameter_counts[spec.label] = spec.parameter_count
        report.timings[spec.label] = {"enroll_s": enroll_s, "test_s": test_s}

    def _metadata(self) -> dict:
        return {
            "version": config.__version__,
            "python": platform.python_version(),
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "sklearn": sklearn.__version__,
            "methods": [spec.to_dict() for spec in self.method_specs],
            "snrs": [format_snr(s) for s in self.snrs],
            "schemes": [scheme_name(s) for s in self.schemes],
            "noise_seed": self.noise_seed,
            "z_norm": self.z_norm,
            "n_jobs": self.n_jobs,
            "n_speakers": len(self.speakers),
            "n_entries": len(self.manifest.entries),
        }

    def run(self) -> EvaluationReport:
        """Запустить прогон всей сетки"""
        started = time.perf_counter()
        logger.info("=" * 60)
        logger.info(f"Оценка: {len(self.speakers)} дикторов, {len(self.method_specs)} методов, "
                    f"SNR {', '.join(format_snr(s) for s in self.snrs)}")
        logger.info("=" * 60)

        broken = check_runnable(self.manifest)
        if broken:
            raise EvaluationAbortedError(f"Нет train или test записей у дикторов: {', '.join(broken)}")

        self._load_audio()
        for speaker in self.speakers:
            for split in ("train", "test"):
                if not any(i in self.signals for i in self._indices(split, speaker)):
                    raise EvaluationAbortedError(f"Не прочитан ни один {split} файл", speaker)

        report = EvaluationReport(speakers=list(self.speakers), metadata=self._metadata())
        for spec in self.method_specs:
            self._evaluate_method(spec, report)
        report.failures = list(self.failures)

        self._print_stats(report, time.perf_counter() - started)
        return report

    def _print_stats(self, report: EvaluationReport, elapsed_seconds: float):
        logger.info("=" * 60)
        logger.info("ИТОГИ ОЦЕНКИ")
        logger.info("=" * 60)
        logger.info(f"Время выполнения: {elapsed_seconds:.1f} секунд")
        logger.info(f"Записей в манифесте: {self.stats['entries']}, ячеек сетки: {self.stats['cells']}")
        for label in report.methods:
            best = max((c for c in report.cells if c.method == label), key=lambda c: c.rate)
            logger.info(f"   {label}: {report.parameter_counts[label]} параметров, "
                        f"лучшая точность {best.rate:.3f} ({best.scheme} @ {format_snr(best.snr_db)} дБ)")
        if self.stats["failures"]:
            logger.warning(f"Ошибок по записям: {self.stats['failures']}")
        logger.info("=" * 60)


def run_evaluation(
    manifest: CorpusManifest,
    method_specs: list[MethodSpec],
    snrs: list[float],
    schemes: list[str],
    noise_seed: int = config.NOISE_SETTINGS["seed"],
    n_jobs: Optional[int] = None,
    z_norm: bool = config.FUSION_SETTINGS["z_norm"],
    per_classifier: bool = True,
) -> EvaluationReport:
    """
    Оценить методы на манифесте.

    Returns:
        EvaluationReport: точности по ячейкам (метод, SNR, схема), число
        параметров, матрицы ошибок, ошибки по записям и метаданные прогона
    """
    runner = EvaluationRunner(manifest, method_specs, snrs, schemes, noise_seed, n_jobs, z_norm, per_classifier)
    return runner.run()
