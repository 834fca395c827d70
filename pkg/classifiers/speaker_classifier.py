"""
Классификатор дикторов с поддержкой методов VQ, CM и VQ-CM
"""
from dataclasses import dataclass, field

from loguru import logger

import config
from database.models import FeatureSequence, FrontendConfig, Method, ScoreVector, SpeakerModel
from evaluation.params import param_count_cm, param_count_vq, param_count_vqcm
from utils.errors import ConfigError
from .covariance import enroll_cm, sample_covariance, sphericity
from .vq import lbg_train, vq_distance
from .vqcm import enroll_vqcm, score_vqcm


@dataclass(frozen=True)
class MethodSpec:
    """Метод и его параметры; label используется в отчетах"""
    method: Method
    frontend: FrontendConfig = field(default_factory=FrontendConfig.from_settings)
    bits: int = config.VQ_SETTINGS["bits"]
    epsilon: float = config.VQ_SETTINGS["epsilon"]
    max_iters: int = config.VQ_SETTINGS["max_iters"]
    tol: float = config.VQ_SETTINGS["tol"]
    ridge: float = config.CM_SETTINGS["ridge"]

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        if self.bits < 0:
            raise ConfigError(f"bits должен быть >= 0, получено {self.bits}")

    @property
    def label(self) -> str:
        p1 = self.frontend.cepstral_order_p1
        p2 = self.frontend.covariance_order_p2
        if self.method == Method.VQ:
            return f"vq-b{self.bits}-p{p1}"
        if self.method == Method.CM:
            return f"cm-{p2}x{p2}"
        return f"vqcm-b{self.bits}-p{p1}-p2_{p2}"

    @property
    def parameter_count(self) -> int:
        p1 = self.frontend.cepstral_order_p1
        p2 = self.frontend.covariance_order_p2
        if self.method == Method.VQ:
            return param_count_vq(self.bits, p1)
        if self.method == Method.CM:
            return param_count_cm(p2)
        return param_count_vqcm(self.bits, p1, p2)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "method": self.method.value,
            "bits": self.bits,
            "epsilon": self.epsilon,
            "max_iters": self.max_iters,
            "tol": self.tol,
            "ridge": self.ridge,
            "frontend": self.frontend.to_dict(),
        }


def model_parameter_count(model: SpeakerModel) -> int:
    """Число параметров модели по формулам метода"""
    p1 = model.config.cepstral_order_p1
    p2 = model.config.covariance_order_p2
    if model.method == Method.VQ:
        return param_count_vq(model.bits, p1)
    if model.method == Method.CM:
        return param_count_cm(p2)
    return param_count_vqcm(model.bits, p1, p2)


class SpeakerClassifier:
    """
    Регистрация и оценка дикторов одним методом.
    Метод определяется MethodSpec (vq, cm или vqcm).
    """

    def __init__(self, spec: MethodSpec):
        self.spec = spec

    def enroll(self, speaker_id: str, train: FeatureSequence) -> SpeakerModel:
        """Построить модель диктора по обучающим векторам"""
        spec = self.spec
        p2 = spec.frontend.covariance_order_p2

        if spec.method == Method.VQ:
            codebook = lbg_train(train, spec.bits, epsilon=spec.epsilon, max_iters=spec.max_iters, tol=spec.tol)
            model = SpeakerModel(speaker_id, spec.frontend, Method.VQ, codebook, [])
        elif spec.method == Method.CM:
            model = SpeakerModel(speaker_id, spec.frontend, Method.CM, None, [enroll_cm(train, p2, spec.ridge)])
        else:
            model = enroll_vqcm(
                train, spec.bits, p2,
                speaker_id=speaker_id,
                frontend_config=spec.frontend,
                epsilon=spec.epsilon,
                max_iters=spec.max_iters,
                tol=spec.tol,
                ridge=spec.ridge,
            )

        logger.info(f"[{speaker_id}] {spec.label}: {len(train)} векторов, {model_parameter_count(model)} параметров")
        return model

    def score(self, test: FeatureSequence, model: SpeakerModel) -> ScoreVector:
        """Расстояния тестовой фразы до одной модели"""
        return score_model(test, model, self.spec.ridge)

    def score_all(self, test: FeatureSequence, models: list[SpeakerModel]) -> list[ScoreVector]:
        """Расстояния до всех моделей, порядок совпадает с models"""
        return [self.score(test, model) for model in models]


def score_model(test: FeatureSequence, model: SpeakerModel, ridge: float = config.CM_SETTINGS["ridge"]) -> ScoreVector:
    """Оценка по методу, записанному в модели"""
    if model.method == Method.VQ:
        return ScoreVector(model.speaker_id, vq_distance(test, model.codebook), [])
    if model.method == Method.CM:
        test_cov = sample_covariance(test.vectors, model.config.covariance_order_p2, ridge)
        return ScoreVector(model.speaker_id, None, [sphericity(test_cov, model.clusters[0])])
    return score_vqcm(test, model, ridge)


def initialize_classifier(method: str, **overrides) -> SpeakerClassifier:
    """
    Собрать классификатор из config с переопределениями.

    Args:
        method: "vq", "cm" или "vqcm"
        overrides: bits, p1, p2, lpc_order, epsilon, max_iters, tol, ridge
    """
    settings = {**config.VQ_SETTINGS, "ridge": config.CM_SETTINGS["ridge"]}
    settings.update({k: v for k, v in overrides.items() if v is not None})

    base = FrontendConfig.from_settings()
    p1 = settings.get("p1", base.cepstral_order_p1)
    frontend = base.with_orders(
        p1=p1,
        p2=settings.get("p2", base.covariance_order_p2),
        lpc_order=settings.get("lpc_order", max(base.lpc_order, p1)),
    )
    try:
        method = Method(method)
    except ValueError:
        raise ConfigError(f"Неизвестный метод: {method!r}")

    spec = MethodSpec(
        method=method,
        frontend=frontend,
        bits=settings["bits"],
        epsilon=settings["epsilon"],
        max_iters=settings["max_iters"],
        tol=settings["tol"],
        ridge=settings["ridge"],
    )
    return SpeakerClassifier(spec)
