"""
Модели данных системы идентификации дикторов

Соглашение о знаке LPC: A(z) = 1 - sum_{k=1..P} a_k z^{-k}, поэтому c_1 = a_1.
"""
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

import config
from utils.errors import ConfigError, ModelSchemaError, ModelDimensionError, UnstableFilterError


class Method(str, Enum):
    """Метод моделирования диктора"""
    VQ = "vq"
    CM = "cm"
    VQCM = "vqcm"


class FusionScheme(str, Enum):
    """Схема комбинирования N+1 классификаторов (значение = имя в CLI)"""
    VQ_ONLY = "vq"
    CM_ONLY_GLOBAL = "cm"
    SUM_ALL = "sum-all"
    SUM_CM = "sum-cm"
    MEDIAN_ALL = "median"
    VOTE = "vote"

    @classmethod
    def from_cli(cls, name: str) -> "FusionScheme":
        for scheme in cls:
            if scheme.value == name:
                return scheme
        raise ConfigError(f"Неизвестная схема комбинирования: {name!r}")


@dataclass
class AudioSignal:
    """Аудиосигнал с амплитудами, нормированными в [-1, 1]"""
    samples: np.ndarray
    sample_rate_hz: int = 8000

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.float64)
        if self.samples.ndim != 1:
            raise ConfigError("AudioSignal: ожидается одномерный массив отсчетов")
        if self.sample_rate_hz <= 0:
            raise ConfigError(f"AudioSignal: частота дискретизации {self.sample_rate_hz} <= 0")
        if not np.all(np.isfinite(self.samples)):
            raise ConfigError("AudioSignal: есть нечисловые отсчеты")

    def __len__(self) -> int:
        return len(self.samples)


@dataclass(frozen=True)
class FrontendConfig:
    """Параметры DSP и порядки P, P1, P2"""
    sample_rate_hz: int = 8000
    preemphasis_coeff: float = 0.95
    frame_ms: float = 30.0
    overlap_fraction: float = 2 / 3
    lpc_order: int = 16
    cepstral_order_p1: int = 16
    covariance_order_p2: int = 10

    def __post_init__(self):
        if self.sample_rate_hz <= 0:
            raise ConfigError(f"sample_rate_hz должен быть > 0, получено {self.sample_rate_hz}")
        if not 0 <= self.preemphasis_coeff < 1:
            raise ConfigError(f"preemphasis_coeff вне [0, 1): {self.preemphasis_coeff}")
        if not 0 <= self.overlap_fraction < 1:
            raise ConfigError(f"overlap_fraction вне [0, 1): {self.overlap_fraction}")
        if self.lpc_order < 1:
            raise ConfigError(f"lpc_order должен быть >= 1, получено {self.lpc_order}")
        if not 1 <= self.covariance_order_p2 <= self.cepstral_order_p1:
            raise ConfigError(
                f"Требуется 1 <= P2 <= P1, получено P2={self.covariance_order_p2}, "
                f"P1={self.cepstral_order_p1}")
        if self.frame_length < self.lpc_order + 1:
            raise ConfigError(
                f"Длина кадра {self.frame_length} меньше lpc_order + 1 = {self.lpc_order + 1}")
        if self.cepstral_order_p1 > self.frame_length - 1:
            raise ConfigError(
                f"P1={self.cepstral_order_p1} превышает предел {self.frame_length - 1}")
        if self.hop_length < 1:
            raise ConfigError("Шаг кадров получился нулевым, уменьшите overlap_fraction")

    @property
    def frame_length(self) -> int:
        """L = round(frame_ms * fs / 1000), 240 при 8 кГц / 30 мс"""
        return int(round(self.frame_ms * self.sample_rate_hz / 1000))

    @property
    def hop_length(self) -> int:
        """H = round(L * (1 - overlap)), 80 при перекрытии 2/3"""
        return int(round(self.frame_length * (1 - self.overlap_fraction)))

    def with_orders(self, p1: Optional[int] = None, p2: Optional[int] = None,
                    lpc_order: Optional[int] = None) -> "FrontendConfig":
        """Копия с другими порядками"""
        p1 = p1 if p1 is not None else self.cepstral_order_p1
        return FrontendConfig(
            sample_rate_hz=self.sample_rate_hz,
            preemphasis_coeff=self.preemphasis_coeff,
            frame_ms=self.frame_ms,
            overlap_fraction=self.overlap_fraction,
            lpc_order=lpc_order if lpc_order is not None else self.lpc_order,
            cepstral_order_p1=p1,
            covariance_order_p2=p2 if p2 is not None else self.covariance_order_p2,
        )

    def to_dict(self) -> dict:
        return {
            "sample_rate_hz": self.sample_rate_hz,
            "preemphasis_coeff": self.preemphasis_coeff,
            "frame_ms": self.frame_ms,
            "overlap_fraction": self.overlap_fraction,
            "lpc_order": self.lpc_order,
            "cepstral_order_p1": self.cepstral_order_p1,
            "covariance_order_p2": self.covariance_order_p2,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FrontendConfig":
        return cls(
            sample_rate_hz=int(data["sample_rate_hz"]),
            preemphasis_coeff=float(data["preemphasis_coeff"]),
            frame_ms=float(data["frame_ms"]),
            overlap_fraction=float(data["overlap_fraction"]),
            lpc_order=int(data["lpc_order"]),
            cepstral_order_p1=int(data["cepstral_order_p1"]),
            covariance_order_p2=int(data["covariance_order_p2"]),
        )

    @classmethod
    def from_settings(cls) -> "FrontendConfig":
        """Собрать из config.FRONTEND_SETTINGS"""
        return cls.from_dict(config.FRONTEND_SETTINGS)


@dataclass
class FeatureSequence:
    """Упорядоченные кепстральные векторы одной фразы, shape (n, P1)"""
    vectors: np.ndarray
    source_id: str = ""

    def __post_init__(self):
        self.vectors = np.asarray(self.vectors, dtype=np.float64)
        if self.vectors.ndim == 1 and self.vectors.size == 0:
            self.vectors = self.vectors.reshape(0, 0)
        if self.vectors.ndim != 2:
            raise ConfigError("FeatureSequence: ожидается матрица (n, P1)")
        if not np.all(np.isfinite(self.vectors)):
            raise ConfigError(f"FeatureSequence {self.source_id}: есть нечисловые значения")

    def __len__(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    @classmethod
    def concatenate(cls, sequences: list["FeatureSequence"], source_id: str = "") -> "FeatureSequence":
        """Склеить несколько последовательностей (например, все обучающие файлы диктора)"""
        if not sequences:
            return cls(np.zeros((0, 0)), source_id)
        return cls(np.vstack([s.vectors for s in sequences]), source_id)


@dataclass(eq=False)
class Codebook:
    """Кодовая книга VQ: 2^bits центроидов размерности P1"""
    centroids: np.ndarray
    bits: int
    training_distortion: float = 0.0
    # искажение по всем k-means проходам, по одному кортежу на фазу
    history: tuple = field(default=(), repr=False)

    def __post_init__(self):
        self.centroids = np.asarray(self.centroids, dtype=np.float64)
        if self.bits < 0:
            raise ModelSchemaError(f"bits должен быть >= 0, получено {self.bits}")
        if self.centroids.ndim != 2 or self.centroids.shape[0] != 2 ** self.bits:
            raise ModelSchemaError(
                f"Кодовая книга: ожидается {2 ** self.bits} центроидов, "
                f"получено {self.centroids.shape[0] if self.centroids.ndim == 2 else '?'}")
        if not np.all(np.isfinite(self.centroids)):
            raise ModelSchemaError("Кодовая книга: нечисловые центроиды")

    @property
    def size(self) -> int:
        return self.centroids.shape[0]

    @property
    def dim(self) -> int:
        return self.centroids.shape[1]

    def to_dict(self) -> dict:
        return {
            "bits": self.bits,
            "centroids": self.centroids.tolist(),
            "training_distortion": float(self.training_distortion),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Codebook":
        return cls(
            centroids=np.array(data["centroids"], dtype=np.float64),
            bits=int(data["bits"]),
            training_distortion=float(data["training_distortion"]),
        )


@dataclass(eq=False)
class ClusterAssignment:
    """Результат квантования: метки, заполненность кластеров, среднее искажение"""
    labels: np.ndarray
    per_cluster_counts: np.ndarray
    mean_distortion: float


@dataclass(eq=False)
class CovarianceModel:
    """Среднее и ковариационная матрица P2 x P2"""
    dim: int
    mean: np.ndarray
    matrix: np.ndarray
    sample_count: int
    regularized: bool = False

    def __post_init__(self):
        self.mean = np.asarray(self.mean, dtype=np.float64)
        self.matrix = np.asarray(self.matrix, dtype=np.float64)
        if self.mean.shape != (self.dim,) or self.matrix.shape != (self.dim, self.dim):
            raise ModelDimensionError(
                f"CovarianceModel: dim={self.dim}, mean {self.mean.shape}, matrix {self.matrix.shape}")

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "mean": self.mean.tolist(),
            "matrix": self.matrix.tolist(),
            "sample_count": self.sample_count,
            "regularized": self.regularized,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CovarianceModel":
        return cls(
            dim=int(data["dim"]),
            mean=np.array(data["mean"], dtype=np.float64),
            matrix=np.array(data["matrix"], dtype=np.float64),
            sample_count=int(data["sample_count"]),
            regularized=bool(data["regularized"]),
        )


@dataclass(eq=False)
class SpeakerModel:
    """Модель диктора

    - vq:   только кодовая книга
    - cm:   одна глобальная ковариационная матрица
    - vqcm: кодовая книга + по одной (mean, C) на каждый центроид
    """
    speaker_id: str
    config: FrontendConfig
    method: Method
    codebook: Optional[Codebook] = None
    clusters: list[CovarianceModel] = field(default_factory=list)

    def __post_init__(self):
        self.method = Method(self.method)
        self.validate()

    def validate(self):
        """Проверить согласованность метода, кодовой книги и кластеров"""
        p1 = self.config.cepstral_order_p1
        p2 = self.config.covariance_order_p2

        if self.method in (Method.VQ, Method.VQCM):
            if self.codebook is None:
                raise ModelSchemaError(f"Метод {self.method.value} требует кодовую книгу", self.speaker_id)
            if self.codebook.dim != p1:
                raise ModelDimensionError(
                    f"Размерность центроидов {self.codebook.dim} != P1={p1}", self.speaker_id)
        elif self.codebook is not None:
            raise ModelSchemaError("Метод cm не хранит кодовую книгу", self.speaker_id)

        if self.method == Method.VQ:
            expected_clusters = 0
        elif self.method == Method.CM:
            expected_clusters = 1
        else:
            expected_clusters = self.codebook.size

        if len(self.clusters) != expected_clusters:
            raise ModelSchemaError(
                f"Метод {self.method.value}: ожидается {expected_clusters} кластеров, "
                f"получено {len(self.clusters)}", self.speaker_id)

        for cluster in self.clusters:
            if cluster.dim != p2:
                raise ModelDimensionError(f"Размерность кластера {cluster.dim} != P2={p2}", self.speaker_id)

    @property
    def bits(self) -> int:
        return self.codebook.bits if self.codebook is not None else 0

    def to_dict(self) -> dict:
        return {
            "speaker_id": self.speaker_id,
            "method": self.method.value,
            "config": self.config.to_dict(),
            "codebook": self.codebook.to_dict() if self.codebook is not None else None,
            "clusters": [c.to_dict() for c in self.clusters],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SpeakerModel":
        codebook = data.get("codebook")
        return cls(
            speaker_id=str(data["speaker_id"]),
            config=FrontendConfig.from_dict(data["config"]),
            method=Method(data["method"]),
            codebook=Codebook.from_dict(codebook) if codebook is not None else None,
            clusters=[CovarianceModel.from_dict(c) for c in data.get("clusters") or []],
        )


@dataclass
class ScoreVector:
    """Расстояния d_0, d_1 ... d_N одного диктора; None = расстояние отсутствует"""
    speaker_id: str
    d0: Optional[float]
    di: list[Optional[float]] = field(default_factory=list)

    @property
    def available_di(self) -> list[float]:
        return [d for d in self.di if d is not None]

    @property
    def classifier_count(self) -> int:
        """N + 1"""
        return 1 + len(self.di)

    def classifier(self, index: int) -> Optional[float]:
        """Расстояние классификатора index (0 = VQ, i = кластер i)"""
        if index == 0:
            return self.d0
        if 1 <= index <= len(self.di):
            return self.di[index - 1]
        return None


@dataclass(frozen=True)
class NoiseSpec:
    """Параметры белого гауссовского шума"""
    snr_db: float = math.inf
    seed: int = 0


@dataclass
class SyntheticSpeakerSpec:
    """Синтетический диктор: полюсный фильтр, возбуждаемый белым шумом

    pole_set хранит по одному полюсу из каждой комплексно-сопряженной пары
    (верхняя полуплоскость). state_offsets задает "фонемы": для состояния j
    угол пары k сдвигается на state_offsets[j][k]. Пустой список означает
    стационарный фильтр.
    """
    speaker_id: str
    pole_set: list[complex]
    gain: float = 1.0
    seed: int = 0
    state_offsets: list[list[float]] = field(default_factory=list)
    segment_ms: tuple[float, float] = (60.0, 140.0)

    def __post_init__(self):
        self.pole_set = [complex(p) for p in self.pole_set]
        if not self.pole_set:
            raise UnstableFilterError("Пустой набор полюсов", self.speaker_id)
        for pole in self.pole_set:
            if not 0 < abs(pole) < 1:
                raise UnstableFilterError(f"Полюс {pole} вне единичного круга", self.speaker_id)
        for offsets in self.state_offsets:
            if len(offsets) != len(self.pole_set):
                raise ConfigError("state_offsets: длина не совпадает с числом пар полюсов", self.speaker_id)

    def state_poles(self, state: int) -> list[complex]:
        """Полюса (по одному на пару) для состояния state"""
        if not self.state_offsets:
            return list(self.pole_set)
        offsets = self.state_offsets[state]
        return [abs(p) * np.exp(1j * (np.angle(p) + off)) for p, off in zip(self.pole_set, offsets)]

    @property
    def n_states(self) -> int:
        return max(1, len(self.state_offsets))


@dataclass(frozen=True)
class ManifestEntry:
    """Строка манифеста корпуса"""
    speaker_id: str
    path: str
    split: str  # train, test
    format: str = "wav"  # wav, alaw


@dataclass
class CorpusManifest:
    """Манифест корпуса: дикторы, файлы, разбиение train/test"""
    entries: list[ManifestEntry] = field(default_factory=list)

    @property
    def speakers(self) -> list[str]:
        return sorted({e.speaker_id for e in self.entries})

    def split_entries(self, split: str, speaker_id: Optional[str] = None) -> list[ManifestEntry]:
        return [
            e for e in self.entries
            if e.split == split and (speaker_id is None or e.speaker_id == speaker_id)
        ]


@dataclass
class EntryFailure:
    """Ошибка обработки одной записи"""
    speaker_id: str
    path: str
    stage: str
    error: str
    message: str

    def to_dict(self) -> dict:
        return {
            "speaker_id": self.speaker_id,
            "path": self.path,
            "stage": self.stage,
            "error": self.error,
            "message": self.message,
        }


@dataclass
class CellResult:
    """Результат одной ячейки сетки (метод, SNR, схема)"""
    method: str
    snr_db: float
    scheme: str
    correct: int
    total: int
    confusion: list[list[int]] = field(default_factory=list)
    # фразы, для которых схема не смогла принять решение (считаются ошибкой)
    undecided: int = 0

    @property
    def rate(self) -> float:
        return self.correct / self.total if self.total else 0.0


@dataclass
class EvaluationReport:
    """Итоги оценки: точности, число параметров, матрицы ошибок, метаданные"""
    speakers: list[str] = field(default_factory=list)
    cells: list[CellResult] = field(default_factory=list)
    parameter_counts: dict[str, int] = field(default_factory=dict)
    # время фаз в секундах (телеметрия)
    timings: dict[str, dict[str, float]] = field(default_factory=dict)
    failures: list[EntryFailure] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def rate(self, method: str, snr_db: float, scheme: str) -> float:
        for cell in self.cells:
            if cell.method == method and cell.snr_db == snr_db and cell.scheme == scheme:
                return cell.rate
        raise KeyError((method, snr_db, scheme))

    @property
    def methods(self) -> list[str]:
        return list(dict.fromkeys(c.method for c in self.cells))
