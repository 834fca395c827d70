from .models import (
    AudioSignal,
    FrontendConfig,
    FeatureSequence,
    Codebook,
    ClusterAssignment,
    CovarianceModel,
    SpeakerModel,
    ScoreVector,
    NoiseSpec,
    SyntheticSpeakerSpec,
    ManifestEntry,
    CorpusManifest,
    EvaluationReport,
    CellResult,
    EntryFailure,
    FusionScheme,
    Method,
)
from .model_store import ModelStore, save_model, load_model, FORMAT_VERSION

__all__ = [
    "AudioSignal",
    "FrontendConfig",
    "FeatureSequence",
    "Codebook",
    "ClusterAssignment",
    "CovarianceModel",
    "SpeakerModel",
    "ScoreVector",
    "NoiseSpec",
    "SyntheticSpeakerSpec",
    "ManifestEntry",
    "CorpusManifest",
    "EvaluationReport",
    "CellResult",
    "EntryFailure",
    "FusionScheme",
    "Method",
    "ModelStore",
    "save_model",
    "load_model",
    "FORMAT_VERSION",
]
