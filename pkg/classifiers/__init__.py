from .vq import lbg_train, quantize, vq_distance
from .covariance import sample_covariance, sphericity, enroll_cm
from .vqcm import enroll_vqcm, score_vqcm, min_cluster_occupancy
from .fusion import (
    RankedSpeaker,
    fuse,
    identify,
    identify_by_vote,
    rank_by_vote,
    resolve_scheme,
    scheme_name,
    znormalize,
)
from .speaker_classifier import (
    MethodSpec,
    SpeakerClassifier,
    initialize_classifier,
    model_parameter_count,
    score_model,
)

__all__ = [
    "lbg_train",
    "quantize",
    "vq_distance",
    "sample_covariance",
    "sphericity",
    "enroll_cm",
    "enroll_vqcm",
    "score_vqcm",
    "min_cluster_occupancy",
    "RankedSpeaker",
    "fuse",
    "identify",
    "identify_by_vote",
    "rank_by_vote",
    "resolve_scheme",
    "scheme_name",
    "znormalize",
    "MethodSpec",
    "SpeakerClassifier",
    "initialize_classifier",
    "model_parameter_count",
    "score_model",
]
