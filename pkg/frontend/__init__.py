from .lpc import autocorrelate, levinson_durbin, lpc_to_cepstrum
from .extractor import (
    preemphasize,
    hamming_window,
    frame_signal,
    extract_features,
    dump_features_csv,
)

__all__ = [
    "autocorrelate",
    "levinson_durbin",
    "lpc_to_cepstrum",
    "preemphasize",
    "hamming_window",
    "frame_signal",
    "extract_features",
    "dump_features_csv",
]
