from .manifest import read_manifest, write_manifest, check_runnable
from .synth import make_speaker_specs, synth_utterance, synth_corpus

__all__ = [
    "read_manifest",
    "write_manifest",
    "check_runnable",
    "make_speaker_specs",
    "synth_utterance",
    "synth_corpus",
]
