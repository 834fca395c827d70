from .alaw import alaw_decode, alaw_encode
from .io import read_wav, write_wav, read_alaw, write_alaw, read_audio, guess_format
from .noise import add_noise, check_snr, measure_snr_db

__all__ = [
    "alaw_decode",
    "alaw_encode",
    "read_wav",
    "write_wav",
    "read_alaw",
    "write_alaw",
    "read_audio",
    "guess_format",
    "add_noise",
    "check_snr",
    "measure_snr_db",
]
