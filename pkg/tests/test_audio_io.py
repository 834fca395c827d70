import numpy as np
import pytest
from scipy.io import wavfile

from audio.io import guess_format, read_alaw, read_audio, read_wav, write_alaw, write_wav
from database.models import AudioSignal
from utils.errors import ConfigError, MalformedHeaderError, MultiChannelError, UnsupportedEncodingError


def test_16bit_full_scale_and_zero(tmp_path):
    path = tmp_path / "edge.wav"
    wavfile.write(path, 8000, np.array([32767, 0, -32768], dtype=np.int16))
    signal = read_wav(path)
    assert signal.sample_rate_hz == 8000
    assert signal.samples[0] == 32767 / 32768
    assert signal.samples[1] == 0.0
    assert signal.samples[2] == -1.0


def test_8bit_unsigned(tmp_path):
    path = tmp_path / "u8.wav"
    wavfile.write(path, 16000, np.array([128, 255, 0], dtype=np.uint8))
    signal = read_wav(path)
    assert signal.sample_rate_hz == 16000
    np.testing.assert_array_equal(signal.samples, [0.0, 127 / 128, -1.0])


@pytest.mark.parametrize("sample_width, step", [(2, 1 / 32768), (1, 1 / 128)])
def test_sine_round_trip_within_one_step(tmp_path, sample_width, step):
    t = np.arange(8000) / 8000
    sine = AudioSignal(0.8 * np.sin(2 * np.pi * 1000 * t))
    path = tmp_path / "sine.wav"
    write_wav(path, sine, sample_width=sample_width)
    restored = read_wav(path)
    assert np.max(np.abs(restored.samples - sine.samples)) <= step


@pytest.mark.parametrize("sample_rate", [8000, 16000, 11025])
def test_16bit_read_write_read_is_identity(tmp_path, rng, sample_rate):
    original = tmp_path / "original.wav"
    copy = tmp_path / "copy.wav"
    pcm = rng.integers(-32768, 32768, 4000).astype(np.int16)
    pcm[:2] = [-32768, 32767]
    wavfile.write(original, sample_rate, pcm)

    first = read_wav(original)
    write_wav(copy, first)
    second = read_wav(copy)
    assert second.sample_rate_hz == first.sample_rate_hz == sample_rate
    np.testing.assert_array_equal(second.samples, first.samples)
    np.testing.assert_array_equal(wavfile.read(copy)[1], pcm)


def test_stereo_rejected(tmp_path):
    path = tmp_path / "stereo.wav"
    wavfile.write(path, 8000, np.zeros((10, 2), dtype=np.int16))
    with pytest.raises(MultiChannelError):
        read_wav(path)


def test_float_wav_rejected(tmp_path):
    path = tmp_path / "float.wav"
    wavfile.write(path, 8000, np.zeros(10, dtype=np.float32))
    with pytest.raises(UnsupportedEncodingError):
        read_wav(path)


def test_garbage_header(tmp_path):
    path = tmp_path / "garbage.wav"
    path.write_bytes(b"NOT A RIFF FILE AT ALL" * 4)
    with pytest.raises(MalformedHeaderError):
        read_wav(path)


def test_missing_file_propagates_os_error(tmp_path):
    with pytest.raises(OSError):
        read_wav(tmp_path / "absent.wav")


def test_alaw_file_round_trip(tmp_path):
    signal = AudioSignal(np.linspace(-0.5, 0.5, 101))
    path = tmp_path / "x.alaw"
    write_alaw(path, signal)
    assert path.stat().st_size == 101
    restored = read_alaw(path)
    assert restored.sample_rate_hz == 8000
    # шаг A-law у 0.5 равен 1024/32768
    assert np.max(np.abs(restored.samples - signal.samples)) <= 512 / 32768


def test_read_audio_dispatch(tmp_path):
    path = tmp_path / "a.wav"
    write_wav(path, AudioSignal(np.zeros(5)))
    assert len(read_audio(path, "wav")) == 5
    with pytest.raises(UnsupportedEncodingError):
        read_audio(path, "mp3")
    assert guess_format(path) == "wav"
    assert guess_format(tmp_path / "a.alaw") == "alaw"


def test_audio_signal_validation():
    with pytest.raises(ConfigError):
        AudioSignal(np.zeros((2, 2)))
    with pytest.raises(ConfigError):
        AudioSignal(np.array([np.nan]))
    with pytest.raises(ConfigError):
        AudioSignal(np.zeros(3), sample_rate_hz=0)
