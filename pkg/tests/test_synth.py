import itertools

import numpy as np
import pytest

from audio.io import read_audio
from corpus.manifest import read_manifest
from corpus.synth import make_speaker_specs, pole_denominator, synth_corpus, synth_utterance
from database.models import SyntheticSpeakerSpec
from frontend.lpc import autocorrelate, levinson_durbin
from utils.errors import ConfigError, UnstableFilterError


@pytest.fixture
def stationary_spec():
    angles = 2 * np.pi * np.array([500, 1500, 2500, 3300]) / 8000
    return SyntheticSpeakerSpec("s", [0.95 * np.exp(1j * a) for a in angles], gain=1.3, seed=42)


def test_deterministic(stationary_spec):
    a = synth_utterance(stationary_spec, 1.0, 3)
    b = synth_utterance(stationary_spec, 1.0, 3)
    np.testing.assert_array_equal(a.samples, b.samples)
    assert not np.array_equal(a.samples, synth_utterance(stationary_spec, 1.0, 4).samples)


def test_rms_normalized(stationary_spec):
    signal = synth_utterance(stationary_spec, 2.0, 0)
    assert np.sqrt(np.mean(signal.samples ** 2)) == pytest.approx(0.5, abs=1e-6)
    assert len(signal) == 16000
    assert signal.sample_rate_hz == 8000


def recovered_angles(signal, n_pairs: int) -> np.ndarray:
    a, _ = levinson_durbin(autocorrelate(signal.samples, 2 * n_pairs))
    roots = np.roots(np.concatenate([[1.0], -a]))
    return np.sort(np.angle(roots[np.imag(roots) > 0]))


def test_lpc_recovers_pole_angles(stationary_spec):
    estimated = recovered_angles(synth_utterance(stationary_spec, 10.0, 0), 4)
    expected = np.sort(np.angle(stationary_spec.pole_set))
    np.testing.assert_allclose(estimated, expected, rtol=0.02)


@pytest.mark.parametrize("state", [0, 1, 2])
def test_lpc_recovers_each_phone_state_of_corpus_speaker(state):
    speaker = make_speaker_specs(10, seed=1999)[0]
    poles = speaker.state_poles(state)
    stationary = SyntheticSpeakerSpec(speaker.speaker_id, poles, gain=speaker.gain, seed=speaker.seed)
    estimated = recovered_angles(synth_utterance(stationary, 20.0, 0), len(poles))
    expected = np.sort(np.angle(poles))
    # у пар вблизи 0 и pi угол плохо обусловлен
    tolerance = np.where(np.minimum(expected, np.pi - expected) < 0.3, 0.05, 0.02 * expected)
    assert np.all(np.abs(estimated - expected) <= tolerance)


def test_non_stationary_speaker_is_deterministic():
    spec = make_speaker_specs(3, seed=5)[1]
    assert spec.n_states == 3
    a = synth_utterance(spec, 0.5, 1)
    b = synth_utterance(spec, 0.5, 1)
    np.testing.assert_array_equal(a.samples, b.samples)
    assert np.sqrt(np.mean(a.samples ** 2)) == pytest.approx(0.5, abs=1e-6)


def test_unstable_poles_rejected():
    with pytest.raises(UnstableFilterError):
        SyntheticSpeakerSpec("bad", [1.01 + 0j])
    with pytest.raises(UnstableFilterError):
        pole_denominator([0.5, 1.0 + 0j])


def test_non_positive_duration(stationary_spec):
    with pytest.raises(ConfigError):
        synth_utterance(stationary_spec, 0.0, 0)


@pytest.mark.parametrize("margin", [0.06, 0.02])
def test_speakers_separated_by_margin(margin):
    specs = make_speaker_specs(10, seed=1999, min_angle_margin=margin)
    for a, b in itertools.combinations(specs, 2):
        differences = np.abs(np.angle(a.pole_set) - np.angle(b.pole_set))
        assert differences.max() >= margin - 1e-12
    for spec in specs:
        assert max(abs(p) for p in spec.pole_set) < 1


def test_phone_states_shared_across_speakers():
    specs = make_speaker_specs(4, seed=3)
    assert all(s.state_offsets == specs[0].state_offsets for s in specs)
    assert len({s.seed for s in specs}) == 4


def test_too_few_speakers():
    with pytest.raises(ConfigError):
        make_speaker_specs(1)


def test_corpus_layout(small_corpus):
    out_dir, manifest = small_corpus
    assert len(manifest.split_entries("train")) == 3
    assert len(manifest.split_entries("test")) == 6
    assert read_manifest(out_dir / "manifest.csv").entries == manifest.entries
    assert (out_dir / "speakers.json").exists()


def test_default_corpus_counts(default_corpus):
    out_dir, manifest = default_corpus
    assert len(manifest.split_entries("train")) == 10
    assert len(manifest.split_entries("test")) == 50
    rows = (out_dir / "manifest.csv").read_text(encoding="utf-8").splitlines()
    assert len(rows) == 61


def test_regeneration_is_byte_identical(tmp_path):
    first = synth_corpus(tmp_path / "a", n_speakers=2, train_s=2, n_test=1, test_s=0.5, seed=8)
    synth_corpus(tmp_path / "b", n_speakers=2, train_s=2, n_test=1, test_s=0.5, seed=8)
    for path in sorted((tmp_path / "a").rglob("*")):
        if path.is_file():
            twin = tmp_path / "b" / path.relative_to(tmp_path / "a")
            assert path.read_bytes() == twin.read_bytes(), path.name
    assert len(first.entries) == 4


def test_alaw_corpus(tmp_path):
    manifest = synth_corpus(tmp_path, n_speakers=2, train_s=1, n_test=1, test_s=0.5, alaw=True)
    entry = manifest.split_entries("train")[0]
    assert entry.format == "alaw"
    assert entry.path.endswith(".alaw")
    signal = read_audio(entry.path, entry.format)
    assert len(signal) == 8000
    assert np.abs(signal.samples).max() <= 1.0
