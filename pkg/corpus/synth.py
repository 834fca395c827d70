"""
Синтетический корпус: дикторы как полюсные фильтры, возбуждаемые белым шумом

Диктор задается базовыми углами пар полюсов ("формантами"); фонемы - общими
для всех дикторов сдвигами этих углов. Фраза - последовательность сегментов
по 60-140 мс, в каждом свое состояние фильтра.
"""
import json
import math
from pathlib import Path
from typing import Optional, Union

import numpy as np
from loguru import logger
from scipy.signal import lfilter

import config
from audio.io import write_alaw, write_wav
from database.models import AudioSignal, CorpusManifest, ManifestEntry, SyntheticSpeakerSpec
from utils.errors import ConfigError, UnstableFilterError
from utils.helpers import atomic_write_text, derive_seed
from .manifest import write_manifest

PathLike = Union[str, Path]

# запас углов от 0 и pi, рад
_ANGLE_GUARD = 0.05
_WARMUP_SAMPLES = 512


def pole_denominator(poles: list[complex]) -> np.ndarray:
    """Коэффициенты знаменателя A(z) по полюсам верхней полуплоскости и их сопряженным"""
    radii = [abs(p) for p in poles]
    if max(radii) >= 1 or min(radii) <= 0:
        raise UnstableFilterError(f"Радиусы полюсов вне (0, 1): max={max(radii):.4f}")
    full = list(poles) + [np.conj(p) for p in poles]
    return np.real(np.poly(full))


def make_speaker_specs(
    n_speakers: int = config.CORPUS_SETTINGS["n_speakers"],
    seed: int = config.CORPUS_SETTINGS["seed"],
    min_angle_margin: float = config.CORPUS_SETTINGS["min_angle_margin"],
    sample_rate_hz: int = 8000,
    formant_centers_hz: Optional[list[float]] = None,
    pole_radius: float = config.CORPUS_SETTINGS["pole_radius"],
    jitter_fraction: float = config.CORPUS_SETTINGS["jitter_fraction"],
    n_states: int = config.CORPUS_SETTINGS["n_states"],
    state_offset_rad: float = config.CORPUS_SETTINGS["state_offset_rad"],
) -> list[SyntheticSpeakerSpec]:
    """
    Сгенерировать дикторов с равномерно разнесенными углами и случайным сдвигом.

    В каждой полосе дикторы занимают слоты в случайном порядке; шаг слотов
    выбран так, что соседние дикторы различаются по углу не меньше чем на
    min_angle_margin даже с учетом сдвига.
    """
    if n_speakers < 2:
        raise ConfigError(f"Нужно не меньше 2 дикторов, получено {n_speakers}")
    if not 0 <= jitter_fraction < 0.5:
        raise ConfigError(f"jitter_fraction вне [0, 0.5): {jitter_fraction}")

    centers = formant_centers_hz or config.CORPUS_SETTINGS["formant_centers_hz"]
    center_angles = [2 * math.pi * f / sample_rate_hz for f in centers]
    spacing = min_angle_margin / (1 - 2 * jitter_fraction)

    rng = np.random.default_rng(seed)
    angles = np.zeros((n_speakers, len(centers)))
    for band, center in enumerate(center_angles):
        slots = rng.permutation(n_speakers) - (n_speakers - 1) / 2
        jitter = rng.uniform(-1, 1, n_speakers) * jitter_fraction * spacing
        angles[:, band] = center + spacing * slots + jitter
    angles = np.clip(angles, _ANGLE_GUARD, math.pi - _ANGLE_GUARD)

    state_rng = np.random.default_rng([seed, 1])
    state_offsets = []
    if n_states > 1:
        state_offsets = state_rng.uniform(-state_offset_rad, state_offset_rad, (n_states, len(centers))).tolist()

    gains = rng.uniform(0.5, 2.0, n_speakers)
    specs = []
    for index in range(n_speakers):
        specs.append(SyntheticSpeakerSpec(
            speaker_id=f"spk{index:02d}",
            pole_set=[pole_radius * np.exp(1j * theta) for theta in angles[index]],
            gain=float(gains[index]),
            seed=derive_seed(seed, 1000 + index),
            state_offsets=state_offsets,
            segment_ms=tuple(config.CORPUS_SETTINGS["segment_ms"]),
        ))
    return specs


def synth_utterance(
    spec: SyntheticSpeakerSpec,
    duration_s: float,
    utterance_index: int,
    sample_rate_hz: int = 8000,
    target_rms: float = config.CORPUS_SETTINGS["target_rms"],
) -> AudioSignal:
    """
    Белый гауссовский шум через полюсный фильтр диктора, RMS = target_rms.

    Зерно возбуждения выводится из spec.seed и utterance_index.
    """
    if duration_s <= 0:
        raise ConfigError(f"Длительность должна быть > 0, получено {duration_s}")

    rng = np.random.default_rng(np.random.SeedSequence([spec.seed, utterance_index]))
    n_samples = int(round(duration_s * sample_rate_hz))
    excitation = rng.standard_normal(n_samples + _WARMUP_SAMPLES)
    numerator = [spec.gain]

    if spec.n_states == 1:
        output = lfilter(numerator, pole_denominator(spec.pole_set), excitation)
    else:
        denominators = [pole_denominator(spec.state_poles(state)) for state in range(spec.n_states)]
        low_ms, high_ms = spec.segment_ms
        state_vector = np.zeros(len(denominators[0]) - 1)
        output = np.empty_like(excitation)
        position = 0
        while position < len(excitation):
            length = max(1, int(round(rng.uniform(low_ms, high_ms) * sample_rate_hz / 1000)))
            state = int(rng.integers(spec.n_states))
            segment = slice(position, position + length)
            output[segment], state_vector = lfilter(
                numerator, denominators[state], excitation[segment], zi=state_vector)
            position += length

    output = output[_WARMUP_SAMPLES:]
    rms = math.sqrt(float(np.mean(output ** 2)))
    return AudioSignal(output * (target_rms / rms), sample_rate_hz)


def synth_corpus(
    out_dir: PathLike,
    n_speakers: int = config.CORPUS_SETTINGS["n_speakers"],
    train_s: float = config.CORPUS_SETTINGS["train_s"],
    n_test: int = config.CORPUS_SETTINGS["n_test"],
    test_s: float = config.CORPUS_SETTINGS["test_s"],
    seed: int = config.CORPUS_SETTINGS["seed"],
    min_angle_margin: float = config.CORPUS_SETTINGS["min_angle_margin"],
    alaw: bool = False,
    sample_rate_hz: int = 8000,
) -> CorpusManifest:
    """
    Записать корпус: на диктора один обучающий файл и n_test тестовых,
    плюс manifest.csv и speakers.json с параметрами фильтров.
    """
    out_dir = Path(out_dir)
    specs = make_speaker_specs(n_speakers, seed, min_angle_margin, sample_rate_hz)
    write_gain = config.CORPUS_SETTINGS["write_gain"]
    suffix, audio_format = (".alaw", "alaw") if alaw else (".wav", "wav")

    entries = []
    for spec in specs:
        plan = [("train", 0, train_s)] + [("test", i + 1, test_s) for i in range(n_test)]
        for split, utterance_index, duration in plan:
            signal = synth_utterance(spec, duration, utterance_index, sample_rate_hz)
            scaled = AudioSignal(signal.samples * write_gain, signal.sample_rate_hz)
            path = out_dir / spec.speaker_id / f"{split}_{utterance_index:02d}{suffix}"
            if alaw:
                write_alaw(path, scaled)
            else:
                write_wav(path, scaled)
            entries.append(ManifestEntry(spec.speaker_id, str(path), split, audio_format))
        logger.debug(f"[{spec.speaker_id}] синтезировано {len(plan)} файлов")

    manifest = CorpusManifest(entries)
    write_manifest(manifest, out_dir / "manifest.csv", relative_to=out_dir)

    speakers = [
        {
            "speaker_id": spec.speaker_id,
            "angles_rad": [float(np.angle(p)) for p in spec.pole_set],
            "radii": [float(abs(p)) for p in spec.pole_set],
            "gain": spec.gain,
            "seed": spec.seed,
        }
        for spec in specs
    ]
    atomic_write_text(out_dir / "speakers.json", json.dumps(
        {"seed": seed, "min_angle_margin": min_angle_margin, "state_offsets": specs[0].state_offsets,
         "speakers": speakers}, sort_keys=True, indent=2) + "\n")

    logger.info(f"Корпус {out_dir}: {len(specs)} дикторов, {len(entries)} файлов")
    return manifest
