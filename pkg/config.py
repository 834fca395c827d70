"""
Конфигурация системы идентификации дикторов VQ-CM
"""
import os
from dotenv import load_dotenv

load_dotenv()

__version__ = "1.0.0"

# Каталоги
OUTPUT_DIR = os.getenv("VQCM_OUTPUT_DIR", "output")
LOG_DIR = os.getenv("VQCM_LOG_DIR", "logs")

# Расширение файлов моделей
MODEL_SUFFIX = ".vqcm.json"

# Параметры DSP: предыскажение, окно Хэмминга 30 мс с перекрытием 2/3, LPCC
FRONTEND_SETTINGS = {
    "sample_rate_hz": 8000,
    "preemphasis_coeff": 0.95,
    "frame_ms": 30.0,
    "overlap_fraction": 2 / 3,
    "lpc_order": 16,
    "cepstral_order_p1": 16,
    "covariance_order_p2": 10,
}

# Настройки LBG
VQ_SETTINGS = {
    "bits": 1,
    "epsilon": 0.01,
    "tol": 1e-4,
    "max_iters": 100,
}

# Настройки ковариационных моделей
CM_SETTINGS = {
    # относительная регуляризация: lambda = ridge * trace / P2
    "ridge": 1e-6,
    # минимальная заполненность кластера на тесте: max(2, ceil(P2 / 2))
    "min_occupancy_floor": 2,
}

# Настройки комбинирования классификаторов
FUSION_SETTINGS = {
    "scheme": "sum-all",
    "z_norm": False,
}

# Настройки шума
NOISE_SETTINGS = {
    "snr_list": "inf,30,25,20,15",
    "seed": int(os.getenv("VQCM_NOISE_SEED", "7")),
}

# Синтетический корпус: 10 дикторов, 60 с обучения, 5 фраз по 2 с
CORPUS_SETTINGS = {
    "n_speakers": 10,
    "train_s": 60.0,
    "n_test": 5,
    "test_s": 2.0,
    "seed": 1999,
    # пары полюсов ("форманты") и их центральные частоты, Гц
    "formant_centers_hz": [500.0, 1500.0, 2500.0, 3300.0],
    "pole_radius": 0.95,
    # минимальный разнос углов полюсов между соседними дикторами, рад
    "min_angle_margin": 0.06,
    # доля margin, отводимая на случайный сдвиг
    "jitter_fraction": 0.25,
    # "фонемы": общие для всех дикторов сдвиги углов
    "n_states": 3,
    "state_offset_rad": 0.12,
    "segment_ms": [60.0, 140.0],
    "target_rms": 0.5,
    # запас по уровню при записи WAV (RMS 0.5 * 0.25 = 0.125)
    "write_gain": 0.25,
}

# Настройки оценки
EVAL_SETTINGS = {
    "n_jobs": int(os.getenv("VQCM_N_JOBS", "1")),
    "methods": "vq,cm,vqcm",
    "schemes": "sum-all,sum-cm,median,vote",
    "vq_bits": "1,2,6",
    "vqcm_bits": "1,2",
    "cm_orders": "10,20",
}
