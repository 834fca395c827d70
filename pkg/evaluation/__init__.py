from .params import param_count_vq, param_count_cm, param_count_vqcm

__all__ = ["param_count_vq", "param_count_cm", "param_count_vqcm"]
