from .helpers import (
    parse_float_list,
    parse_int_list,
    parse_name_list,
    format_snr,
    derive_seed,
    atomic_write_bytes,
    atomic_write_text,
)

__all__ = [
    "parse_float_list",
    "parse_int_list",
    "parse_name_list",
    "format_snr",
    "derive_seed",
    "atomic_write_bytes",
    "atomic_write_text",
]
