from .report_writer import (
    format_method_table,
    format_snr_grid,
    format_summary,
    write_report,
    write_run_metadata,
)

__all__ = [
    "format_method_table",
    "format_snr_grid",
    "format_summary",
    "write_report",
    "write_run_metadata",
]
