"""Utility modules shared by the engines and the CLI"""

from .io import atomic_write_text, read_csv, write_csv, write_manifest
from .run_log import capture_run_log

__all__ = [
    "atomic_write_text",
    "read_csv",
    "write_csv",
    "write_manifest",
    "capture_run_log",
]
