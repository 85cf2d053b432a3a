"""
Utility functions for the Paraboloid Float toolkit
"""

from .formatting import format_number, format_pair, render_mapping, render_table
from .logging_utils import LocalTimeFormatter, configure_logging

__all__ = [
    "configure_logging",
    "LocalTimeFormatter",
    "format_number",
    "format_pair",
    "render_table",
    "render_mapping",
]
