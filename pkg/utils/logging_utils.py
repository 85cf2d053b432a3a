"""
Logging setup shared by the command line and the MCP server

Everything is written to stderr: stdout carries tables, CSV, JSON or MCP frames.
"""

import logging
import sys
import time
from logging.handlers import RotatingFileHandler
from typing import Optional

from config import LOG_FILE, LOG_LEVEL

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


class LocalTimeFormatter(logging.Formatter):
    def formatTime(self, record, datefmt=None):
        """Override to use local timezone instead of UTC"""
        ct = self.converter(record.created)
        if datefmt:
            s = time.strftime(datefmt, ct)
        else:
            t = time.strftime("%Y-%m-%d %H:%M:%S", ct)
            s = f"{t},{record.msecs:03.0f}"
        return s


def configure_logging(level: Optional[str] = None, log_file: Optional[str] = None) -> str:
    """
    Configure the root logger and return the effective level name.

    level and log_file default to LOG_LEVEL and LOG_FILE from config. A log file
    rotates at 10MB with two backups.
    """
    level_name = (level or LOG_LEVEL).upper()
    numeric = getattr(logging, level_name, logging.INFO)
    logging.basicConfig(
        level=numeric,
        format=LOG_FORMAT,
        force=True,  # Force reconfiguration if already configured
        stream=sys.stderr,
    )
    for handler in logging.getLogger().handlers:
        handler.setFormatter(LocalTimeFormatter(LOG_FORMAT))

    path = LOG_FILE if log_file is None else log_file
    if path:
        try:
            file_handler = RotatingFileHandler(path, maxBytes=10 * 1024 * 1024, backupCount=2)
            file_handler.setLevel(numeric)
            file_handler.setFormatter(LocalTimeFormatter(LOG_FORMAT))
            logging.getLogger().addHandler(file_handler)
        except OSError as e:
            print(f"Warning: Could not set up file logging: {e}", file=sys.stderr)
    return logging.getLevelName(numeric)
