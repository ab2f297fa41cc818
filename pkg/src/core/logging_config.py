#!/usr/bin/env python3
"""
Centralized logging configuration for tabforge.
Configures consistent logging across all modules; output goes to standard error
so that machine-readable command output on stdout stays clean.
"""

import os
import sys
import logging
import logging.handlers
from typing import Dict, Optional

from src.config.config import config

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def configure_logging(
    log_level: Optional[str] = None, log_file: Optional[str] = None
) -> None:
    """
    Configure logging for the entire application.

    Args:
        log_level: Override log level from config
        log_file: Override log file from config
    """
    if log_level is None:
        log_level = config.get("LOG_LEVEL", "INFO")

    if log_file is None:
        log_file = config.get("LOG_FILE", "tabforge.log")

    log_to_file = config.get("LOG_TO_FILE", False)

    numeric_level = getattr(logging, log_level.upper(), logging.INFO)

    logging.basicConfig(
        level=numeric_level,
        format=LOG_FORMAT,
        handlers=[logging.StreamHandler(sys.stderr)],
        force=True,
    )

    if log_to_file:
        try:
            file_handler = logging.handlers.RotatingFileHandler(
                log_file,
                maxBytes=10 * 1024 * 1024,  # 10 MB
                backupCount=5,
                encoding="utf-8",
            )
            file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
            logging.getLogger().addHandler(file_handler)
            logging.info(f"Logging to file: {os.path.abspath(log_file)}")
        except Exception as e:
            logging.error(f"Failed to set up file logging: {e}")

    configure_module_loggers(
        {
            "table-matrix": config.get("TABLE_LOG_LEVEL", log_level),
            "table-structure": config.get("TABLE_LOG_LEVEL", log_level),
            "html-codec": config.get("TABLE_LOG_LEVEL", log_level),
            "instruction-sampler": config.get("TABLE_LOG_LEVEL", log_level),
            "teds": config.get("METRICS_LOG_LEVEL", log_level),
            "synth-pipeline": config.get("SYNTH_LOG_LEVEL", log_level),
            "synth-blocks": config.get("SYNTH_LOG_LEVEL", log_level),
            "llm-client": config.get("SYNTH_LOG_LEVEL", log_level),
            "render-manifest": config.get("SYNTH_LOG_LEVEL", log_level),
            "corpus-loader": config.get("CORPUS_LOG_LEVEL", log_level),
            "tabforge-cli": config.get("CLI_LOG_LEVEL", log_level),
        }
    )

    logging.debug(f"Logging initialized at level: {log_level}")


def configure_module_loggers(module_levels: Dict[str, str]) -> None:
    """Configure log levels for specific modules."""
    for module, level in module_levels.items():
        numeric_level = getattr(logging, str(level).upper(), None)
        if numeric_level is not None:
            logging.getLogger(module).setLevel(numeric_level)

