# SPDX-License-Identifier: MIT
"""Log sinks configured from the ``log`` section"""

import sys
from pathlib import Path

from loguru import logger

_FORMAT = (
    "<green>{time:YYYY-MM-DD HH:mm:ss.SSS}</green> | <level>{level: <8}</level> | "
    "<cyan>{name}</cyan>:<cyan>{line}</cyan> - <level>{message}</level>"
)


def setup_logging(config) -> None:
    """Console output goes to stderr; a file sink is added when ``log_dir`` is set."""
    logger.remove()
    if config.enable_console_log:
        # stdout carries JSON documents
        logger.add(sys.stderr, level=config.log_level, format=_FORMAT)
    if config.log_dir:
        log_dir = Path(config.log_dir)
        log_dir.mkdir(parents=True, exist_ok=True)
        logger.add(
            log_dir / "boussym_{time:YYYY-MM-DD}.log",
            level=config.log_level,
            rotation=config.log_rotation,
            retention=config.log_retention,
            encoding="utf-8",
        )
