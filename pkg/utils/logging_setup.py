# utils/logging_setup.py - loguru sink configuration

import sys

from loguru import logger

LOG_FORMAT = (
    "<green>{time:HH:mm:ss}</green> | <level>{level: <7}</level> | "
    "<cyan>{name}</cyan> - <level>{message}</level>"
)


def setup_logging(level="INFO", log_file=None):
    """
    Replace loguru's default sink with a stderr sink at the requested level.

    Args:
        level: Minimum level name for the console sink
        log_file: Optional path of an extra plain-text sink (always DEBUG)
    """
    logger.remove()
    logger.add(sys.stderr, level=level.upper(), format=LOG_FORMAT)
    if log_file:
        logger.add(log_file, level="DEBUG", mode="w", encoding="utf-8")
    return logger
