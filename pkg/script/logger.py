"""
Logging configuration for metallic-tiler.
"""
import os
import logging
from pathlib import Path
from datetime import datetime
from typing import Optional, Union

# Constants
LOGGER_NAME = "metallic_tiler"
LOG_FILE_PREFIX = "metallic_tiler_"
LOG_FILE_EXT = ".log"
LOG_DIR = Path("logs")
MAX_LOG_FILES = 10  # Maximum number of log files to keep
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

# Module-level logger; handlers are attached by setup_logging()
logger = logging.getLogger(LOGGER_NAME)
logger.addHandler(logging.NullHandler())


def setup_logging(level: Union[str, int] = "INFO",
                  to_file: bool = False,
                  log_dir: Union[str, Path] = LOG_DIR,
                  max_files: int = MAX_LOG_FILES) -> logging.Logger:
    """
    Configure the application logger.

    Console output goes to stderr so that documents printed on stdout stay
    clean. When ``to_file`` is set a timestamped log file is created and only
    the ``max_files`` most recent log files are kept.

    Returns:
        logging.Logger: Configured logger instance
    """
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()
    logger.setLevel(_coerce_level(level))
    logger.propagate = False

    formatter = logging.Formatter(LOG_FORMAT)
    console = logging.StreamHandler()
    console.setFormatter(formatter)
    logger.addHandler(console)

    if not to_file:
        return logger

    try:
        log_dir = Path(log_dir)
        log_dir.mkdir(exist_ok=True, parents=True)

        timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
        log_path = log_dir / f"{LOG_FILE_PREFIX}{timestamp}{LOG_FILE_EXT}"

        file_handler = logging.FileHandler(log_path, encoding='utf-8')
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

        _cleanup_old_logs(log_dir, max_files)

        logger.info("=" * 80)
        logger.info(f"Starting new logging session: {timestamp}")
        logger.info(f"Log file: {log_path}")
        logger.info("=" * 80)

    except OSError as e:
        logger.error(f"Failed to configure file logging: {e}")

    return logger


def set_level(level: Union[str, int]) -> None:
    """Change the level of the application logger and its handlers."""
    value = _coerce_level(level)
    logger.setLevel(value)
    for handler in logger.handlers:
        handler.setLevel(value)


def _coerce_level(level: Union[str, int]) -> int:
    if isinstance(level, int):
        return level
    value = logging.getLevelName(str(level).upper())
    if not isinstance(value, int):
        raise ValueError(f"unknown log level {level!r}")
    return value


def _cleanup_old_logs(log_dir: Optional[Path] = None, max_files: int = MAX_LOG_FILES) -> None:
    """Clean up old log files, keeping only the most recent ``max_files``."""
    log_dir = Path(log_dir or LOG_DIR)
    try:
        log_files = sorted(
            log_dir.glob(f"{LOG_FILE_PREFIX}*{LOG_FILE_EXT}"),
            key=os.path.getmtime,
            reverse=True
        )

        for log_file in log_files[max_files:]:
            try:
                log_file.unlink()
            except OSError as e:
                logger.warning(f"Failed to remove old log file {log_file}: {e}")

    except OSError as e:
        logger.error(f"Error during log cleanup: {e}")
