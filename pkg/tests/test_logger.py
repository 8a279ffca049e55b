"""
Tests for logging setup.
"""
import logging
import os
import time

import pytest

from script.logger import LOG_FILE_EXT, LOG_FILE_PREFIX, _cleanup_old_logs, logger, set_level, setup_logging


@pytest.fixture(autouse=True)
def restore_logger():
    yield
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()
    logger.addHandler(logging.NullHandler())
    logger.setLevel(logging.NOTSET)


def test_console_only():
    """Test that console logging attaches a single stream handler."""
    setup_logging("debug")
    assert logger.level == logging.DEBUG
    assert len(logger.handlers) == 1
    assert isinstance(logger.handlers[0], logging.StreamHandler)


def test_file_logging(tmp_path):
    """Test that a timestamped log file is created and written."""
    setup_logging("INFO", to_file=True, log_dir=tmp_path)
    logger.info("hello from the test")
    for handler in logger.handlers:
        handler.flush()
    files = list(tmp_path.glob(f"{LOG_FILE_PREFIX}*{LOG_FILE_EXT}"))
    assert len(files) == 1
    assert "hello from the test" in files[0].read_text(encoding="utf-8")


def test_cleanup_keeps_newest(tmp_path):
    """Test that only the most recent log files survive."""
    now = time.time()
    for k in range(5):
        path = tmp_path / f"{LOG_FILE_PREFIX}2024010{k}_000000{LOG_FILE_EXT}"
        path.write_text("x", encoding="utf-8")
        os.utime(path, (now - 100 + k, now - 100 + k))
    _cleanup_old_logs(tmp_path, max_files=2)
    left = sorted(p.name for p in tmp_path.iterdir())
    assert left == [f"{LOG_FILE_PREFIX}20240103_000000{LOG_FILE_EXT}",
                    f"{LOG_FILE_PREFIX}20240104_000000{LOG_FILE_EXT}"]


def test_set_level():
    """Test level changes and rejection of unknown names."""
    setup_logging("INFO")
    set_level("WARNING")
    assert logger.level == logging.WARNING
    assert all(h.level == logging.WARNING for h in logger.handlers)
    with pytest.raises(ValueError):
        set_level("LOUD")
