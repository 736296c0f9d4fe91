import sys
from pathlib import Path
from typing import Optional

from loguru import logger as _logger

from app.common.config import config

_print_level = "INFO"


def define_log_level(
    print_level: str = "INFO",
    logfile_level: str = "DEBUG",
    logfile: Optional[Path] = None,
):
    """Adjust the log level to above level"""
    global _print_level
    _print_level = print_level

    _logger.remove()
    _logger.add(sys.stderr, level=print_level)
    if logfile is not None:
        _logger.add(logfile, level=logfile_level)
    return _logger


def add_run_sink(logfile: Path, run_id: str, level: Optional[str] = None) -> int:
    """Route records bound with `run=run_id` into their own file.

    Returns the sink id, to be passed to `logger.remove` when the run ends.
    """
    logfile.parent.mkdir(parents=True, exist_ok=True)
    return _logger.add(
        logfile,
        level=level or config.logging.logfile_level,
        filter=lambda record: record["extra"].get("run") == run_id,
        format="{time:YYYY-MM-DD HH:mm:ss.SSS} | {level: <8} | {message}",
    )


logger = define_log_level(
    print_level=config.logging.print_level,
    logfile_level=config.logging.logfile_level,
)
