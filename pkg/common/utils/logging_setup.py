from __future__ import annotations

import logging
import sys
from datetime import datetime
from pathlib import Path
from typing import Optional, Union

from ..settings import COLOR_RESET, LEVEL_COLORS, get_log_settings


class ColorFormatter(logging.Formatter):
    """
    Console formatter that tints the level name.
    """

    def __init__(self, *args, use_color: bool = True, **kwargs) -> None:
        super().__init__(*args, **kwargs)
        self._use_color = use_color

    def format(self, record: logging.LogRecord) -> str:
        saved = record.levelname
        try:
            color = LEVEL_COLORS.get(record.levelno) if self._use_color else None
            if color:
                record.levelname = f"{color}{saved}{COLOR_RESET}"
            return super().format(record)
        finally:
            record.levelname = saved


# set once the root handlers are attached; mutated by setup_logger
_LOGGING_CONFIGURED = False


class FlaggingFileHandler(logging.FileHandler):
    """
    Writes RUN_<timestamp>.log and renames it to <MAXLEVEL>_<timestamp>.log
    on close, so a run that warned or failed stands out in the logs folder.
    """

    def __init__(
        self,
        logs_path: Path,
        timestamp: str,
        encoding: str = "utf-8",
    ) -> None:
        self._logs_path = logs_path
        self._timestamp = timestamp
        self._base_path = logs_path / f"RUN_{timestamp}.log"
        self._max_level = logging.NOTSET
        super().__init__(self._base_path, mode="w", encoding=encoding, delay=True)

    @property
    def max_level(self) -> int:
        return self._max_level

    def emit(self, record: logging.LogRecord) -> None:
        self._max_level = max(self._max_level, record.levelno)
        super().emit(record)

    def close(self) -> None:
        try:
            super().close()
        finally:
            self._rename_by_level()

    def _rename_by_level(self) -> None:
        if not self._base_path.exists():
            return

        target = self._logs_path / f"{_level_tag(self._max_level)}_{self._timestamp}.log"
        if target == self._base_path:
            return

        try:
            self._base_path.rename(_unique_path(target))
        except OSError:
            pass


def setup_logger(
    name: Optional[str] = None,
    *,
    level: Optional[int] = None,
    logs_dir: Optional[str] = None,
    base_dir: Optional[Union[str, Path]] = None,
    fmt: Optional[str] = None,
    datefmt: Optional[str] = None,
) -> logging.Logger:
    global _LOGGING_CONFIGURED

    if not _LOGGING_CONFIGURED:
        log_settings = get_log_settings()
        level = level if level is not None else log_settings.level
        fmt = fmt or log_settings.fmt
        datefmt = datefmt or log_settings.datefmt

        root_logger = logging.getLogger()
        root_logger.setLevel(level)

        console_handler = logging.StreamHandler()
        use_color = bool(getattr(sys.stderr, "isatty", lambda: False)())
        console_handler.setFormatter(
            ColorFormatter(fmt=fmt, datefmt=datefmt, use_color=use_color)
        )
        root_logger.addHandler(console_handler)

        if log_settings.to_file:
            # Repository root by default, next to common/ and the library.
            base_path = Path(base_dir) if base_dir else Path(__file__).resolve().parents[2]
            logs_path = base_path / (logs_dir or log_settings.logs_dir)
            logs_path.mkdir(parents=True, exist_ok=True)

            file_handler = FlaggingFileHandler(logs_path, _build_timestamp())
            file_handler.setFormatter(logging.Formatter(fmt=fmt, datefmt=datefmt))
            root_logger.addHandler(file_handler)

        _LOGGING_CONFIGURED = True

    return logging.getLogger(name or "delaunay_measure")


def _level_tag(level: int) -> str:
    if level == logging.NOTSET:
        return "NOTSET"
    name = logging.getLevelName(level)
    if not isinstance(name, str):
        return f"LEVEL{level}"
    return name.upper()


def _build_timestamp() -> str:
    return datetime.now().strftime("%Y%m%d_%H%M%S_%f")


def _unique_path(path: Path) -> Path:
    if not path.exists():
        return path

    for idx in range(1, 1000):
        candidate = path.with_name(f"{path.stem}_{idx}{path.suffix}")
        if not candidate.exists():
            return candidate

    return path
