import logging
import sys
import time
from pprint import pformat
from typing import Any, Dict, Optional, Union

import polars as pl

from ...domain.service.log_backend_interface import LogBackendInterface, LogData, LogLevel

LOGGER_NAME = "shadowmancer.run"


class StandardBackend(LogBackendInterface):
    """
    Backend built on the stdlib ``logging`` module.

    Used when icecream is unavailable or when the standard backend is forced.
    Console output goes to stderr so reports on stdout stay clean.
    """

    def __init__(self) -> None:
        self._logger = logging.getLogger(LOGGER_NAME)
        self._logger.propagate = False
        self._log_level = LogLevel.WARNING
        self._log_format = "%(asctime)sZ [%(levelname)s] %(message)s"
        self._log_file: Optional[str] = None
        self._console_enabled = True
        self._use_utc = True

    def initialize(
        self,
        log_level: Optional[Union[int, str, LogLevel]] = None,
        log_format: Optional[str] = None,
        log_file: Optional[str] = None,
        console_enabled: bool = True,
        use_utc: bool = True,
        **kwargs: Any,
    ) -> None:
        self._log_level = LogLevel.from_value(log_level, LogLevel.WARNING)
        self._log_format = log_format or self._log_format
        self._log_file = log_file or None
        self._console_enabled = console_enabled
        self._use_utc = use_utc
        self._configure_logger()

    def _configure_logger(self) -> None:
        for handler in self._logger.handlers[:]:
            self._logger.removeHandler(handler)
            handler.close()

        python_log_level = self._log_level.value
        self._logger.setLevel(python_log_level)

        formatter = logging.Formatter(self._log_format)
        if self._use_utc:
            formatter.converter = time.gmtime

        if self._console_enabled:
            console_handler = logging.StreamHandler(sys.stderr)
            console_handler.setLevel(python_log_level)
            console_handler.setFormatter(formatter)
            self._logger.addHandler(console_handler)

        if self._log_file:
            file_handler = logging.FileHandler(self._log_file, encoding="utf-8")
            file_handler.setLevel(python_log_level)
            file_handler.setFormatter(formatter)
            self._logger.addHandler(file_handler)

    @property
    def level(self) -> LogLevel:
        return self._log_level

    def log(self, level: LogLevel, message: str, context: Optional[Dict[str, Any]] = None) -> None:
        if level.value < self._log_level.value:
            return
        if context:
            message = f"{message}\nContext: {pformat(context, indent=2, width=100)}"
        self._logger.log(level.value, message)

    def log_data(self, stage_name: str, data: LogData) -> None:
        if LogLevel.DEBUG.value < self._log_level.value:
            return
        formatted = str(data) if isinstance(data, pl.DataFrame) else pformat(data, indent=2, width=100)
        self._logger.debug(f"[{stage_name}] data:\n{formatted}")
