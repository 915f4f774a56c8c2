import logging
import sys
from pprint import pformat
from typing import Any, Dict, Optional, Union, cast

import polars as pl

from ...domain.service.log_backend_interface import LogBackendInterface, LogData, LogLevel

try:
    from icecream import ic

    ICECREAM_AVAILABLE = True
except ImportError:
    ICECREAM_AVAILABLE = False

    def _ic_fallback(*args: Any, **kwargs: Any) -> Any:  # noqa: ANN401
        """Stand-in for ``ic`` that prints its arguments to stderr."""
        if not args and not kwargs:
            return None
        parts = [str(arg) for arg in args] + [f"{key}={value}" for key, value in kwargs.items()]
        print("[IC]", " | ".join(parts), file=sys.stderr)
        return args[0] if len(args) == 1 else args

    ic = cast(Any, _ic_fallback)

LOGGER_NAME = "shadowmancer.icecream"
DEFAULT_PREFIX = "[shadows] "


class IcecreamBackend(LogBackendInterface):
    """
    Backend that routes messages through ``logging`` and dumps stage data with icecream.

    Data dumps (``log_data``) only appear at debug level.
    """

    def __init__(self) -> None:
        self._logger = logging.getLogger(LOGGER_NAME)
        self._logger.propagate = False
        self._log_level = LogLevel.WARNING
        self._log_format = "%(asctime)s [%(levelname)s] %(message)s"
        self._log_file: Optional[str] = None
        self._console_enabled = True
        if ICECREAM_AVAILABLE:
            ic.configureOutput(prefix=DEFAULT_PREFIX, includeContext=False)

    def initialize(
        self,
        log_level: Optional[Union[int, str, LogLevel]] = None,
        log_format: Optional[str] = None,
        log_file: Optional[str] = None,
        console_enabled: bool = True,
        ic_prefix: Optional[str] = None,
        **kwargs: Any,
    ) -> None:
        self._log_level = LogLevel.from_value(log_level, LogLevel.WARNING)
        self._log_format = log_format or self._log_format
        self._log_file = log_file or None
        self._console_enabled = console_enabled
        if ICECREAM_AVAILABLE:
            ic.configureOutput(prefix=ic_prefix or DEFAULT_PREFIX, includeContext=False)
        self._configure_loggers()

    def _configure_loggers(self) -> None:
        for handler in self._logger.handlers[:]:
            self._logger.removeHandler(handler)
            handler.close()

        python_log_level = self._log_level.value
        self._logger.setLevel(python_log_level)

        if self._console_enabled:
            console_handler = logging.StreamHandler(sys.stderr)
            console_handler.setLevel(python_log_level)
            console_handler.setFormatter(logging.Formatter(self._log_format))
            self._logger.addHandler(console_handler)

        if self._log_file:
            file_handler = logging.FileHandler(self._log_file, encoding="utf-8")
            file_handler.setLevel(python_log_level)
            file_handler.setFormatter(logging.Formatter(self._log_format))
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
        if isinstance(data, pl.DataFrame):
            ic(f"[{stage_name}]", data.shape, data.head(10))
        else:
            ic(f"[{stage_name}]", data)
