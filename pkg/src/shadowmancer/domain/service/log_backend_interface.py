from abc import ABC, abstractmethod
from enum import Enum
from typing import Any, Dict, List, Optional, TypedDict, Union

import polars as pl
from typing_extensions import TypeAlias

LogData: TypeAlias = Union[str, pl.DataFrame, Dict[str, object], List[object], None]


class LogLevel(Enum):
    """Logging levels understood by every backend."""

    DEBUG = 10
    INFO = 20
    WARNING = 30
    ERROR = 40
    CRITICAL = 50

    @staticmethod
    def from_value(value: Union["LogLevel", int, str, None], default: Optional["LogLevel"] = None) -> "LogLevel":
        fallback = default or LogLevel.INFO
        if isinstance(value, LogLevel):
            return value
        if isinstance(value, int):
            for level in LogLevel:
                if level.value == value:
                    return level
            return fallback
        if isinstance(value, str):
            return LogLevel.__members__.get(value.upper(), fallback)
        return fallback


class LoggingConfigDict(TypedDict, total=False):
    """Keyword arguments accepted by ``initialize``."""

    log_level: Union[LogLevel, str]
    log_format: str
    log_file: str
    console_enabled: bool
    use_utc: bool
    force_standard: bool  # ShadowLogger only
    ic_prefix: str  # IcecreamBackend only


class LogBackendInterface(ABC):
    """Contract of a logging backend used by the ShadowLogger facade."""

    @abstractmethod
    def initialize(self, **kwargs: Any) -> None:
        pass

    @abstractmethod
    def log(self, level: LogLevel, message: str, context: Optional[Dict[str, Any]] = None) -> None:
        pass

    def debug(self, message: str, context: Optional[Dict[str, Any]] = None) -> None:
        self.log(LogLevel.DEBUG, message, context)

    def info(self, message: str, context: Optional[Dict[str, Any]] = None) -> None:
        self.log(LogLevel.INFO, message, context)

    def warning(self, message: str, context: Optional[Dict[str, Any]] = None) -> None:
        self.log(LogLevel.WARNING, message, context)

    def error(self, message: str, context: Optional[Dict[str, Any]] = None) -> None:
        self.log(LogLevel.ERROR, message, context)

    def critical(self, message: str, context: Optional[Dict[str, Any]] = None) -> None:
        self.log(LogLevel.CRITICAL, message, context)

    @abstractmethod
    def log_data(self, stage_name: str, data: LogData) -> None:
        """
        Dump an intermediate table or payload of a campaign stage at debug level.

        Args:
            stage_name: Stage that produced the data
            data: Table, mapping or text to show
        """
        pass
