import json
import os
import threading
import time
from collections import deque
from typing import Any, ClassVar, Deque, Dict, List, Optional, Union

from ...domain.model.config_manager import ConfigManager
from ...domain.service.log_backend_interface import LogBackendInterface, LogData, LogLevel
from .icecream_backend import ICECREAM_AVAILABLE, IcecreamBackend
from .standard_backend import StandardBackend

HISTORY_LIMIT = 1000


class ShadowLogger:
    """
    Logging facade for campaigns.

    Picks the icecream backend when available and keeps a history of campaign
    stages (sampling, estimation, validation checks) with their durations.
    """

    _instance: ClassVar[Optional["ShadowLogger"]] = None
    _lock: ClassVar[threading.RLock] = threading.RLock()

    @classmethod
    def get_instance(cls) -> "ShadowLogger":
        with cls._lock:
            if cls._instance is None:
                cls._instance = ShadowLogger()
            return cls._instance

    @classmethod
    def reset_instance(cls) -> None:
        with cls._lock:
            cls._instance = None

    def __init__(self) -> None:
        """Use :meth:`get_instance` instead of calling this directly."""
        self._backend: LogBackendInterface = IcecreamBackend() if ICECREAM_AVAILABLE else StandardBackend()
        self._initialized = False
        limit = int(ConfigManager().get_setting("logging.history_limit", HISTORY_LIMIT) or HISTORY_LIMIT)
        # oldest stages drop off once the limit is reached
        self._stage_history: Deque[Dict[str, Any]] = deque(maxlen=max(1, limit))
        self._counter = 0

    @property
    def backend(self) -> LogBackendInterface:
        return self._backend

    def initialize(
        self,
        log_level: Optional[Union[int, str, LogLevel]] = None,
        log_format: Optional[str] = None,
        log_file: Optional[str] = None,
        console_enabled: bool = True,
        force_standard: bool = False,
        **kwargs: Any,
    ) -> None:
        with self._lock:
            if force_standard and not isinstance(self._backend, StandardBackend):
                self._backend = StandardBackend()
            self._backend.initialize(
                log_level=LogLevel.from_value(log_level, LogLevel.WARNING),
                log_format=log_format,
                log_file=log_file,
                console_enabled=console_enabled,
                **kwargs,
            )
            self._initialized = True

    def _ensure_initialized(self) -> None:
        if not self._initialized:
            settings = ConfigManager()
            self.initialize(
                log_level=settings.get_setting("logging.level"),
                log_format=settings.get_setting("logging.format"),
                log_file=settings.get_setting("logging.file"),
            )

    def debug(self, message: str, context: Optional[Dict[str, Any]] = None) -> None:
        self._ensure_initialized()
        self._backend.debug(message, context)

    def info(self, message: str, context: Optional[Dict[str, Any]] = None) -> None:
        self._ensure_initialized()
        self._backend.info(message, context)

    def warning(self, message: str, context: Optional[Dict[str, Any]] = None) -> None:
        self._ensure_initialized()
        self._backend.warning(message, context)

    def error(self, message: str, context: Optional[Dict[str, Any]] = None) -> None:
        self._ensure_initialized()
        self._backend.error(message, context)

    def critical(self, message: str, context: Optional[Dict[str, Any]] = None) -> None:
        self._ensure_initialized()
        self._backend.critical(message, context)

    def log_data(self, stage_name: str, data: LogData) -> None:
        self._ensure_initialized()
        self._backend.log_data(stage_name, data)

    def log_stage_start(self, stage_name: str, params: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        """
        Record the start of a campaign stage.

        Returns:
            Stage info to hand back to :meth:`log_stage_end`
        """
        self._ensure_initialized()
        with self._lock:
            self._counter += 1
            execution_id = f"{stage_name}_{self._counter}"
            stage_info = {
                "stage_name": stage_name,
                "params": dict(params or {}),
                "start_time": time.perf_counter(),
                "execution_id": execution_id,
            }
            self._stage_history.append({"stage": stage_info, "completed": False})
        self.info(f"Stage started: {stage_name}", {"execution_id": execution_id, **stage_info["params"]})
        return stage_info

    def log_stage_end(self, stage_info: Dict[str, Any], success: bool, detail: Optional[str] = None) -> None:
        self._ensure_initialized()
        duration = time.perf_counter() - stage_info.get("start_time", time.perf_counter())
        stage_name = stage_info.get("stage_name", "unknown")
        execution_id = stage_info.get("execution_id", "")
        status = "SUCCESS" if success else "FAILED"
        self.info(
            f"Stage {status}: {stage_name} in {duration:.3f}s",
            {"execution_id": execution_id, "duration": duration},
        )
        if detail and not success:
            self.error(f"Stage error: {detail}", {"execution_id": execution_id})
        with self._lock:
            for entry in reversed(self._stage_history):
                if entry["stage"]["execution_id"] == execution_id:
                    entry["completed"] = True
                    entry["result"] = {"success": success, "duration": duration, "detail": detail}
                    break

    def get_stage_history(self, limit: Optional[int] = None, success_only: bool = False) -> List[Dict[str, Any]]:
        with self._lock:
            history = list(self._stage_history)
        if success_only:
            history = [entry for entry in history if entry.get("result", {}).get("success", False)]
        if limit is not None and limit > 0:
            return history[-limit:]
        return history

    def clear_history(self) -> None:
        with self._lock:
            self._stage_history.clear()

    def export_history(self, filepath: str) -> str:
        """Write the stage history as JSON and return the path."""
        directory = os.path.dirname(filepath)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(filepath, "w", encoding="utf-8") as handle:
            json.dump(self.get_stage_history(), handle, indent=2, default=str)
        return filepath
