import copy
import json
import logging
import os
from typing import Any, Dict, Optional, TypeVar, Union, cast

import yaml

logger = logging.getLogger(__name__)

T = TypeVar("T")

WORKERS_ENV = "SHADOWS_WORKERS"

DEFAULT_SETTINGS: Dict[str, Any] = {
    "logging": {"level": "WARNING", "format": None, "file": None, "history_limit": 1000},
    "sampling": {"chunk_size": 4096, "default_workers": 1, "dense_max_qubits": 24},
    "oracle": {"max_block_size": 3},
    "numerics": {"zero_threshold": 1e-12},
    "validation": {"fast_shots": 4000, "full_shots": 1000000},
    "cache": {"max_tables": 256},
}


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


class ConfigManager:
    """
    Settings for sampling, numerics, logging and validation.
    Loaded once from ``settings.yaml`` and merged over the built-in defaults.
    """

    _instance: Optional["ConfigManager"] = None
    _initialized: bool = False

    def __new__(cls) -> "ConfigManager":
        if cls._instance is None:
            cls._instance = super(ConfigManager, cls).__new__(cls)
            cls._instance._initialized = False
        return cls._instance

    def __init__(self) -> None:
        if self._initialized:
            return
        self._settings: Dict[str, Any] = copy.deepcopy(DEFAULT_SETTINGS)
        self._settings_path = self._find_config_path("settings.yaml")
        self._load_settings(self._settings_path)
        self._initialized = True

    @classmethod
    def reset(cls) -> None:
        """Forget the singleton; the next call reloads from disk."""
        cls._instance = None

    def _find_config_path(self, filename: str) -> str:
        """
        Search order:
        1. current directory
        2. ~/.shadowmancer/
        3. /etc/shadowmancer/
        4. the packaged shadowmancer/config directory
        """
        if os.path.exists(filename):
            return os.path.abspath(filename)

        home_config = os.path.expanduser(f"~/.shadowmancer/{filename}")
        if os.path.exists(home_config):
            return home_config

        system_config = f"/etc/shadowmancer/{filename}"
        if os.path.exists(system_config):
            return system_config

        package_dir = os.path.dirname(os.path.dirname(os.path.dirname(__file__)))
        package_config = os.path.join(package_dir, "config", filename)
        if os.path.exists(package_config):
            return package_config

        return filename

    def _load_settings(self, config_path: str) -> None:
        try:
            if not os.path.exists(config_path):
                logger.info(f"Settings file {config_path} does not exist, using default settings")
                return
            with open(config_path, "r", encoding="utf-8") as file:
                if config_path.endswith((".yaml", ".yml")):
                    loaded = yaml.safe_load(file)
                elif config_path.endswith(".json"):
                    loaded = json.load(file)
                else:
                    logger.warning(f"Unsupported configuration file format: {config_path}")
                    return
            if isinstance(loaded, dict):
                self._settings = _merge(self._settings, loaded)
            logger.info(f"Loaded settings from {config_path}")
        except (OSError, yaml.YAMLError, json.JSONDecodeError) as e:
            logger.error(f"Error loading settings: {str(e)}")

    def load_file(self, config_path: str) -> None:
        """Merge an explicit settings file over the current values."""
        self._settings_path = config_path
        self._load_settings(config_path)

    @property
    def settings_path(self) -> str:
        return self._settings_path

    def get_setting(self, key: str, default: Optional[T] = None) -> Optional[T]:
        """Dotted lookup, e.g. ``"sampling.chunk_size"``."""
        current: Union[Dict[str, object], object] = self._settings
        for part in key.split("."):
            if not isinstance(current, dict):
                return default
            current = current.get(part)
            if current is None:
                return default
        return cast(Optional[T], current)

    def set_setting(self, key: str, value: Any) -> None:
        """In-memory override; nothing is written back to disk."""
        keys = key.split(".")
        current = self._settings
        for part in keys[:-1]:
            current = current.setdefault(part, {})
        current[keys[-1]] = value

    def worker_count(self) -> int:
        """``SHADOWS_WORKERS`` when set, else ``sampling.default_workers``."""
        raw = os.environ.get(WORKERS_ENV)
        if raw:
            try:
                return max(1, int(raw))
            except ValueError:
                logger.warning(f"Ignoring non-integer {WORKERS_ENV}={raw!r}")
        return max(1, int(self.get_setting("sampling.default_workers", 1) or 1))

    def as_dict(self) -> Dict[str, Any]:
        return copy.deepcopy(self._settings)
