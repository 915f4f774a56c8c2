from enum import Enum

from .errors import ConfigError


class DataFormat(Enum):
    """Output formats for reports and sweep tables.

    - POLARS: polars.DataFrame (canonical in-memory format)
    - CSV: header row plus one line per record
    - JSON: list of records
    """

    POLARS = "polars"
    CSV = "csv"
    JSON = "json"

    @classmethod
    def from_string(cls, format_name: str) -> "DataFormat":
        try:
            return cls(format_name.strip().lower())
        except ValueError as exc:
            raise ConfigError("Unknown output format", {"format": format_name}) from exc
