import json
from typing import Any, Dict, FrozenSet, List, Optional, Union

import polars as pl

from ..model.data_format import DataFormat
from ..model.shadow_norm import UNLEARNABLE

# Report columns where a null means "not learnable by the protocol set".
LEARNABILITY_COLUMNS: FrozenSet[str] = frozenset({"norm_sq", "max_norm_sq", "budget"})


def format_float(value: Optional[float], missing: str = "") -> str:
    """Shortest round-trip text of a float; ``missing`` for None."""
    if value is None:
        return missing
    return repr(float(value))


def missing_marker(column: str) -> str:
    return UNLEARNABLE if column in LEARNABILITY_COLUMNS else ""


class DataFormatConverter:
    """Renders report frames as CSV or JSON text.

    Float columns are written with :func:`format_float`, so a frame rendered twice
    gives identical bytes. Nulls in :data:`LEARNABILITY_COLUMNS` become ``UNLEARNABLE``;
    any other null is an empty CSV cell or a JSON ``null``.
    """

    @staticmethod
    def convert(data: pl.DataFrame, target_format: DataFormat) -> Union[pl.DataFrame, str]:
        if target_format == DataFormat.POLARS:
            return data
        if target_format == DataFormat.CSV:
            return DataFormatConverter.to_csv(data)
        return DataFormatConverter.to_json(data)

    @staticmethod
    def _float_columns(data: pl.DataFrame) -> List[str]:
        return [name for name, dtype in zip(data.columns, data.dtypes) if dtype in (pl.Float32, pl.Float64)]

    @staticmethod
    def _text_column(name: str, is_float: bool) -> pl.Expr:
        marker = missing_marker(name)
        if is_float and not marker:
            # nulls stay null so write_csv leaves the cell empty
            return pl.col(name).map_elements(format_float, return_dtype=pl.Utf8).alias(name)
        if is_float:
            return (
                pl.col(name)
                .map_elements(lambda value: format_float(value, marker), return_dtype=pl.Utf8, skip_nulls=False)
                .alias(name)
            )
        return pl.col(name).cast(pl.Utf8).fill_null(marker).alias(name)

    @staticmethod
    def to_csv(data: pl.DataFrame) -> str:
        floats = set(DataFormatConverter._float_columns(data))
        rewritten = [name for name in data.columns if name in floats or name in LEARNABILITY_COLUMNS]
        text_frame = data.with_columns([DataFormatConverter._text_column(name, name in floats) for name in rewritten])
        return text_frame.write_csv(include_header=True)

    @staticmethod
    def to_records(data: pl.DataFrame) -> List[Dict[str, Any]]:
        marked = [name for name in data.columns if name in LEARNABILITY_COLUMNS]
        records = data.to_dicts()
        for record in records:
            for name in marked:
                if record[name] is None:
                    record[name] = UNLEARNABLE
        return records

    @staticmethod
    def to_json(data: pl.DataFrame) -> str:
        return json.dumps(DataFormatConverter.to_records(data), ensure_ascii=False, indent=2) + "\n"
