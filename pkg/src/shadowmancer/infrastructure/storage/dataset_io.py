"""JSON-lines interchange format of snapshot datasets.

The first line is a header object; every following line holds one snapshot::

    {"format": "shadowmancer-dataset", "version": 1, "num_qubits": 4, "protocol": {...}, ...}
    {"shot_index": 0, "scrambler_indices": [3, 0, 17, 5], "outcome": "a"}

``outcome`` is a zero-padded hex string with qubit 0 as the most significant bit.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, List, Union

import numpy as np
from pydantic import ValidationError

from ...domain.model.errors import DatasetError
from ...domain.model.protocol_spec import ProtocolSpec
from ...domain.model.snapshot import SnapshotDataset

logger = logging.getLogger(__name__)

FORMAT_NAME = "shadowmancer-dataset"
FORMAT_VERSION = 1

PathLike = Union[str, Path]


def bits_to_hex(bits: Iterable[int], num_qubits: int) -> str:
    value = 0
    for bit in bits:
        value = (value << 1) | int(bit)
    width = max(1, (num_qubits + 3) // 4)
    return format(value, f"0{width}x")


def hex_to_bits(text: str, num_qubits: int) -> List[int]:
    try:
        value = int(text, 16)
    except ValueError as exc:
        raise DatasetError("Outcome is not a hex string", {"outcome": text}) from exc
    if value >> num_qubits:
        raise DatasetError("Outcome has more bits than qubits", {"outcome": text, "num_qubits": num_qubits})
    return [(value >> (num_qubits - 1 - q)) & 1 for q in range(num_qubits)]


def header(dataset: SnapshotDataset) -> Dict[str, Any]:
    return {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "num_qubits": dataset.num_qubits,
        "protocol": json.loads(dataset.spec.model_dump_json()),
        "protocol_id": dataset.protocol_id,
        "master_seed": dataset.master_seed,
        "metadata": dataset.metadata,
    }


def dumps_dataset(dataset: SnapshotDataset) -> str:
    n = dataset.num_qubits
    lines = [json.dumps(header(dataset), sort_keys=True, separators=(",", ":"))]
    for row in range(dataset.shots):
        record = {
            "shot_index": int(dataset.shot_indices[row]),
            "scrambler_indices": [int(v) for v in dataset.scramblers[row]],
            "outcome": bits_to_hex(dataset.outcomes[row], n),
        }
        lines.append(json.dumps(record, sort_keys=True, separators=(",", ":")))
    return "\n".join(lines) + "\n"


def loads_dataset(text: str) -> SnapshotDataset:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise DatasetError("Dataset file is empty")
    try:
        head = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise DatasetError("Dataset header is not JSON", {"line": 1}) from exc
    if head.get("format") != FORMAT_NAME or head.get("version") != FORMAT_VERSION:
        raise DatasetError("Unsupported dataset format", {"format": head.get("format"), "version": head.get("version")})
    try:
        spec = ProtocolSpec.model_validate(head["protocol"])
        n = int(head["num_qubits"])
        master_seed = int(head["master_seed"])
    except (KeyError, TypeError, ValueError, ValidationError) as exc:
        raise DatasetError("Dataset header is incomplete", {"reason": str(exc).splitlines()[0]}) from exc
    if spec.num_qubits != n:
        raise DatasetError("Header qubit count disagrees with protocol", {"num_qubits": n})
    if head.get("protocol_id") not in (None, spec.protocol_id):
        raise DatasetError("Protocol id does not match protocol", {"protocol_id": head.get("protocol_id")})

    indices: List[int] = []
    scramblers: List[List[int]] = []
    outcomes: List[List[int]] = []
    for number, line in enumerate(lines[1:], start=2):
        try:
            record = json.loads(line)
            indices.append(int(record["shot_index"]))
            row = [int(v) for v in record["scrambler_indices"]]
            outcome = str(record["outcome"])
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise DatasetError("Malformed snapshot line", {"line": number}) from exc
        if len(row) != n:
            raise DatasetError("Snapshot has the wrong number of scramblers", {"line": number})
        scramblers.append(row)
        outcomes.append(hex_to_bits(outcome, n))
    if len(set(indices)) != len(indices):
        raise DatasetError("Duplicate shot index")
    try:
        return SnapshotDataset.from_arrays(
            spec,
            master_seed,
            np.array(indices, dtype=np.int64),
            np.array(scramblers, dtype=np.uint8).reshape(-1, n),
            np.array(outcomes, dtype=np.uint8).reshape(-1, n),
            dict(head.get("metadata") or {}),
        )
    except ValueError as exc:
        raise DatasetError("Snapshot records rejected", {"reason": str(exc).splitlines()[0]}) from exc


def write_dataset(dataset: SnapshotDataset, path: PathLike) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(dumps_dataset(dataset), encoding="utf-8")
    logger.info("wrote %d snapshots to %s", dataset.shots, target)
    return target


def read_dataset(path: PathLike) -> SnapshotDataset:
    source = Path(path)
    try:
        text = source.read_text(encoding="utf-8")
    except OSError as exc:
        raise DatasetError("Dataset file could not be read", {"path": str(source)}) from exc
    return loads_dataset(text)
