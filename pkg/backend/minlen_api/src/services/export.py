# src/services/export.py
"""JSON and CSV rendering of result records.

Floats are written in shortest round-trip form by both writers (orjson on one side,
``repr`` through the csv module on the other), so the two formats carry identical
numbers and re-reading them is lossless.
"""

import csv
import io
from typing import Any, Dict, Iterable, List, Optional, Tuple

import orjson

from src.models.records import ResultRecord, SweepResult

CSV_FIELDS = [
    "parameter",
    "value",
    "potential",
    "label",
    "energy",
    "q",
    "residual",
    "oracle_energy",
    "deviation",
    "convergence",
]


def to_json(payload: Any) -> bytes:
    if hasattr(payload, "to_dict"):
        payload = payload.to_dict()
    return orjson.dumps(payload, option=orjson.OPT_INDENT_2 | orjson.OPT_SERIALIZE_NUMPY) + b"\n"


def _rows(record: ResultRecord, point: Optional[Tuple[str, float]] = None) -> Iterable[Dict[str, Any]]:
    parameter, value = point if point else ("", "")
    for state in record.states:
        row = state.model_dump()
        row.update(parameter=parameter, value=value, potential=record.config.get("potential", ""))
        yield {key: ("" if row.get(key) is None else row.get(key)) for key in CSV_FIELDS}


def to_csv(payload) -> str:
    """One row per state (per sweep point), header first, RFC 4180 quoting."""
    buffer = io.StringIO(newline="")
    writer = csv.DictWriter(buffer, fieldnames=CSV_FIELDS, lineterminator="\r\n")
    writer.writeheader()
    if isinstance(payload, SweepResult):
        for value, record in zip(payload.values, payload.records):
            writer.writerows(_rows(record, (payload.sweep.parameter, value)))
    else:
        writer.writerows(_rows(payload))
    return buffer.getvalue()


def render(payload, fmt: str = "json") -> bytes:
    if fmt == "csv":
        return to_csv(payload).encode("utf-8")
    return to_json(payload)


def read_csv(text: str) -> List[Dict[str, str]]:
    return list(csv.DictReader(io.StringIO(text, newline="")))
