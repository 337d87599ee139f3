"""Plate-format data model and CSV ingestion.

CSV schema (header required, comma-separated, UTF-8):

    plate_id,row,col,role,value

with role in {pos, neg, sample, empty} (case-insensitive) and value empty
only for role=empty. One output ``Plate`` per distinct plate_id, in order
of first appearance.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import DuplicateWell, MalformedRow, NonFiniteValue, UnknownRole
from .samples import SampleSet

EXPECTED_HEADER = ["plate_id", "row", "col", "role", "value"]


class WellRole(str, Enum):
    POSITIVE = "pos"
    NEGATIVE = "neg"
    SAMPLE = "sample"
    EMPTY = "empty"


@dataclass(frozen=True)
class Well:
    row: int
    col: int
    role: WellRole
    value: float | None = None

    def __post_init__(self):
        if self.row < 1 or self.col < 1:
            raise MalformedRow(f"well address ({self.row}, {self.col}) must be positive")
        if self.role is WellRole.EMPTY:
            if self.value is not None:
                raise MalformedRow("empty wells carry no value")
        else:
            if self.value is None or not math.isfinite(self.value):
                raise NonFiniteValue(
                    f"well ({self.row}, {self.col}) needs a finite value"
                )

    @property
    def address(self) -> str:
        return f"R{self.row}C{self.col}"


@dataclass
class Plate:
    """All wells of one plate; addresses must be unique."""

    plate_id: str
    wells: list[Well] = field(default_factory=list)

    def __post_init__(self):
        seen = set()
        for w in self.wells:
            key = (w.row, w.col)
            if key in seen:
                raise DuplicateWell(f"plate {self.plate_id}: duplicate well {w.address}")
            seen.add(key)

    def _values(self, role: WellRole) -> np.ndarray:
        return np.array([w.value for w in self.wells if w.role is role], dtype=np.float64)

    def control_sets(self) -> tuple[SampleSet, SampleSet]:
        """(negative controls, positive controls) as SampleSets."""
        return (
            SampleSet(self._values(WellRole.NEGATIVE), label=f"{self.plate_id}:neg"),
            SampleSet(self._values(WellRole.POSITIVE), label=f"{self.plate_id}:pos"),
        )

    def count(self, role: WellRole) -> int:
        return sum(1 for w in self.wells if w.role is role)

    def sample_wells(self) -> list[Well]:
        return [w for w in self.wells if w.role is WellRole.SAMPLE]

    def transformed(self, fn) -> "Plate":
        """New plate with fn applied to every non-empty well value."""
        wells = [
            Well(w.row, w.col, w.role, None if w.value is None else float(fn(w.value)))
            for w in self.wells
        ]
        return Plate(self.plate_id, wells)


_ROLES = {r.value: r for r in WellRole}


def _parse_row(fields: list[str], line_no: int) -> tuple[str, Well]:
    if len(fields) != len(EXPECTED_HEADER):
        raise MalformedRow(
            f"line {line_no}: expected {len(EXPECTED_HEADER)} fields, got {len(fields)}"
        )
    plate_id, row_s, col_s, role_s, value_s = (f.strip() for f in fields)
    if not plate_id:
        raise MalformedRow(f"line {line_no}: empty plate_id")
    try:
        row, col = int(row_s), int(col_s)
    except ValueError:
        raise MalformedRow(f"line {line_no}: row/col must be integers") from None
    role = _ROLES.get(role_s.lower())
    if role is None:
        raise UnknownRole(
            f"line {line_no}: role {role_s!r} not in {sorted(_ROLES)}"
        )
    if role is WellRole.EMPTY:
        if value_s:
            raise MalformedRow(f"line {line_no}: empty wells must not carry a value")
        value = None
    else:
        if not value_s:
            raise MalformedRow(f"line {line_no}: role {role.value!r} needs a value")
        try:
            value = float(value_s)
        except ValueError:
            raise MalformedRow(f"line {line_no}: value {value_s!r} is not a number") from None
        if not math.isfinite(value):
            raise NonFiniteValue(f"line {line_no}: value {value_s!r} is not finite")
    try:
        return plate_id, Well(row, col, role, value)
    except (MalformedRow, NonFiniteValue) as exc:
        raise type(exc)(f"line {line_no}: {exc}") from None


def load_plate_csv(source) -> list[Plate]:
    """Parse a plate CSV from a path or readable text stream.

    Errors carry the 1-based line number of the offending row. Duplicate
    (plate, row, col) addresses are rejected.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8", newline="") as fh:
            return load_plate_csv(fh)
    if isinstance(source, (bytes, bytearray)):
        return load_plate_csv(io.StringIO(source.decode("utf-8")))

    reader = csv.reader(source)
    try:
        header = next(reader)
    except StopIteration:
        raise MalformedRow("empty input: expected header " + ",".join(EXPECTED_HEADER)) from None
    if [h.strip().lower() for h in header] != EXPECTED_HEADER:
        raise MalformedRow(
            "line 1: expected header " + ",".join(EXPECTED_HEADER)
            + ", got " + ",".join(h.strip() for h in header)
        )

    order: list[str] = []
    wells: dict[str, list[Well]] = {}
    seen: set[tuple[str, int, int]] = set()
    for line_no, fields in enumerate(reader, start=2):
        if not fields or (len(fields) == 1 and not fields[0].strip()):
            continue
        plate_id, well = _parse_row(fields, line_no)
        key = (plate_id, well.row, well.col)
        if key in seen:
            raise DuplicateWell(
                f"line {line_no}: duplicate well {well.address} on plate {plate_id}"
            )
        seen.add(key)
        if plate_id not in wells:
            order.append(plate_id)
            wells[plate_id] = []
        wells[plate_id].append(well)
    return [Plate(pid, wells[pid]) for pid in order]
