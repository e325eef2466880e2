"""One indexing core: CAM, match buffer and transpose unit, with cycle accounting.

Cycle model, one elementary memory operation per cycle:

* load: ``W`` cycles per record, one word per cycle (the write also
  overwrites the previous record, so erase costs nothing extra);
* match: ``M`` cycles per record, one key per cycle;
* transpose: ``M`` cycles, one bitmap row emitted per cycle.

``SEQUENTIAL`` runs the phases back to back, ``N*W + N*M + M`` cycles.
``OVERLAPPED`` loads record ``j+1`` while record ``j`` is being matched,
giving ``W + (N-1)*max(W, M) + M + M``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

from .cam import CamBlock, CamConfig
from .errors import BufferOverflowError, DimensionError, StateError
from .indexer import BitmapIndex, Record, check_keys, check_records


class Timing(enum.Enum):
    SEQUENTIAL = "sequential"
    OVERLAPPED = "overlapped"


class Buffer:
    """``n`` rows of ``m`` match bits, filled in key order one record per row."""

    def __init__(self, n: int, m: int):
        if n < 1 or m < 1:
            raise DimensionError("buffer must be at least 1x1")
        self.n = n
        self.m = m
        self.rows: list[list[int | None]] = [[None] * m for _ in range(n)]
        self.cursor = (0, 0)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> Buffer:
        buf = cls(len(rows), len(rows[0]) if rows else 0)
        for line in rows:
            if len(line) != buf.m:
                raise DimensionError("ragged buffer rows")
            for b in line:
                buf.write(b)
        return buf

    @property
    def full(self) -> bool:
        return self.cursor[0] >= self.n

    def write(self, bit: int) -> Buffer:
        if self.full:
            raise BufferOverflowError(f"write to full {self.n}x{self.m} buffer")
        if bit not in (0, 1):
            raise ValueError(f"buffer bit must be 0 or 1, got {bit!r}")
        r, c = self.cursor
        self.rows[r][c] = bit
        c += 1
        if c == self.m:
            r, c = r + 1, 0
        self.cursor = (r, c)
        return self


def buffer_write(buf: Buffer, bit: int) -> Buffer:
    return buf.write(bit)


def transpose(buf: Buffer) -> BitmapIndex:
    """Swap buffer rows (records) into bitmap rows (keys)."""
    if not buf.full:
        raise StateError(f"transpose of partially filled buffer (cursor {buf.cursor})")
    rows = []
    for i in range(buf.m):
        acc = 0
        for j in range(buf.n):
            if buf.rows[j][i]:
                acc |= 1 << j
        rows.append(acc)
    return BitmapIndex(tuple(rows), buf.n)


@dataclass(frozen=True)
class CycleCount:
    load_cycles: int = 0
    match_cycles: int = 0
    transpose_cycles: int = 0
    total_cycles: int = 0


@dataclass(frozen=True)
class CoreResult:
    index: BitmapIndex
    cycles: CycleCount


def cycle_count(n: int, m: int, w: int, timing: Timing = Timing.SEQUENTIAL) -> CycleCount:
    """Closed form of the cycle model for an ``n``-record, ``m``-key, ``w``-word run."""
    load, match, tp = n * w, n * m, m
    if Timing(timing) is Timing.SEQUENTIAL:
        total = load + match + tp
    else:
        total = w + (n - 1) * max(w, m) + m + tp
    return CycleCount(load, match, tp, total)


@dataclass
class BicCore:
    """Stateful core.  CAM and buffer contents survive between runs and across standby."""

    core_id: int = 0
    cam: CamBlock | None = None
    buffer: Buffer | None = None
    cycles_elapsed: int = 0

    def run(self, records: Sequence[Record], keys: Sequence[int],
            timing: Timing = Timing.SEQUENTIAL) -> CoreResult:
        timing = Timing(timing)
        width = check_records(records)
        keys = check_keys(keys)
        n, m = len(records), len(keys)
        if self.cam is None or self.cam.cfg.positions != width:
            self.cam = CamBlock(CamConfig.for_width(width))
        self.buffer = Buffer(n, m)

        load = match = 0
        total = 0
        for j, record in enumerate(records):
            self.cam.load(record)
            load += width
            for key in keys:
                self.buffer.write(self.cam.match(key))
                match += 1
            if timing is Timing.SEQUENTIAL:
                total += width + m
            elif j == 0:
                # first load cannot hide behind a previous match
                total += width
            else:
                total += max(width, m)
        if timing is Timing.OVERLAPPED:
            total += m  # drain: last record's match phase
        index = transpose(self.buffer)
        total += m
        cycles = CycleCount(load, match, m, total)
        self.cycles_elapsed += total
        return CoreResult(index, cycles)


def run_core(records: Sequence[Record], keys: Sequence[int],
             timing: Timing = Timing.SEQUENTIAL) -> CoreResult:
    return BicCore().run(records, keys, timing)
