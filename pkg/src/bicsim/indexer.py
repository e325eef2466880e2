"""Reference bitmap index construction and bitwise query evaluation.

This module is the ground truth the hardware pipeline is checked against:
the index is built by a direct nested scan over records and keys.
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .errors import BoundsError, DimensionError


def _check_byte(value, what):
    if not isinstance(value, int) or isinstance(value, bool) or not 0 <= value <= 0xFF:
        raise DimensionError(f"{what} must be an 8-bit unsigned value, got {value!r}")


@dataclass(frozen=True)
class Record:
    """A fixed-width row of 8-bit words; positions with a cleared mask bit are ignored."""

    words: tuple[int, ...]
    valid: tuple[bool, ...]

    def __init__(self, words: Iterable[int], valid: Iterable[bool] | None = None):
        words = tuple(words)
        valid = (True,) * len(words) if valid is None else tuple(bool(v) for v in valid)
        if not words:
            raise DimensionError("record width must be >= 1")
        if len(valid) != len(words):
            raise DimensionError(f"valid mask length {len(valid)} != record width {len(words)}")
        for w in words:
            _check_byte(w, "record word")
        object.__setattr__(self, "words", words)
        object.__setattr__(self, "valid", valid)

    @property
    def width(self) -> int:
        return len(self.words)

    def valid_words(self) -> set[int]:
        return {w for w, v in zip(self.words, self.valid) if v}


def check_keys(keys: Sequence[int]) -> tuple[int, ...]:
    keys = tuple(keys)
    if not keys:
        raise DimensionError("key set must contain at least one key")
    for k in keys:
        _check_byte(k, "key")
    return keys


def check_records(records: Sequence[Record]) -> int:
    """Validate a record list and return its common width."""
    if not records:
        raise DimensionError("record list is empty")
    width = records[0].width
    for j, r in enumerate(records):
        if r.width != width:
            raise DimensionError(f"record {j} has width {r.width}, expected {width}")
    return width


@dataclass(frozen=True)
class BitmapIndex:
    """An ``m x n`` bit matrix stored as one integer per row.

    Bit ``j`` of ``rows[i]`` is set iff record ``j`` contains key ``i``.
    """

    rows: tuple[int, ...]
    n: int

    def __post_init__(self):
        if self.n < 1 or not self.rows:
            raise DimensionError("bitmap index must be at least 1x1")
        limit = 1 << self.n
        for r in self.rows:
            if not 0 <= r < limit:
                raise DimensionError("row has bits outside the column range")

    @property
    def m(self) -> int:
        return len(self.rows)

    @property
    def column_mask(self) -> int:
        return (1 << self.n) - 1

    def bit(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def row(self, i: int) -> tuple[int, ...]:
        return tuple((self.rows[i] >> j) & 1 for j in range(self.n))

    def to_lists(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.m)]

    @classmethod
    def from_lists(cls, bits: Sequence[Sequence[int]]) -> BitmapIndex:
        if not bits or not bits[0]:
            raise DimensionError("bitmap index must be at least 1x1")
        n = len(bits[0])
        rows = []
        for line in bits:
            if len(line) != n:
                raise DimensionError("ragged bit matrix")
            rows.append(sum((1 << j) for j, b in enumerate(line) if b))
        return cls(tuple(rows), n)

    def canonical_bytes(self) -> bytes:
        """Row-major bit serialization used for digests.

        Layout: ``m`` and ``n`` as little-endian uint32, then the ``m*n`` bits
        in row-major order packed MSB-first, zero padded to a whole byte.
        """
        out = bytearray(struct.pack("<II", self.m, self.n))
        acc = 0
        nbits = 0
        for i in range(self.m):
            for j in range(self.n):
                acc = (acc << 1) | self.bit(i, j)
                nbits += 1
                if nbits == 8:
                    out.append(acc)
                    acc = nbits = 0
        if nbits:
            out.append(acc << (8 - nbits))
        return bytes(out)

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_bytes()).hexdigest()


def build_reference_index(records: Sequence[Record], keys: Sequence[int]) -> BitmapIndex:
    check_records(records)
    keys = check_keys(keys)
    rows = []
    for key in keys:
        row = 0
        for j, record in enumerate(records):
            for word, ok in zip(record.words, record.valid):
                if ok and word == key:
                    row |= 1 << j
                    break
        rows.append(row)
    return BitmapIndex(tuple(rows), len(records))


# Query expression trees ------------------------------------------------------


@dataclass(frozen=True)
class Leaf:
    index: int


@dataclass(frozen=True)
class Not:
    operand: QueryExpr


@dataclass(frozen=True)
class And:
    operands: tuple[QueryExpr, ...]

    def __init__(self, *operands: QueryExpr):
        if not operands:
            raise ValueError("AND needs at least one operand")
        object.__setattr__(self, "operands", tuple(operands))


@dataclass(frozen=True)
class Or:
    operands: tuple[QueryExpr, ...]

    def __init__(self, *operands: QueryExpr):
        if not operands:
            raise ValueError("OR needs at least one operand")
        object.__setattr__(self, "operands", tuple(operands))


QueryExpr = Union[Leaf, Not, And, Or]


def _eval_mask(bi: BitmapIndex, expr: QueryExpr) -> int:
    if isinstance(expr, Leaf):
        if not 0 <= expr.index < bi.m:
            raise BoundsError(f"key index {expr.index} out of range for {bi.m}-row index")
        return bi.rows[expr.index]
    if isinstance(expr, Not):
        return ~_eval_mask(bi, expr.operand) & bi.column_mask
    if isinstance(expr, And):
        acc = bi.column_mask
        for op in expr.operands:
            acc &= _eval_mask(bi, op)
        return acc
    if isinstance(expr, Or):
        acc = 0
        for op in expr.operands:
            acc |= _eval_mask(bi, op)
        return acc
    raise TypeError(f"not a query expression: {expr!r}")


def eval_query(bi: BitmapIndex, expr: QueryExpr) -> tuple[int, ...]:
    """Evaluate ``expr`` column by column; returns one bit per record."""
    mask = _eval_mask(bi, expr)
    return tuple((mask >> j) & 1 for j in range(bi.n))
