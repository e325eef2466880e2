"""Binary batch and index files.

Batch file (all integers little-endian)::

    magic    4s   b"BIC1"
    version  u16  1
    m        u32  keys per batch
    n        u32  records per batch
    w        u32  words per record
    count    u32  number of batches
    then per batch:
        m key bytes
        n records, each: w word bytes, ceil(w/8) validity bytes
        (position p is bit p%8 of byte p//8; padding bits must be zero)

Index file::

    magic    4s   b"BIX1"
    version  u16  1
    count    u32
    then per index:
        m u32, n u32, then m rows of ceil(n/8) bytes
        (record j is bit j%8 of byte j//8; padding bits must be zero)

Parsing is strict so that parse -> serialize reproduces the input exactly.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DimensionError, FormatError
from .indexer import BitmapIndex, Record
from .multicore import Batch

BATCH_MAGIC = b"BIC1"
INDEX_MAGIC = b"BIX1"
VERSION = 1

_BATCH_HEADER = struct.Struct("<4sHIIII")
_INDEX_HEADER = struct.Struct("<4sHI")
_DIMS = struct.Struct("<II")


def _mask_bytes(bits: Sequence[bool]) -> bytes:
    out = bytearray((len(bits) + 7) // 8)
    for p, b in enumerate(bits):
        if b:
            out[p >> 3] |= 1 << (p & 7)
    return bytes(out)


def _unpack_bits(data: bytes, count: int) -> list[bool]:
    bits = [bool(data[p >> 3] >> (p & 7) & 1) for p in range(count)]
    if count % 8 and data[-1] >> (count % 8):
        raise FormatError("nonzero padding bits")
    return bits


@dataclass(frozen=True)
class BatchFile:
    m: int
    n: int
    w: int
    batches: tuple[Batch, ...]

    def __post_init__(self):
        for b in self.batches:
            if (b.m, b.n, b.w) != (self.m, self.n, self.w):
                raise DimensionError(
                    f"batch {b.id} is {b.m}x{b.n}x{b.w}, file header says {self.m}x{self.n}x{self.w}"
                )

    def to_bytes(self) -> bytes:
        out = bytearray(_BATCH_HEADER.pack(BATCH_MAGIC, VERSION, self.m, self.n, self.w, len(self.batches)))
        for batch in self.batches:
            out += bytes(batch.keys)
            for rec in batch.records:
                out += bytes(rec.words)
                out += _mask_bytes(rec.valid)
        return bytes(out)

    @classmethod
    def from_bytes(cls, data: bytes) -> BatchFile:
        if len(data) < _BATCH_HEADER.size:
            raise FormatError("truncated batch file header")
        magic, version, m, n, w, count = _BATCH_HEADER.unpack_from(data)
        if magic != BATCH_MAGIC:
            raise FormatError(f"bad magic {magic!r}")
        if version != VERSION:
            raise FormatError(f"unsupported batch file version {version}")
        if m < 1 or n < 1 or w < 1:
            raise FormatError(f"invalid geometry m={m} n={n} w={w}")
        mask_len = (w + 7) // 8
        expected = _BATCH_HEADER.size + count * (m + n * (w + mask_len))
        if len(data) != expected:
            raise FormatError(f"batch file is {len(data)} bytes, header implies {expected}")
        pos = _BATCH_HEADER.size
        batches = []
        for b in range(count):
            keys = data[pos:pos + m]
            pos += m
            records = []
            for _ in range(n):
                words = data[pos:pos + w]
                pos += w
                valid = _unpack_bits(data[pos:pos + mask_len], w)
                pos += mask_len
                records.append(Record(words, valid))
            batches.append(Batch(b, records, keys))
        return cls(m, n, w, tuple(batches))

    def write(self, path) -> None:
        Path(path).write_bytes(self.to_bytes())

    @classmethod
    def read(cls, path) -> BatchFile:
        return cls.from_bytes(Path(path).read_bytes())


def generate(seed: int, m: int, n: int, w: int, batches: int = 1,
             alphabet: int = 256, valid_fraction: float = 1.0) -> BatchFile:
    """Random workload; identical arguments give identical files."""
    if min(m, n, w, batches) < 1:
        raise DimensionError(f"invalid geometry m={m} n={n} w={w} batches={batches}")
    if not 1 <= alphabet <= 256:
        raise DimensionError(f"alphabet must be in [1, 256], got {alphabet}")
    if not 0.0 <= valid_fraction <= 1.0:
        raise DimensionError(f"valid fraction must be in [0, 1], got {valid_fraction}")
    rng = np.random.Generator(np.random.PCG64(seed))
    out = []
    for b in range(batches):
        keys = rng.integers(0, alphabet, size=m).tolist()
        words = rng.integers(0, alphabet, size=(n, w)).tolist()
        valid = (rng.random(size=(n, w)) < valid_fraction).tolist()
        out.append(Batch(b, [Record(ws, vs) for ws, vs in zip(words, valid)], keys))
    return BatchFile(m, n, w, tuple(out))


def indexes_to_bytes(indexes: Sequence[BitmapIndex]) -> bytes:
    out = bytearray(_INDEX_HEADER.pack(INDEX_MAGIC, VERSION, len(indexes)))
    for bi in indexes:
        out += _DIMS.pack(bi.m, bi.n)
        row_len = (bi.n + 7) // 8
        for r in bi.rows:
            out += r.to_bytes(row_len, "little")
    return bytes(out)


def indexes_from_bytes(data: bytes) -> list[BitmapIndex]:
    if len(data) < _INDEX_HEADER.size:
        raise FormatError("truncated index file header")
    magic, version, count = _INDEX_HEADER.unpack_from(data)
    if magic != INDEX_MAGIC:
        raise FormatError(f"bad magic {magic!r}")
    if version != VERSION:
        raise FormatError(f"unsupported index file version {version}")
    pos = _INDEX_HEADER.size
    out = []
    for _ in range(count):
        if pos + _DIMS.size > len(data):
            raise FormatError("truncated index header")
        m, n = _DIMS.unpack_from(data, pos)
        pos += _DIMS.size
        if m < 1 or n < 1:
            raise FormatError(f"invalid index geometry {m}x{n}")
        row_len = (n + 7) // 8
        end = pos + m * row_len
        if end > len(data):
            raise FormatError("truncated index rows")
        rows = []
        for i in range(m):
            r = int.from_bytes(data[pos + i * row_len:pos + (i + 1) * row_len], "little")
            if r >> n:
                raise FormatError("nonzero padding bits")
            rows.append(r)
        pos = end
        out.append(BitmapIndex(tuple(rows), n))
    if pos != len(data):
        raise FormatError(f"{len(data) - pos} trailing bytes in index file")
    return out


def write_indexes(path, indexes: Sequence[BitmapIndex]) -> None:
    Path(path).write_bytes(indexes_to_bytes(indexes))


def read_indexes(path) -> list[BitmapIndex]:
    return indexes_from_bytes(Path(path).read_bytes())
