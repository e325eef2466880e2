"""Binary CAM emulated on a RAM addressed by the stored data value.

A ``P``-word x ``k``-bit CAM maps onto a RAM with ``2**k`` addresses of ``P``
bits each.  Storing byte ``v`` at position ``p`` sets bit ``p`` of the RAM
word at address ``v``; a search for key ``v`` is a single read of address
``v`` followed by an OR-reduction.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigError, DimensionError, StateError
from .indexer import Record

NOMINAL_POSITIONS = 32
NOMINAL_KEY_WIDTH = 8


@dataclass(frozen=True)
class CamConfig:
    positions: int = NOMINAL_POSITIONS
    key_width: int = NOMINAL_KEY_WIDTH
    generalized: bool = False

    def __post_init__(self):
        if self.positions < 1 or self.key_width < 1:
            raise ConfigError("CAM geometry must be at least 1 position x 1 bit")
        if not self.generalized and (
            self.positions != NOMINAL_POSITIONS or self.key_width != NOMINAL_KEY_WIDTH
        ):
            raise ConfigError(
                f"{self.positions}x{self.key_width} CAM requires generalized=True "
                f"(nominal mode is {NOMINAL_POSITIONS}x{NOMINAL_KEY_WIDTH})"
            )

    @classmethod
    def for_width(cls, width: int) -> CamConfig:
        """Geometry holding one record of ``width`` bytes."""
        return cls(positions=width, generalized=width != NOMINAL_POSITIONS)

    @property
    def addresses(self) -> int:
        return 1 << self.key_width

    @property
    def ram_bits_per_block(self) -> int:
        return self.addresses * self.positions

    @property
    def ram_bits_per_cam_bit(self) -> float:
        # 2**k / k; exactly 32 for the 8-bit nominal geometry
        return self.ram_bits_per_block / (self.positions * self.key_width)


class CamBlock:
    """Mutable RAM image of one CAM block."""

    def __init__(self, cfg: CamConfig | None = None):
        self.cfg = cfg or CamConfig()
        self.ram = [0] * self.cfg.addresses
        self.occupancy: list[int | None] = [None] * self.cfg.positions
        self.loaded = False

    def load(self, record: Record) -> CamBlock:
        if record.width != self.cfg.positions:
            raise DimensionError(
                f"record width {record.width} != CAM positions {self.cfg.positions}"
            )
        limit = self.cfg.addresses
        for w, ok in zip(record.words, record.valid):
            if ok and w >= limit:
                raise DimensionError(f"word {w:#x} does not fit a {self.cfg.key_width}-bit CAM")
        # Erase only the addresses the previous record touched.
        for v in self.occupancy:
            if v is not None:
                self.ram[v] = 0
        self.occupancy = [None] * self.cfg.positions
        for p, (w, ok) in enumerate(zip(record.words, record.valid)):
            if ok:
                self.ram[w] |= 1 << p
                self.occupancy[p] = w
        self.loaded = True
        return self

    def match(self, key: int) -> int:
        if not self.loaded:
            raise StateError("CAM block searched before a record was loaded")
        if not 0 <= key < self.cfg.addresses:
            return 0
        return 1 if self.ram[key] else 0

    def snapshot(self) -> tuple:
        return (tuple(self.ram), tuple(self.occupancy), self.loaded)


def cam_load_record(block: CamBlock, record: Record) -> CamBlock:
    return block.load(record)


def cam_match(block: CamBlock, key: int) -> int:
    return block.match(key)


@dataclass(frozen=True)
class BitBudget:
    cam_bits: int
    buffer_bits: int

    @property
    def total_bits(self) -> int:
        return self.cam_bits + self.buffer_bits


def bit_budget(cfg: CamConfig, m: int, n: int) -> BitBudget:
    """Memory bits of one core: the CAM's RAM image plus the ``n x m`` buffer."""
    if m < 1 or n < 1:
        raise DimensionError("budget needs m >= 1 and n >= 1")
    return BitBudget(cam_bits=cfg.ram_bits_per_block, buffer_bits=m * n)
