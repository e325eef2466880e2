"""Multi-core system: batches in an ideal external store, Z cores, clock-gated standby.

Cores start in STANDBY.  A core is woken when it receives its first batch,
stays ACTIVE while work remains for it, then is put back into STANDBY.
Every mode change costs ``TRANSITION_CYCLES`` clock cycles on that core;
they are counted as ACTIVE cycles but carry no energy.

Timelines are in system-clock cycles.  The system clock keeps running while
a core's local clock is gated, so STANDBY intervals are measured in the same
units.
"""

from __future__ import annotations

import enum
import heapq
from dataclasses import dataclass, field
from typing import Sequence

from .errors import ConfigError, StateError, TraceError
from .indexer import BitmapIndex, Record, check_keys, check_records
from .pipeline import BicCore, CoreResult, Timing

TRANSITION_CYCLES = 1


class Mode(enum.Enum):
    ACTIVE = "active"
    STANDBY = "standby"


class Policy(enum.Enum):
    ROUND_ROBIN = "round_robin"
    FIRST_FREE = "first_free"


@dataclass(frozen=True)
class Batch:
    id: int
    records: tuple[Record, ...]
    keys: tuple[int, ...]

    def __init__(self, id: int, records: Sequence[Record], keys: Sequence[int]):
        object.__setattr__(self, "id", id)
        object.__setattr__(self, "records", tuple(records))
        object.__setattr__(self, "keys", check_keys(keys))
        check_records(self.records)

    @property
    def m(self) -> int:
        return len(self.keys)

    @property
    def n(self) -> int:
        return len(self.records)

    @property
    def w(self) -> int:
        return self.records[0].width


class CoreState:
    """A core plus its clock-gating control.

    ``stb1`` high isolates the system clock from the core.  The architectural
    state (``retained``) is simply left in place while gated.
    """

    def __init__(self, core_id: int = 0):
        self.core_id = core_id
        self.retained = BicCore(core_id)
        self.mode = Mode.STANDBY
        self.current_batch: int | None = None
        self.transition_cycles = 0

    @property
    def stb1(self) -> int:
        return 1 if self.mode is Mode.STANDBY else 0

    @property
    def clock_isolated(self) -> bool:
        return self.stb1 == 1

    def set_mode(self, mode: Mode) -> int:
        """Switch modes; returns the cycles charged for the transition."""
        mode = Mode(mode)
        if mode is self.mode:
            return 0
        self.mode = mode
        self.transition_cycles += TRANSITION_CYCLES
        return TRANSITION_CYCLES

    def run(self, batch: Batch, timing: Timing = Timing.SEQUENTIAL) -> CoreResult:
        if self.mode is not Mode.ACTIVE:
            raise StateError(f"core {self.core_id} is clock-gated")
        self.current_batch = batch.id
        try:
            return self.retained.run(batch.records, batch.keys, timing)
        finally:
            self.current_batch = None

    def match(self, key: int) -> int:
        if self.mode is not Mode.ACTIVE:
            raise StateError(f"core {self.core_id} is clock-gated")
        if self.retained.cam is None:
            raise StateError(f"core {self.core_id} has no record loaded")
        return self.retained.cam.match(key)

    def snapshot(self) -> tuple:
        core = self.retained
        cam = core.cam.snapshot() if core.cam is not None else None
        buf = None
        if core.buffer is not None:
            buf = (tuple(tuple(r) for r in core.buffer.rows), core.buffer.cursor)
        return (cam, buf)


def set_mode(core: CoreState, mode: Mode) -> CoreState:
    core.set_mode(mode)
    return core


@dataclass(frozen=True)
class Segment:
    """Half-open cycle interval ``[start, end)`` on one core."""

    start: int
    end: int
    mode: Mode
    batch_id: int | None = None
    transition: bool = False

    @property
    def cycles(self) -> int:
        return self.end - self.start


@dataclass(frozen=True)
class WorkloadTrace:
    timelines: tuple[tuple[Segment, ...], ...] = ()

    @property
    def cores(self) -> int:
        return len(self.timelines)

    @property
    def span(self) -> int:
        return max((tl[-1].end for tl in self.timelines if tl), default=0)

    def validate(self) -> None:
        span = self.span
        for c, tl in enumerate(self.timelines):
            t = 0
            for seg in tl:
                if seg.start != t:
                    raise TraceError(f"core {c}: gap or overlap at cycle {t}")
                if seg.end <= seg.start:
                    raise TraceError(f"core {c}: empty or negative segment at cycle {t}")
                if seg.transition and seg.mode is not Mode.ACTIVE:
                    raise TraceError(f"core {c}: transition cycles must be clocked")
                t = seg.end
            if t != span:
                raise TraceError(f"core {c}: timeline ends at {t}, trace spans {span}")

    def active_cycles(self) -> int:
        return sum(s.cycles for tl in self.timelines for s in tl if s.mode is Mode.ACTIVE)

    def concat(self, other: WorkloadTrace) -> WorkloadTrace:
        if not self.timelines:
            return other
        if not other.timelines:
            return self
        if self.cores != other.cores:
            raise TraceError("cannot concatenate traces with different core counts")
        off = self.span
        out = []
        for a, b in zip(self.timelines, other.timelines):
            shifted = tuple(
                Segment(s.start + off, s.end + off, s.mode, s.batch_id, s.transition) for s in b
            )
            out.append(a + shifted)
        return WorkloadTrace(tuple(out))


@dataclass
class DispatchResult:
    results: list[BitmapIndex]
    trace: WorkloadTrace
    batch_cycles: dict[int, int]
    assignment: dict[int, int]
    makespan: int
    cores: list[CoreState] = field(repr=False, default_factory=list)


def _check_batches(batches: Sequence[Batch]) -> None:
    if not batches:
        raise ConfigError("no batches to dispatch")
    ids = [b.id for b in batches]
    if len(set(ids)) != len(ids):
        raise ConfigError("batch ids must be unique")


def dispatch(batches: Sequence[Batch], z: int, policy: Policy = Policy.FIRST_FREE,
             timing: Timing = Timing.SEQUENTIAL) -> DispatchResult:
    """Index every batch on one of ``z`` cores.

    Results come back ordered by batch id whatever the policy or core count.
    Scheduling is a deterministic event simulation; ties go to the lowest
    core id.
    """
    if z < 1:
        raise ConfigError(f"core count must be >= 1, got {z}")
    policy = Policy(policy)
    timing = Timing(timing)
    _check_batches(batches)

    cores = [CoreState(i) for i in range(z)]
    work: list[list[Segment]] = [[] for _ in range(z)]
    free_at = [0] * z
    done: dict[int, BitmapIndex] = {}
    batch_cycles: dict[int, int] = {}
    assignment: dict[int, int] = {}

    def execute(c: int, batch: Batch) -> None:
        core = cores[c]
        start = free_at[c]
        if core.mode is Mode.STANDBY:
            start += core.set_mode(Mode.ACTIVE)
        res = core.run(batch, timing)
        end = start + res.cycles.total_cycles
        work[c].append(Segment(start, end, Mode.ACTIVE, batch.id))
        free_at[c] = end
        done[batch.id] = res.index
        batch_cycles[batch.id] = res.cycles.total_cycles
        assignment[batch.id] = c

    if policy is Policy.ROUND_ROBIN:
        for k, batch in enumerate(batches):
            execute(k % z, batch)
    else:
        ready = [(0, c) for c in range(z)]
        for batch in batches:
            _, c = heapq.heappop(ready)
            execute(c, batch)
            heapq.heappush(ready, (free_at[c], c))

    trace = _build_trace(cores, work)
    first = min(s.start for segs in work for s in segs)
    last = max(s.end for segs in work for s in segs)
    results = [done[b] for b in sorted(done)]
    return DispatchResult(results, trace, batch_cycles, assignment, last - first, cores)


def _build_trace(cores: list[CoreState], work: list[list[Segment]]) -> WorkloadTrace:
    timelines: list[list[Segment]] = []
    for core, segs in zip(cores, work):
        tl: list[Segment] = []
        if segs:
            t0 = segs[0].start
            if t0 > TRANSITION_CYCLES:
                tl.append(Segment(0, t0 - TRANSITION_CYCLES, Mode.STANDBY))
            if TRANSITION_CYCLES:
                tl.append(Segment(t0 - TRANSITION_CYCLES, t0, Mode.ACTIVE, transition=True))
            tl.extend(segs)
            t = segs[-1].end
            t += core.set_mode(Mode.STANDBY)
            if t > segs[-1].end:
                tl.append(Segment(segs[-1].end, t, Mode.ACTIVE, transition=True))
        timelines.append(tl)
    span = max((tl[-1].end for tl in timelines if tl), default=0)
    out = []
    for tl in timelines:
        t = tl[-1].end if tl else 0
        if t < span:
            tl.append(Segment(t, span, Mode.STANDBY))
        out.append(tuple(tl))
    trace = WorkloadTrace(tuple(out))
    trace.validate()
    return trace
