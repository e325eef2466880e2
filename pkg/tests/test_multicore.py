import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bicsim.errors import ConfigError, DimensionError, StateError, TraceError
from bicsim.indexer import Record, build_reference_index
from bicsim.multicore import (
    TRANSITION_CYCLES,
    Batch,
    CoreState,
    Mode,
    Policy,
    Segment,
    WorkloadTrace,
    dispatch,
    set_mode,
)
from bicsim.pipeline import Timing, cycle_count

from conftest import random_instance, random_record


def nominal_batch(rng, bid=0):
    records = [random_record(rng, 32, alphabet=64) for _ in range(16)]
    return Batch(bid, records, [rng.randrange(64) for _ in range(8)])


def mixed_batches(rng, k):
    out = []
    for b in range(k):
        records, keys = random_instance(rng, max_m=6, max_n=10, max_w=12)
        out.append(Batch(b, records, keys))
    return out


def test_single_batch_on_four_cores(rng):
    res = dispatch([nominal_batch(rng)], 4)
    tl = res.trace.timelines
    work = [s for s in tl[0] if s.batch_id is not None]
    assert len(work) == 1 and work[0].cycles == 648 and work[0].mode is Mode.ACTIVE
    for c in (1, 2, 3):
        assert len(tl[c]) == 1
        assert tl[c][0].mode is Mode.STANDBY
        assert tl[c][0].start == 0 and tl[c][0].end == res.trace.span
    assert res.makespan == 648


def test_serial_makespan_is_sum(rng):
    batches = mixed_batches(rng, 7)
    res = dispatch(batches, 1)
    expected = sum(cycle_count(b.n, b.m, b.w).total_cycles for b in batches)
    assert res.makespan == expected
    assert res.trace.span == expected + 2 * TRANSITION_CYCLES


@pytest.mark.parametrize("policy", list(Policy))
def test_results_independent_of_core_count(rng, policy):
    batches = mixed_batches(rng, 11)
    one = dispatch(batches, 1, policy)
    eight = dispatch(batches, 8, policy)
    assert one.results == eight.results
    assert one.trace != eight.trace
    for b, bi in zip(batches, one.results):
        assert bi == build_reference_index(b.records, b.keys)


def test_results_in_id_order(rng):
    batches = mixed_batches(rng, 6)
    shuffled = [batches[i] for i in (4, 1, 5, 0, 3, 2)]
    res = dispatch(shuffled, 3)
    assert res.results == [build_reference_index(b.records, b.keys) for b in batches]


def test_round_robin_assignment(rng):
    batches = mixed_batches(rng, 7)
    res = dispatch(batches, 3, Policy.ROUND_ROBIN)
    assert [res.assignment[b.id] for b in batches] == [0, 1, 2, 0, 1, 2, 0]


def test_first_free_prefers_earliest_then_lowest_id():
    rng = random.Random(1)
    long = Batch(0, [random_record(rng, 20) for _ in range(20)], [1, 2])
    short = [Batch(i, [random_record(rng, 2)], [1]) for i in range(1, 5)]
    res = dispatch([long] + short, 2)
    assert res.assignment == {0: 0, 1: 1, 2: 1, 3: 1, 4: 1}


def test_zero_cores_and_empty_work(rng):
    with pytest.raises(ConfigError):
        dispatch([nominal_batch(rng)], 0)
    with pytest.raises(ConfigError):
        dispatch([], 2)
    with pytest.raises(ConfigError):
        dispatch([nominal_batch(rng, 0), nominal_batch(rng, 0)], 2)


def test_malformed_batch():
    with pytest.raises(DimensionError):
        Batch(0, [Record([1, 2]), Record([3])], [1])


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 12), st.integers(1, 6), st.sampled_from(list(Policy)),
       st.sampled_from(list(Timing)), st.integers(0, 2**32 - 1))
def test_trace_invariants(k, z, policy, timing, seed):
    batches = mixed_batches(random.Random(seed), k)
    res = dispatch(batches, z, policy, timing)
    trace = res.trace
    trace.validate()
    assert trace.cores == z
    # conservation: clocked cycles = batch work + mode transitions
    transitions = sum(c.transition_cycles for c in res.cores)
    assert trace.active_cycles() == sum(res.batch_cycles.values()) + transitions
    # every core ends clock-gated
    assert all(c.mode is Mode.STANDBY for c in res.cores)
    # idle cores are clock-gated for the whole run
    used = set(res.assignment.values())
    for c in range(z):
        if c not in used:
            assert [s.mode for s in trace.timelines[c]] == [Mode.STANDBY]


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 12), st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_first_free_is_work_conserving(k, z, seed):
    res = dispatch(mixed_batches(random.Random(seed), k), z, Policy.FIRST_FREE)
    starts = [s.start for tl in res.trace.timelines for s in tl if s.batch_id is not None]
    last_start = max(starts)
    for tl in res.trace.timelines:
        work = [s for s in tl if s.batch_id is not None]
        if not work:
            continue
        # a core only goes back to standby once no batch is left to start
        assert work[-1].end >= last_start
        # and never idles between its own batches
        for a, b in zip(work, work[1:]):
            assert a.end == b.start


def test_mode_round_trip_preserves_matches(rng):
    core = CoreState()
    assert core.mode is Mode.STANDBY and core.stb1 == 1
    set_mode(core, Mode.ACTIVE)
    assert core.stb1 == 0
    core.run(nominal_batch(rng))
    before = [core.match(k) for k in range(256)]
    snap = core.snapshot()
    set_mode(core, Mode.STANDBY)
    assert core.clock_isolated
    with pytest.raises(StateError):
        core.match(0)
    assert core.snapshot() == snap
    set_mode(core, Mode.ACTIVE)
    assert [core.match(k) for k in range(256)] == before
    assert core.snapshot() == snap


def test_transition_costs():
    core = CoreState()
    assert core.set_mode(Mode.STANDBY) == 0
    assert core.transition_cycles == 0
    assert core.set_mode(Mode.ACTIVE) == TRANSITION_CYCLES
    assert core.set_mode(Mode.ACTIVE) == 0
    assert core.set_mode(Mode.STANDBY) == TRANSITION_CYCLES
    assert core.transition_cycles == 2 * TRANSITION_CYCLES


def test_gated_core_cannot_run(rng):
    with pytest.raises(StateError):
        CoreState().run(nominal_batch(rng))


def test_trace_validation_catches_gaps():
    bad = WorkloadTrace(((Segment(0, 5, Mode.ACTIVE), Segment(6, 9, Mode.STANDBY)),))
    with pytest.raises(TraceError):
        bad.validate()
    uneven = WorkloadTrace(((Segment(0, 5, Mode.ACTIVE),), (Segment(0, 4, Mode.STANDBY),)))
    with pytest.raises(TraceError):
        uneven.validate()
    with pytest.raises(TraceError):
        WorkloadTrace(((Segment(0, 1, Mode.STANDBY, transition=True),),)).validate()


def test_trace_concat():
    a = WorkloadTrace(((Segment(0, 3, Mode.ACTIVE),), (Segment(0, 3, Mode.STANDBY),)))
    b = WorkloadTrace(((Segment(0, 2, Mode.STANDBY),), (Segment(0, 2, Mode.ACTIVE),)))
    ab = a.concat(b)
    ab.validate()
    assert ab.span == 5
    assert ab.timelines[1][1] == Segment(3, 5, Mode.ACTIVE)
