"""Simulator for a RAM-emulated-CAM bitmap index creation core and its power model."""

from .cam import BitBudget, CamBlock, CamConfig, bit_budget, cam_load_record, cam_match
from .indexer import And, BitmapIndex, Leaf, Not, Or, Record, build_reference_index, eval_query
from .multicore import Batch, CoreState, Mode, Policy, WorkloadTrace, dispatch, set_mode
from .pipeline import Buffer, CycleCount, Timing, buffer_write, run_core, transpose
from .power import (
    BiasConfig,
    OperatingPoint,
    Technique,
    active_power,
    energy_per_cycle,
    freq_at,
    integrate_energy,
    istb,
    spb,
    standby_power,
)
from .query import parse_query

__version__ = "0.1.0"
