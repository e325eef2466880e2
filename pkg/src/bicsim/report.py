"""Run reports and curve tables.

A run report is a JSON document.  Electrical values carry their unit in the
key name; energies are in joules with a nanojoule convenience copy.
"""

from __future__ import annotations

import csv
import hashlib
import io
from typing import Sequence

from . import power
from .cam import CamConfig, bit_budget
from .errors import VerificationError
from .fileformat import BatchFile
from .indexer import BitmapIndex, build_reference_index
from .multicore import Policy, dispatch
from .pipeline import Timing

REPORT_FORMAT = "bicsim-run-report"
REPORT_VERSION = 1
DIGEST_ALGORITHM = "sha256"


def combined_digest(indexes: Sequence[BitmapIndex]) -> str:
    h = hashlib.sha256()
    for bi in indexes:
        h.update(bi.canonical_bytes())
    return h.hexdigest()


def run_workload(bf: BatchFile, *, cores: int = 1, policy: Policy = Policy.FIRST_FREE,
                 timing: Timing = Timing.SEQUENTIAL, bias: power.BiasConfig | None = None,
                 technique: power.Technique = power.Technique.CG_RBB,
                 verify: bool = True) -> tuple[dict, list[BitmapIndex]]:
    """Dispatch every batch in ``bf`` and build the run report."""
    timing, policy, technique = Timing(timing), Policy(policy), power.Technique(technique)
    if bias is None:
        bias = power.BiasConfig(v_dd=1.2, v_bb=-2)
    out = dispatch(bf.batches, cores, policy, timing)
    if verify:
        for batch, got in zip(sorted(bf.batches, key=lambda b: b.id), out.results):
            if got != build_reference_index(batch.records, batch.keys):
                raise VerificationError(f"batch {batch.id}: simulated index differs from reference")

    budget = bit_budget(CamConfig.for_width(bf.w), bf.m, bf.n)
    energy = power.integrate_energy(out.trace, bias, technique, budget)
    op = power.OperatingPoint.at(bias.v_dd)
    transitions = sum(c.transition_cycles for c in out.cores)

    per_batch = [
        {
            "id": b,
            "core": out.assignment[b],
            "total_cycles": out.batch_cycles[b],
            "digest": bi.digest(),
        }
        for b, bi in zip(sorted(out.batch_cycles), out.results)
    ]

    report = {
        "format": REPORT_FORMAT,
        "version": REPORT_VERSION,
        "geometry": {"m": bf.m, "n": bf.n, "w": bf.w, "batches": len(bf.batches)},
        "timing": timing.value,
        "cores": cores,
        "policy": policy.value,
        "cycles": {
            "per_batch": per_batch,
            "batch_total": sum(out.batch_cycles.values()),
            "makespan": out.makespan,
            "trace_span": out.trace.span,
            "active": out.trace.active_cycles(),
            "transitions": transitions,
        },
        "operating_point": {
            "v_dd_v": op.v_dd,
            "frequency_mhz": op.frequency * 1e-6,
            "active_power_mw": op.active_power * 1e3,
            "energy_per_cycle_pj": op.energy_per_cycle * 1e12,
        },
        "bias": {
            "v_dd_v": float(bias.v_dd),
            "v_bn_v": float(bias.v_bn),
            "v_bp_v": float(bias.v_bp),
            "v_bb_v": float(bias.v_bb),
        },
        "technique": technique.value,
        "energy": {
            "active_j": energy.total_active,
            "standby_j": energy.total_standby,
            "total_j": energy.total,
            "total_nj": energy.total * 1e9,
            "per_core": [
                {"core": c, "active_j": a, "standby_j": s}
                for c, (a, s) in enumerate(zip(energy.active, energy.standby))
            ],
        },
        "standby": {
            "power_w": energy.standby_power,
            "power_nw": energy.standby_power * 1e9,
            "extrapolated": power.standby_extrapolated(bias, technique),
            "reduction_cg_over_cg_rbb": {
                "computed": power.standby_reduction(),
                "stated": power.STATED_STANDBY_REDUCTION,
            },
        },
        "memory": {
            "cam_bits": budget.cam_bits,
            "buffer_bits": budget.buffer_bits,
            "total_bits": budget.total_bits,
        },
        "spb_pw_per_bit": energy.spb * 1e12,
        "digest": {
            "algorithm": DIGEST_ALGORITHM,
            "combined": combined_digest(out.results),
        },
        "verified": verify,
    }
    return report, out.results


# Curves ----------------------------------------------------------------------

CURVES = ("frequency", "energy", "leakage")


def _g(x: float) -> str:
    return f"{x:.4g}"


def _steps(lo: float, hi: float, step: float) -> list[float]:
    n = round((hi - lo) / step)
    return [round(lo + k * step, 2) for k in range(n + 1)]


def curve_rows(kind: str) -> tuple[list[str], list[list[str]]]:
    if kind == "frequency":
        header = ["vdd_v", "frequency_mhz", "active_power_mw"]
        rows = [[_g(v), _g(power.freq_at(v) * 1e-6), _g(power.active_power(v) * 1e3)]
                for v in _steps(power.VDD_MIN, power.VDD_MAX, 0.05)]
    elif kind == "energy":
        header = ["vdd_v", "energy_pj_per_cycle"]
        rows = [[_g(v), _g(power.energy_per_cycle(v) * 1e12)]
                for v in _steps(power.VDD_MIN, power.VDD_MAX, 0.05)]
    elif kind == "leakage":
        header = ["vdd_v", "vbb_v", "istb_a"]
        rows = [[_g(v), _g(b), _g(power.istb(v, b))]
                for v in _steps(power.VDD_MIN, power.VDD_MAX, 0.1)
                for b in _steps(power.VBB_MIN, power.VBB_MAX, 0.25)]
    else:
        raise ValueError(f"unknown curve {kind!r}; choose from {CURVES}")
    return header, rows


def curve_csv(kind: str) -> str:
    header, rows = curve_rows(kind)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def comparison_csv() -> str:
    """Standby-power-per-bit comparison, published rows plus this model's row."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["design", "technology", "area_mm2", "memory_kbits", "techniques",
                     "standby_uw", "spb_pw_per_bit", "source"])
    for row in power.COMPARISON_TABLE:
        stb = row["standby_w"]
        writer.writerow([row["design"], row["technology"], f"{row['area_mm2']:g}",
                         f"{row['memory_kbits']:g}", row["techniques"],
                         "" if stb is None else f"{stb * 1e6:g}",
                         f"{row['spb_w_per_bit'] * 1e12:g}", "published"])
    budget = bit_budget(CamConfig(), 8, 16)
    stb = power.standby_power(power.BiasConfig(v_dd=0.4, v_bb=-2), power.Technique.CG_RBB)
    writer.writerow(["bic-65sotb-model", "65SOTB", "", _g(budget.total_bits / power.KBIT), "CG+RBB",
                     _g(stb * 1e6), _g(power.spb(stb, budget) * 1e12), "model"])
    return buf.getvalue()
