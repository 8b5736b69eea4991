#!/usr/bin/env python3
"""One full Otto cycle of a single cavity with a radiation-pressure piston.

Hot isochore (phaseonium at T = 2), 1% expansion, cold isochore (T = 0.01),
1% compression. The printout walks the stroke ledgers: heat on isochores,
the two work definitions on the adiabats, and the efficiency next to the
textbook benchmarks.
"""
import math

from phaseonium_engine import (
    BathSpec,
    CavityConfig,
    EngineConfig,
    run_cycle,
    work_heat_audit,
)

cfg = EngineConfig(
    cavity=CavityConfig(length=1.0, cross_section=1.0, n_levels=20),
    hot=BathSpec(2.0, 0.0),
    cold=BathSpec(0.01, 0.0),
    stroke_mode="ratio",
    compression_ratio=1.01,
    steps_per_adiabat=1000,
    cycles=4,
)
record = run_cycle(cfg)
audit = work_heat_audit(record)

print(f"limit cycle reached: {record.limit_cycle} (after {record.cycles_run} cycle(s))\n")
print(f"{'stroke':>16} {'dE':>12} {'Q_al':>12} {'W_al':>12} {'W_mech':>12}")
for kind, de, q, w_al, w_m in zip(
    audit.stroke_kinds,
    audit.stroke_delta_e,
    audit.stroke_q,
    audit.stroke_w_alicki,
    audit.stroke_w_mech,
):
    print(f"{kind:>16} {de:12.6f} {q:12.6f} {w_al:12.6f} {w_m:12.6f}")

print(f"\nfirst-law residual (worst stroke): {audit.max_residual:.2e}")
print(f"adiabat |W_mech / W_al| ratios:    {[round(r, 10) for r in audit.stroke_work_ratios]}")
print(f"\nQ_hot            = {record.q_hot:.6f}")
print(f"W_net (piston)   = {record.w_mech_net:.6f}")
print(f"eta              = {record.eta:.8f}")
print(f"eta_otto_ideal   = {record.eta_otto_ideal:.8f}   (1 - 1/1.01 = {1 - 1/1.01:.8f})")
print(f"eta_CA           = {record.eta_ca:.8f}   (1 - sqrt(0.005) = {1 - math.sqrt(0.005):.8f})")
