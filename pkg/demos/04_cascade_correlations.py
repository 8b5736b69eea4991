#!/usr/bin/env python3
"""Two cascaded cavities sharing one phaseonium beam.

Each ancilla crosses cavity 1 and then cavity 2 before it is discarded,
so information flows one way and the cavities build up mutual information
whenever the isochores are cut short. With full thermalization the first
cavity decouples, the beam finishes the second one, and the joint state
returns to a product; with a partial collision budget the second cavity
runs a strictly smaller cycle and stays correlated with the first.
"""
import math

from phaseonium_engine import (
    BathSpec,
    CavityConfig,
    EngineConfig,
    run_cycle,
    work_heat_audit,
)
from phaseonium_engine.collisions import CollisionSettings

PI = math.pi


def cascade(budget):
    return run_cycle(
        EngineConfig(
            cavity=CavityConfig(length=1.0, n_levels=12),
            n_cavities=2,
            hot=BathSpec(2.0, 0.84 * PI),
            cold=BathSpec(0.01, PI / 40),
            collisions=CollisionSettings(convergence_tol=1e-9, max_collisions=20000),
            stroke_mode="ratio",
            compression_ratio=1.01,
            steps_per_adiabat=200,
            cycles=25,
            hot_budget=budget,
            cold_budget=budget,
        )
    )


for budget, label in ((None, "full thermalization"), (16, "partial budget (16 collisions)")):
    record = cascade(budget)
    audit = work_heat_audit(record)
    hot, expansion, cold, compression = record.strokes
    n_hot = hot.occupation[-1]
    n_cold = cold.occupation[-1]
    print(f"--- {label} ---")
    print(f"collisions per isochore: {hot.collisions_used} hot, {cold.collisions_used} cold")
    print(f"hot-end occupations:  cavity 1 = {n_hot[0]:.6f}, cavity 2 = {n_hot[1]:.6f}")
    print(f"cold-end occupations: cavity 1 = {n_cold[0]:.6f}, cavity 2 = {n_cold[1]:.6f}")
    print(f"mutual information during expansion: {record.mi_expansion:.3e}")
    print(f"Q_hot = {record.q_hot:.6f}, W_net = {record.w_mech_net:.6f}, eta = {record.eta:.8f}")
    print(f"piston work / Alicki output over the cycle: {audit.piston_to_alicki_ratio:.3f}")
    print()

print("With the shortened isochores the second cavity heats less and cools less:")
print("its energy-frequency loop sits strictly inside the first cavity's, while")
print("the efficiency stays pinned at the Otto value set by the 1% stroke.")
