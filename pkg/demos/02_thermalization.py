#!/usr/bin/env python3
"""Collision-by-collision thermalization of a vacuum cavity.

A stream of fresh phaseonium ancillas, each colliding once with the mode
and then discarded, drives the cavity to the fuel's apparent temperature.
The trace below shows the mean occupation climbing onto the Bose-Einstein
plateau and the effective temperature locking to the target.
"""
import math

from phaseonium_engine import (
    CollisionSettings,
    DensityMatrix,
    PhaseoniumParams,
    build_phaseonium,
    effective_temperature,
    fock_space,
    solve_alpha_for_temperature,
    thermal_state,
    thermalize,
    uhlmann_fidelity,
)

OMEGA = 2 * math.pi
T_TARGET = 2.0
PHI = 0.84 * math.pi

alpha = solve_alpha_for_temperature(T_TARGET, PHI, OMEGA)
fuel = build_phaseonium(PhaseoniumParams(alpha, PHI, OMEGA))
space = fock_space(20)

final, report = thermalize(DensityMatrix.from_pure(space, 0), fuel, CollisionSettings())

n_be = 1.0 / math.expm1(OMEGA / T_TARGET)
print(f"fuel: alpha = {alpha:.5f}, phi = 0.84 pi, target T = {T_TARGET}")
print(f"converged after {report.collisions} collisions ({report.status})\n")
print(f"{'collision':>10} {'<n>':>12}")
marks = [0, 1, 2, 5, 10, 20, 40, 80, report.collisions]
for k in sorted(set(m for m in marks if m <= report.collisions)):
    print(f"{k:10d} {report.occupations[k]:12.8f}")

print(f"\nBose-Einstein occupation at T = {T_TARGET}: {n_be:.8f}")
print(f"effective temperature reached:  {effective_temperature(final, OMEGA):.6f}")
print(f"fidelity to the Gibbs state:    {uhlmann_fidelity(final, thermal_state(space, OMEGA, T_TARGET)):.6f}")
print(f"off-diagonal mass left:         {report.offdiag_mass:.2e}")
