#!/usr/bin/env python3
"""Phaseonium fuel temperatures: how the coherence phase moves the bath.

A three-level atom with two degenerate grounds carries a coherence of phase
phi between them. The cavity it pumps thermalizes to an apparent
temperature that can sit above (0 < phi < pi) or below (pi < phi < 2 pi)
the classical temperature of the same atoms with the coherence erased.
"""
import math

import numpy as np

from phaseonium_engine import (
    PhaseoniumParams,
    apparent_temperature,
    classical_temperature,
    solve_alpha_for_temperature,
)
from phaseonium_engine.bath import alpha_boundary_apparent, temperature_ratio

OMEGA = 2 * math.pi  # cavity of unit length, natural units

print("Fuel with alpha^2 = 0.05, omega = 2 pi, sweeping the coherence phase:\n")
alpha = math.sqrt(0.05)
print(f"{'phi/pi':>8} {'T_phi':>10} {'T_cl':>10} {'ratio':>8}  regime")
for phi_frac in (0.0, 0.25, 0.45, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0):
    params = PhaseoniumParams(alpha, phi_frac * math.pi, OMEGA)
    t_app = apparent_temperature(params)
    t_cl = classical_temperature(params)
    if t_app.is_ok:
        regime = "boost" if t_app.value > t_cl.value + 1e-12 else (
            "suppress" if t_app.value < t_cl.value - 1e-12 else "classical"
        )
        print(
            f"{phi_frac:8.2f} {t_app.value:10.4f} {t_cl.value:10.4f} "
            f"{temperature_ratio(params):8.4f}  {regime}"
        )
    else:
        print(f"{phi_frac:8.2f} {'-':>10} {t_cl.value:10.4f} {'-':>8}  {t_app.status}")

print("\nValidity boundary alpha_max(phi) = sqrt((1 - sin phi)/(3 - sin phi)):")
for phi_frac in (0.0, 0.25, 0.49, 1.0, 1.5):
    print(f"  phi = {phi_frac:4.2f} pi -> alpha_max = {alpha_boundary_apparent(phi_frac * math.pi):.4f}")

print("\nDialling a bath to a target temperature (alpha solved per phase):")
for t_target in (0.5, 1.0, 2.0):
    for phi_frac in (0.0, 0.84):
        alpha = solve_alpha_for_temperature(t_target, phi_frac * math.pi, OMEGA)
        back = apparent_temperature(PhaseoniumParams(alpha, phi_frac * math.pi, OMEGA))
        print(
            f"  T = {t_target:4.2f}, phi = {phi_frac:4.2f} pi -> alpha = {alpha:.6f} "
            f"(round trip {back.value:.12f})"
        )
