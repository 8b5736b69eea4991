"""Phaseonium fuel: three-level Lambda atoms with ground-state coherence.

Ancilla basis ordering is (|e>, |g1>, |g2>): one excited level on top of two
degenerate grounds. Populations are (alpha^2, beta^2/2, beta^2/2) with
beta^2 = 1 - alpha^2, and the two grounds carry the full-magnitude mutual
coherence (beta^2/2) e^{i phi}. Sweeping phi between 0 and 2 pi moves the
apparent temperature of the fuel above or below the classical temperature
of the same atoms with the coherence erased.

Natural units throughout: hbar = k_B = c = 1, temperatures in 1/t.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .operators import DensityMatrix, HilbertSpace

ANCILLA_DIM = 3
ANCILLA_SPACE = HilbertSpace((ANCILLA_DIM,))

# Indices into the ancilla basis.
EXCITED, GROUND_1, GROUND_2 = 0, 1, 2

# Log arguments closer to 1 than this are reported divergent instead of
# producing meaningless 1e12-scale temperatures downstream.
DIVERGENCE_WINDOW = 1e-12

__all__ = [
    "ANCILLA_DIM",
    "ANCILLA_SPACE",
    "PhaseoniumParams",
    "PhaseoniumState",
    "BathTemperature",
    "build_phaseonium",
    "decohered",
    "apparent_temperature",
    "classical_temperature",
    "temperature_ratio",
    "solve_alpha_for_temperature",
    "alpha_boundary_apparent",
    "ALPHA_BOUNDARY_CLASSICAL",
]

# Classical temperature exists only below alpha = sqrt(1/3).
ALPHA_BOUNDARY_CLASSICAL = math.sqrt(1.0 / 3.0)


@dataclass(frozen=True)
class PhaseoniumParams:
    """Excited-weight amplitude alpha, coherence phase phi, resonance omega."""

    alpha: float
    phi: float
    omega: float

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie strictly in (0, 1), got {self.alpha}")
        if self.omega <= 0.0:
            raise ValueError(f"omega must be positive, got {self.omega}")

    @property
    def beta_sq(self) -> float:
        return 1.0 - self.alpha**2


@dataclass(frozen=True)
class PhaseoniumState:
    """Ancilla density matrix together with the parameters that built it."""

    params: PhaseoniumParams
    rho: DensityMatrix


@dataclass(frozen=True)
class BathTemperature:
    """Temperature with a physicality flag.

    status is one of:
      ok         positive, well-defined temperature
      inverted   log argument in (0, 1): population-inverted fuel, T < 0
      divergent  log argument at 1 (within 1e-12): |T| -> infinity
      unphysical log argument at or below 0
    """

    value: float
    status: str

    @property
    def is_ok(self) -> bool:
        return self.status == "ok"


def build_phaseonium(params: PhaseoniumParams) -> PhaseoniumState:
    """Ancilla state diag(a^2, b^2/2, b^2/2) + ground coherence (b^2/2) e^{i phi}."""
    a_sq = params.alpha**2
    half_ground = params.beta_sq / 2.0
    mat = np.zeros((ANCILLA_DIM, ANCILLA_DIM), dtype=complex)
    mat[EXCITED, EXCITED] = a_sq
    mat[GROUND_1, GROUND_1] = half_ground
    mat[GROUND_2, GROUND_2] = half_ground
    coherence = half_ground * np.exp(1j * params.phi)
    mat[GROUND_1, GROUND_2] = coherence
    mat[GROUND_2, GROUND_1] = np.conj(coherence)
    rho = DensityMatrix(ANCILLA_SPACE, mat)
    if rho.min_eigenvalue() < -1e-12:
        raise ValueError("phaseonium construction produced a negative eigenvalue")
    return PhaseoniumState(params, rho)


def decohered(state: PhaseoniumState) -> PhaseoniumState:
    """Same populations with the ground-state coherence erased (diagonal Lambda atoms)."""
    mat = np.diag(np.diag(state.rho.mat))
    return PhaseoniumState(state.params, DensityMatrix(ANCILLA_SPACE, mat))


def _temperature_from_log_argument(omega: float, arg: float) -> BathTemperature:
    if arg <= 0.0:
        return BathTemperature(math.nan, "unphysical")
    if abs(arg - 1.0) < DIVERGENCE_WINDOW:
        return BathTemperature(math.inf, "divergent")
    value = omega / math.log(arg)
    if arg < 1.0:
        return BathTemperature(value, "inverted")
    return BathTemperature(value, "ok")


def apparent_temperature(params: PhaseoniumParams) -> BathTemperature:
    """Temperature the cavity equilibrates to under coherent fuel.

    T = omega / ln( beta^2 (1 - sin phi) / (2 alpha^2) ).
    """
    arg = params.beta_sq * (1.0 - math.sin(params.phi)) / (2.0 * params.alpha**2)
    return _temperature_from_log_argument(params.omega, arg)


def classical_temperature(params: PhaseoniumParams) -> BathTemperature:
    """Equilibrium temperature under the same atoms with coherence erased.

    T = omega / ln( beta^2 / (2 alpha^2) ); defined only for alpha < sqrt(1/3).
    """
    arg = params.beta_sq / (2.0 * params.alpha**2)
    return _temperature_from_log_argument(params.omega, arg)


def temperature_ratio(params: PhaseoniumParams) -> float:
    """Apparent over classical temperature, NaN when either is not ok.

    Evaluated as a ratio of logarithms, which is exact and avoids the
    intermediate temperatures.
    """
    t_app = apparent_temperature(params)
    t_cl = classical_temperature(params)
    if not (t_app.is_ok and t_cl.is_ok):
        return math.nan
    log_cl = math.log(params.beta_sq / (2.0 * params.alpha**2))
    log_app = math.log(
        params.beta_sq * (1.0 - math.sin(params.phi)) / (2.0 * params.alpha**2)
    )
    return log_cl / log_app


def solve_alpha_for_temperature(t_target: float, phi: float, omega: float) -> float:
    """Invert the apparent-temperature formula for alpha at fixed (phi, omega).

    alpha^2 = (1 - sin phi) / (2 e^{omega/T} + 1 - sin phi). Exact round-trip:
    apparent_temperature of the result recovers t_target.
    """
    if t_target <= 0.0:
        raise ValueError(f"target temperature must be positive, got {t_target}")
    one_minus_sin = 1.0 - math.sin(phi)
    if one_minus_sin <= 0.0:
        raise ValueError("sin(phi) = 1 leaves no bright ground weight to heat with")
    x = omega / t_target
    if x < 700.0:
        alpha_sq = one_minus_sin / (2.0 * math.exp(x) + one_minus_sin)
    else:
        # exp(x) overflows; the same expression through exp(-x) stays finite.
        damp = math.exp(-x)
        alpha_sq = one_minus_sin * damp / (2.0 + one_minus_sin * damp)
    alpha = math.sqrt(alpha_sq)
    if alpha == 0.0:
        raise ValueError(
            f"temperature {t_target} at omega {omega} is too cold to represent"
        )
    return alpha


def alpha_boundary_apparent(phi: float) -> float:
    """Largest alpha with a positive apparent temperature: sqrt((1-sin)/(3-sin))."""
    s = math.sin(phi)
    return math.sqrt((1.0 - s) / (3.0 - s))
