"""Cavity-ancilla collisions and thermalization loops.

One collision is the exact unitary U = exp(-i V dt) on cavity x ancilla,
followed by discarding the ancilla. The interaction couples the mode to the
excited level through both grounds,

    V = g [ a^dag (|g1><e| + i |g2><e|) + a (|e><g1| - i |e><g2|) ],

a resonant two-legged Jaynes-Cummings form. The relative i between the legs
fixes which ground-state coherence quadrature exchanges energy: with the
fuel's coherence (beta^2/2) e^{i phi}, the de-excitation weight seen by the
cavity is beta^2 (1 - sin phi) / 2, so repeated collisions drive the mode to
exactly the fuel's apparent temperature. With equal legs the steady state
would instead follow a (1 + cos phi) law and contradict the temperature
formulas the rest of the package is built on.

The cascade variant sends each ancilla through cavity 1 and then cavity 2
before it is discarded, which is what correlates the two cavities.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bath import ANCILLA_SPACE, EXCITED, GROUND_1, GROUND_2, PhaseoniumState
from .operators import (
    DensityMatrix,
    HilbertSpace,
    OperatorMatrix,
    annihilation,
    expectation,
    identity,
    joint_space,
    matrix_exp,
    number_operator,
    tensor,
)

__all__ = [
    "CollisionSettings",
    "CollisionChannel",
    "CascadeState",
    "CascadeChannel",
    "ThermalizationReport",
    "ancilla_coupling",
    "interaction_hamiltonian",
    "collide_once",
    "collide_cascade",
    "fixed_point_occupation",
    "thermalize",
    "effective_temperature",
    "truncation_tail",
]


def ancilla_coupling() -> np.ndarray:
    """Atomic de-excitation operator A = |g1><e| + i |g2><e|."""
    a = np.zeros((3, 3), dtype=complex)
    a[GROUND_1, EXCITED] = 1.0
    a[GROUND_2, EXCITED] = 1.0j
    return a


@dataclass(frozen=True)
class CollisionSettings:
    """Knobs of a single collision and of the thermalization loop.

    coupling and dt only enter through the Rabi angle coupling*dt. The
    default angle 0.5 keeps every relevant Fock block (n <~ 8) far from the
    frozen-block pathology at sqrt(2n) coupling dt = pi.
    """

    coupling: float = 1.0
    dt: float = 0.5
    convergence_tol: float = 1e-7
    max_collisions: int = 5000
    window: int = 10
    truncation_tol: float = 1e-6
    mi_floor: float = 1e-7

    def __post_init__(self):
        if self.coupling < 0.0:
            raise ValueError("coupling must be >= 0")
        if self.dt <= 0.0:
            raise ValueError("dt must be positive")
        if self.convergence_tol <= 0.0:
            raise ValueError("convergence_tol must be positive")


def interaction_hamiltonian(cavity_space: HilbertSpace, coupling: float) -> OperatorMatrix:
    """Resonant cavity-ancilla coupling on cavity x ancilla."""
    a = annihilation(cavity_space)
    lower = OperatorMatrix(ANCILLA_SPACE, ancilla_coupling())
    v = tensor([a.dag(), lower]) + tensor([a, lower.dag()])
    return coupling * v


def _kraus_from_unitary(
    unitary: np.ndarray, block_dim: int, ancilla_rho: np.ndarray
) -> list[np.ndarray]:
    """Kraus operators of rho -> Tr_anc[U (rho x lam) U^dag], ancilla last."""
    evals, evecs = np.linalg.eigh(ancilla_rho)
    u = unitary.reshape(block_dim, 3, block_dim, 3)
    kraus = []
    for s in range(3):
        weight = evals[s]
        if weight < 1e-15:
            continue
        # <t| U |s-eigenvector> as a block_dim x block_dim matrix, per t.
        blocks = np.einsum("itjm,m->tij", u, evecs[:, s])
        for t in range(3):
            kraus.append(np.sqrt(weight) * blocks[t])
    return kraus


class CollisionChannel:
    """Precomputed single-cavity collision map for a fixed fuel and settings."""

    def __init__(
        self,
        cavity_space: HilbertSpace,
        ancilla: PhaseoniumState | DensityMatrix,
        settings: CollisionSettings,
    ):
        ancilla_rho = ancilla.rho if isinstance(ancilla, PhaseoniumState) else ancilla
        self.cavity_space = cavity_space
        self.settings = settings
        v = interaction_hamiltonian(cavity_space, settings.coupling)
        self.unitary = matrix_exp(v, -1j * settings.dt)
        self.kraus = _kraus_from_unitary(
            self.unitary.mat, cavity_space.total_dim, ancilla_rho.mat
        )

    def apply(self, mat: np.ndarray) -> np.ndarray:
        out = np.zeros_like(mat)
        for k in self.kraus:
            out += k @ mat @ k.conj().T
        return 0.5 * (out + out.conj().T)


def collide_once(
    rho_cavity: DensityMatrix,
    ancilla: PhaseoniumState | DensityMatrix,
    settings: CollisionSettings,
    channel: CollisionChannel | None = None,
) -> DensityMatrix:
    """One exact collision: Tr_anc[ U (rho x lam) U^dag ]."""
    if channel is None:
        channel = CollisionChannel(rho_cavity.space, ancilla, settings)
    if channel.cavity_space.dims != rho_cavity.space.dims:
        raise ValueError("channel was built for a different cavity space")
    return DensityMatrix(rho_cavity.space, channel.apply(rho_cavity.mat))


@dataclass
class CascadeState:
    """Joint state of the two cascaded cavities plus per-cavity decoupling flags.

    A cavity flagged thermalized no longer takes part in collisions; the
    ancillas pass it untouched.
    """

    rho: DensityMatrix
    thermalized: tuple[bool, bool] = (False, False)

    def __post_init__(self):
        if self.rho.space.n_subsystems != 2:
            raise ValueError("cascade state lives on exactly two cavities")
        if self.rho.space.dims[0] != self.rho.space.dims[1]:
            raise ValueError("cascade cavities must share one truncation")


class CascadeChannel:
    """Collision maps for the two-cavity cascade, one per decoupling pattern.

    Each ancilla traverses cavity 1 then cavity 2, so the joint collision
    unitary is U2 U1. Replacing either factor by the identity models a
    cavity that has thermalized and dropped out of the evolution.
    """

    def __init__(
        self,
        cavity_space: HilbertSpace,
        ancilla: PhaseoniumState | DensityMatrix,
        settings: CollisionSettings,
    ):
        ancilla_rho = ancilla.rho if isinstance(ancilla, PhaseoniumState) else ancilla
        self.cavity_space = cavity_space
        self.joint_dim = cavity_space.total_dim ** 2
        self.settings = settings
        self._ancilla_mat = ancilla_rho.mat

        a = annihilation(cavity_space)
        one = identity(cavity_space)
        lower = OperatorMatrix(ANCILLA_SPACE, ancilla_coupling())
        v1 = tensor([a.dag(), one, lower]) + tensor([a, one, lower.dag()])
        v2 = tensor([one, a.dag(), lower]) + tensor([one, a, lower.dag()])
        self._u1 = matrix_exp(settings.coupling * v1, -1j * settings.dt).mat
        self._u2 = matrix_exp(settings.coupling * v2, -1j * settings.dt).mat
        self._kraus_cache: dict[tuple[bool, bool], list[np.ndarray]] = {}

    def _kraus(self, active: tuple[bool, bool]) -> list[np.ndarray]:
        if active not in self._kraus_cache:
            full_dim = self.joint_dim * 3
            w = np.eye(full_dim, dtype=complex)
            if active[0]:
                w = self._u1 @ w
            if active[1]:
                w = self._u2 @ w
            self._kraus_cache[active] = _kraus_from_unitary(
                w, self.joint_dim, self._ancilla_mat
            )
        return self._kraus_cache[active]

    def apply(self, mat: np.ndarray, active: tuple[bool, bool]) -> np.ndarray:
        if not any(active):
            return mat
        out = np.zeros_like(mat)
        for k in self._kraus(active):
            out += k @ mat @ k.conj().T
        return 0.5 * (out + out.conj().T)


def collide_cascade(
    state: CascadeState,
    ancilla: PhaseoniumState | DensityMatrix,
    settings: CollisionSettings,
    channel: CascadeChannel | None = None,
) -> CascadeState:
    """One ancilla through both cavities; thermalized cavities are skipped."""
    cavity_space = HilbertSpace((state.rho.space.dims[0],))
    if channel is None:
        channel = CascadeChannel(cavity_space, ancilla, settings)
    active = (not state.thermalized[0], not state.thermalized[1])
    new_mat = channel.apply(state.rho.mat, active)
    return CascadeState(DensityMatrix(state.rho.space, new_mat), state.thermalized)


class ConvergenceWindow:
    """Stops when <n> moved by less than tol (relative) over `window` collisions."""

    def __init__(self, tol: float, window: int):
        self.tol = tol
        self.window = window
        self.history: list[float] = []

    def push(self, value: float) -> bool:
        self.history.append(value)
        if len(self.history) <= self.window:
            return False
        prev = self.history[-1 - self.window]
        scale = max(abs(value), 1e-12)
        return abs(value - prev) <= self.tol * scale


@dataclass
class ThermalizationReport:
    collisions: int
    status: str  # converged | converged_offtarget | max_collisions
    occupations: np.ndarray = field(repr=False)
    tainted: bool = False
    offdiag_mass: float = 0.0


def truncation_tail(rho: DensityMatrix) -> float:
    """Population of the top two Fock levels of a single-mode state."""
    probs = np.real(np.diag(rho.mat))
    return float(probs[-2:].sum())


def _offdiag_mass(mat: np.ndarray) -> float:
    return float(np.abs(mat - np.diag(np.diag(mat))).sum())


def fixed_point_occupation(ancilla: PhaseoniumState | DensityMatrix) -> float | None:
    """Mean occupation the collisions drive a cavity to, None if inverted.

    Detailed balance pins neighbouring Fock populations at the ratio of the
    ancilla's excited weight to its bright-ground weight, so the fixed point
    is Bose-Einstein with exp(-omega/T) equal to that ratio.
    """
    mat = (ancilla.rho if isinstance(ancilla, PhaseoniumState) else ancilla).mat
    q_e = mat[EXCITED, EXCITED].real
    # Bright ground state (|g1> + i|g2>)/sqrt(2): the combination the coupling sees.
    q_b = 0.5 * (
        mat[GROUND_1, GROUND_1].real
        + mat[GROUND_2, GROUND_2].real
        - 2.0 * mat[GROUND_1, GROUND_2].imag
    )
    if q_b <= q_e or q_e < 0.0:
        return None
    return q_e / (q_b - q_e)


def thermalize(
    rho: DensityMatrix,
    ancilla: PhaseoniumState | DensityMatrix,
    settings: CollisionSettings,
) -> tuple[DensityMatrix, ThermalizationReport]:
    """Collide until <n> settles, then sanity-check the plateau.

    Convergence is the windowed relative change of <n>. If the fuel has a
    well-defined fixed point and the plateau sits more than 10% away from
    it, the run is reported converged_offtarget (stalled exchange, e.g. a
    frozen Rabi block).
    """
    channel = CollisionChannel(rho.space, ancilla, settings)
    n_op = number_operator(rho.space)
    detector = ConvergenceWindow(settings.convergence_tol, settings.window)

    mat = rho.mat
    occupations = [float(np.einsum("ij,ji->", n_op.mat, mat).real)]
    status = "max_collisions"
    collisions = 0
    for k in range(1, settings.max_collisions + 1):
        mat = channel.apply(mat)
        n_now = float(np.einsum("ij,ji->", n_op.mat, mat).real)
        occupations.append(n_now)
        collisions = k
        if detector.push(n_now):
            status = "converged"
            break

    final = DensityMatrix(rho.space, mat)
    tainted = truncation_tail(final) > settings.truncation_tol

    if status == "converged":
        n_eq = fixed_point_occupation(ancilla)
        if n_eq is not None and abs(occupations[-1] - n_eq) > max(0.1 * n_eq, 1e-6):
            status = "converged_offtarget"

    report = ThermalizationReport(
        collisions=collisions,
        status=status,
        occupations=np.asarray(occupations),
        tainted=tainted,
        offdiag_mass=_offdiag_mass(mat),
    )
    return final, report


def effective_temperature(rho: DensityMatrix, omega: float) -> float:
    """Bose-Einstein inversion of the mean occupation: T = omega / ln(1 + 1/<n>)."""
    n_mean = float(expectation(rho, number_operator(rho.space)).real)
    if n_mean <= 0.0:
        return 0.0
    return omega / np.log1p(1.0 / n_mean)
