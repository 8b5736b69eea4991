"""Four-stroke Otto cycle for one or two cascaded cavities.

Strokes and bookkeeping:

* Isochores exchange energy with the phaseonium stream at fixed length.
  The Hamiltonian is constant, so the whole energy change is heat
  (Q = Tr[d rho H]); the ledger pins W_alicki = 0 exactly.
* Adiabats displace the mirror with no ancillas present. Fock populations
  ride along unchanged (the state is diagonal after an isochore and the
  mode frequency varies slowly), so the state matrix is untouched while
  omega = 2 pi / L rescales. All energy change is Alicki work
  Tr[rho dH] and the heat ledger stays at zero.

Work on the piston integrates the time-averaged radiation pressure
p = omega (2<n> + 1) / (2 V) over the displacement; the counter-rotating
terms of the full pressure operator average out over any stroke much longer
than 1/omega and would otherwise alias against the step clock. Each step
uses the midpoint pressure, which keeps the piston work strictly inside the
quasi-static bound.

Cavity Hamiltonian is omega (n + 1/2) per mode. The zero-point half is what
makes the quasi-static piston work equal the Alicki work on a stroke.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .bath import (
    BathTemperature,
    PhaseoniumParams,
    PhaseoniumState,
    apparent_temperature,
    build_phaseonium,
    solve_alpha_for_temperature,
)
from .collisions import (
    CascadeChannel,
    CascadeState,
    CollisionChannel,
    CollisionSettings,
    ConvergenceWindow,
    truncation_tail,
)
from .operators import (
    DensityMatrix,
    annihilation,
    creation,
    expectation,
    fock_space,
    joint_space,
    mutual_information,
    number_operator,
    partial_trace,
    von_neumann_entropy,
)

__all__ = [
    "CavityConfig",
    "EngineWorkspace",
    "BathSpec",
    "EngineConfig",
    "StrokeLedger",
    "CycleRecord",
    "AuditReport",
    "pressure_operator",
    "mean_pressure_operator",
    "run_isochore",
    "run_adiabat",
    "run_cycle",
    "work_heat_audit",
]

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class CavityConfig:
    """Cavity geometry; frequency follows the length as omega = 2 pi / L (c = 1)."""

    length: float = 1.0
    cross_section: float = 1.0
    n_levels: int = 20

    def __post_init__(self):
        if self.length <= 0.0:
            raise ValueError("cavity length must be positive")
        if self.cross_section <= 0.0:
            raise ValueError("cross section must be positive")
        if self.n_levels < 2:
            raise ValueError("need at least 2 Fock levels")

    @property
    def omega(self) -> float:
        return TWO_PI / self.length

    @property
    def volume(self) -> float:
        return self.cross_section * self.length

    def with_length(self, length: float) -> "CavityConfig":
        return replace(self, length=length)


@dataclass(frozen=True)
class BathSpec:
    """A phaseonium stream for one isochore.

    policy "target": alpha is re-solved at the stroke frequency so the
    stream's apparent temperature equals `temperature` exactly.

    policy "fixed-fuel": the atoms are prepared once, with alpha solved at
    (`temperature`, phi = 0) for the anchor frequency, and only the
    coherence phase is then dialled. Their apparent temperature shifts with
    phi (the coherence boost); `temperature` keeps the meaning of the
    classical calibration point.
    """

    temperature: float
    phi: float
    policy: str = "target"
    anchor_alpha: float | None = None

    def __post_init__(self):
        if self.policy not in ("target", "fixed-fuel"):
            raise ValueError(f"unknown bath policy {self.policy!r}")
        if self.temperature <= 0.0:
            raise ValueError("bath temperature must be positive")

    @classmethod
    def fixed_fuel(cls, temperature: float, phi: float, anchor_omega: float) -> "BathSpec":
        alpha = solve_alpha_for_temperature(temperature, 0.0, anchor_omega)
        return cls(temperature, phi, policy="fixed-fuel", anchor_alpha=alpha)

    def fuel(self, omega: float) -> PhaseoniumState:
        if self.policy == "target":
            alpha = solve_alpha_for_temperature(self.temperature, self.phi, omega)
        else:
            if self.anchor_alpha is None:
                raise ValueError("fixed-fuel bath needs anchor_alpha; use BathSpec.fixed_fuel")
            alpha = self.anchor_alpha
        return build_phaseonium(PhaseoniumParams(alpha, self.phi, omega))

    def apparent_temperature_at(self, omega: float) -> BathTemperature:
        return apparent_temperature(self.fuel(omega).params)


@dataclass(frozen=True)
class EngineConfig:
    cavity: CavityConfig = CavityConfig()
    n_cavities: int = 1
    hot: BathSpec = BathSpec(2.0, 0.0)
    cold: BathSpec = BathSpec(0.01, 0.0)
    collisions: CollisionSettings = CollisionSettings()
    stroke_mode: str = "ratio"  # ratio | force
    compression_ratio: float = 1.01
    external_pressure: float | None = None
    steps_per_adiabat: int = 1000
    cycles: int = 8
    hot_budget: int | None = None  # None = thermalize fully
    cold_budget: int | None = None
    limit_cycle_rtol: float = 1e-6
    record_mi: bool = True
    force_step_fraction: float = 1e-4
    force_pressure_rtol: float = 1e-9

    def __post_init__(self):
        if self.n_cavities not in (1, 2):
            raise ValueError("engine runs one cavity or a two-cavity cascade")
        if self.stroke_mode not in ("ratio", "force"):
            raise ValueError(f"unknown stroke mode {self.stroke_mode!r}")
        if self.stroke_mode == "ratio" and self.compression_ratio <= 1.0:
            raise ValueError("compression ratio must exceed 1")
        if self.stroke_mode == "force":
            if self.external_pressure is None or self.external_pressure <= 0.0:
                raise ValueError("force mode needs a positive external pressure")
        if self.steps_per_adiabat < 1:
            raise ValueError("need at least one adiabat step")


def pressure_operator(config: CavityConfig, t: float):
    """Radiation pressure operator at time t, counter-rotating terms included.

    pi(t) = omega/(2V) (a^dag a + a a^dag - a a e^{-2 i omega t}
                                          - a^dag a^dag e^{+2 i omega t})
    """
    space = fock_space(config.n_levels)
    a = annihilation(space)
    ad = creation(space)
    omega, vol = config.omega, config.volume
    phase = np.exp(-2j * omega * t)
    mat = ad @ a + a @ ad - phase * (a @ a) - np.conj(phase) * (ad @ ad)
    return (omega / (2.0 * vol)) * mat


def mean_pressure_operator(config: CavityConfig):
    """Time-averaged pressure omega/(2V) (a^dag a + a a^dag); what the ledger uses."""
    space = fock_space(config.n_levels)
    a = annihilation(space)
    ad = creation(space)
    return (config.omega / (2.0 * config.volume)) * (ad @ a + a @ ad)


@dataclass
class StrokeLedger:
    """Per-step time series and energy totals of one stroke."""

    kind: str  # hot-isochore | expansion | cold-isochore | compression
    time: list[float] = field(default_factory=list)
    length: list[float] = field(default_factory=list)
    omega: list[float] = field(default_factory=list)
    pressure: list[list[float]] = field(default_factory=list)  # per cavity
    occupation: list[list[float]] = field(default_factory=list)  # per cavity
    energy: list[float] = field(default_factory=list)  # total
    entropy: list[list[float]] = field(default_factory=list)  # per cavity marginal
    mutual_info: list[float] = field(default_factory=list)
    q_alicki: float = 0.0
    w_alicki: float = 0.0
    w_mech: float = 0.0
    collisions_used: int = 0
    tainted: bool = False
    converged: bool = True

    @property
    def is_isochore(self) -> bool:
        return self.kind.endswith("isochore")

    @property
    def delta_energy(self) -> float:
        return self.energy[-1] - self.energy[0]


@dataclass
class CycleRecord:
    strokes: list[StrokeLedger]
    q_hot: float
    q_cold: float
    w_mech_net: float
    w_mech_expansion: float
    w_alicki_net: float
    eta: float
    eta_ca: float
    eta_otto_ideal: float
    limit_cycle: bool
    energy_start: float
    energy_end: float
    cycles_run: int
    tainted: bool
    mi_expansion: float

    @property
    def status(self) -> str:
        if self.tainted:
            return "tainted-truncation"
        if not self.limit_cycle:
            return "non-converged"
        return "ok"


class EngineWorkspace:
    """Mutable cycle state: joint density matrix plus current geometry."""

    def __init__(self, cfg: EngineConfig):
        self.cfg = cfg
        self.mode_space = fock_space(cfg.cavity.n_levels)
        if cfg.n_cavities == 1:
            self.space = self.mode_space
            self._number_ops = [number_operator(self.space).mat]
        else:
            self.space = joint_space(self.mode_space, self.mode_space)
            n_single = number_operator(self.mode_space)
            eye = np.eye(cfg.cavity.n_levels, dtype=complex)
            self._number_ops = [
                np.kron(n_single.mat, eye),
                np.kron(eye, n_single.mat),
            ]
        self.rho = DensityMatrix.from_pure(self.space, 0)
        self.cavity = cfg.cavity
        self.clock = 0.0
        self._hot_channel = None
        self._cold_channel = None

    def occupations(self, mat: np.ndarray | None = None) -> list[float]:
        if mat is None:
            mat = self.rho.mat
        return [float(np.einsum("ij,ji->", n, mat).real) for n in self._number_ops]

    def energy(self, mat: np.ndarray | None = None) -> float:
        ns = self.occupations(mat)
        return self.cavity.omega * (sum(ns) + 0.5 * self.cfg.n_cavities)

    def marginals(self) -> list[DensityMatrix]:
        if self.cfg.n_cavities == 1:
            return [self.rho]
        return [partial_trace(self.rho, [k]) for k in range(2)]

    def entropies(self) -> list[float]:
        return [von_neumann_entropy(m) for m in self.marginals()]

    def mutual_info(self) -> float:
        if self.cfg.n_cavities == 1:
            return 0.0
        return mutual_information(self.rho, ([0], [1]))

    def pressures(self) -> list[float]:
        omega, vol = self.cavity.omega, self.cavity.volume
        return [omega * (2.0 * n + 1.0) / (2.0 * vol) for n in self.occupations()]

    def mean_pressure(self) -> float:
        return float(np.mean(self.pressures()))

    def channel(self, which: str):
        """Collision channel for the hot or cold stream.

        Cached across cycles except for temperature-targeted baths under
        force-balance strokes, where the isochore frequency drifts from
        cycle to cycle and the fuel must be re-solved at the current
        resonance.
        """
        bath = self.cfg.hot if which == "hot" else self.cfg.cold
        reusable = bath.policy == "fixed-fuel" or self.cfg.stroke_mode == "ratio"
        cached = self._hot_channel if which == "hot" else self._cold_channel
        if cached is not None and reusable:
            return cached
        fuel = bath.fuel(self.cavity.omega)
        if self.cfg.n_cavities == 1:
            chan = CollisionChannel(self.mode_space, fuel, self.cfg.collisions)
        else:
            chan = CascadeChannel(self.mode_space, fuel, self.cfg.collisions)
        if which == "hot":
            self._hot_channel = chan
        else:
            self._cold_channel = chan
        return chan


def _ledger_snapshot(ws: EngineWorkspace, ledger: StrokeLedger):
    ledger.time.append(ws.clock)
    ledger.length.append(ws.cavity.length)
    ledger.omega.append(ws.cavity.omega)
    ledger.pressure.append(ws.pressures())
    ledger.occupation.append(ws.occupations())
    ledger.energy.append(ws.energy())
    ledger.entropy.append(ws.entropies())
    ledger.mutual_info.append(ws.mutual_info() if ws.cfg.record_mi else math.nan)


def run_isochore(ws: EngineWorkspace, which: str, budget: int | None) -> StrokeLedger:
    """Collide with one stream at fixed length.

    budget None runs to convergence: each cavity decouples once its
    occupation plateaus, and in the cascade the second cavity additionally
    waits until the cavities have disentangled (mutual information below
    the mi_floor), matching the decoupled product end state.
    """
    cfg = ws.cfg
    settings = cfg.collisions
    ledger = StrokeLedger(kind=f"{which}-isochore")
    chan = ws.channel(which)
    _ledger_snapshot(ws, ledger)
    energy_before = ledger.energy[0]

    if budget is not None and budget < 0:
        raise ValueError("collision budget must be >= 0 or None")

    if cfg.n_cavities == 1:
        detector = ConvergenceWindow(settings.convergence_tol, settings.window)
        mat = ws.rho.mat
        k = 0
        converged = budget is not None
        while True:
            if budget is not None and k >= budget:
                break
            if budget is None and k >= settings.max_collisions:
                converged = False
                break
            mat = chan.apply(mat)
            k += 1
            ws.rho = DensityMatrix(ws.space, mat)
            ws.clock += settings.dt
            _ledger_snapshot(ws, ledger)
            if budget is None and detector.push(ledger.occupation[-1][0]):
                converged = True
                break
        ledger.collisions_used = k
        ledger.converged = converged
    else:
        detectors = [
            ConvergenceWindow(settings.convergence_tol, settings.window)
            for _ in range(2)
        ]
        flags = [False, False]
        mat = ws.rho.mat
        k = 0
        converged = budget is not None
        while True:
            if budget is not None and k >= budget:
                break
            if budget is None:
                if all(flags):
                    converged = True
                    break
                if k >= settings.max_collisions:
                    converged = False
                    break
            mat = chan.apply(mat, (not flags[0], not flags[1]))
            k += 1
            ws.rho = DensityMatrix(ws.space, mat)
            ws.clock += settings.dt
            _ledger_snapshot(ws, ledger)
            if budget is None:
                ns = ledger.occupation[-1]
                if not flags[0]:
                    if detectors[0].push(ns[0]):
                        flags[0] = True
                    detectors[1].push(ns[1])
                elif not flags[1]:
                    # The upstream cavity has already dropped out; the second
                    # decouples once its occupation settles and the leftover
                    # correlations have died off.
                    if detectors[1].push(ns[1]) and ws.mutual_info() <= settings.mi_floor:
                        flags[1] = True
        ledger.collisions_used = k
        ledger.converged = converged

    ledger.q_alicki = ledger.energy[-1] - energy_before
    ledger.w_alicki = 0.0
    ledger.w_mech = 0.0
    ledger.tainted = any(
        truncation_tail(m) > settings.truncation_tol for m in ws.marginals()
    )
    return ledger


def _adiabat_step(ws: EngineWorkspace, ledger: StrokeLedger, new_length: float):
    """Move the mirror by one step: populations frozen, omega rescales."""
    old_omega = ws.cavity.omega
    old_length = ws.cavity.length
    ns = ws.occupations()
    mid = 0.5 * (old_length + new_length)
    # Piston work from the time-averaged pressure at the step midpoint.
    delta = new_length - old_length
    s = ws.cavity.cross_section
    for n in ns:
        p_mid = TWO_PI * (2.0 * n + 1.0) / (2.0 * s * mid**2)
        ledger.w_mech += p_mid * s * delta
    ws.cavity = ws.cavity.with_length(new_length)
    new_omega = ws.cavity.omega
    ledger.w_alicki += (sum(ns) + 0.5 * ws.cfg.n_cavities) * (new_omega - old_omega)
    ws.clock += ws.cfg.collisions.dt
    _ledger_snapshot(ws, ledger)


def run_adiabat(ws: EngineWorkspace, direction: str) -> StrokeLedger:
    """Quasi-static mirror displacement, expansion or compression."""
    cfg = ws.cfg
    if direction not in ("expand", "compress"):
        raise ValueError(f"unknown adiabat direction {direction!r}")
    ledger = StrokeLedger(kind="expansion" if direction == "expand" else "compression")
    _ledger_snapshot(ws, ledger)

    if cfg.stroke_mode == "ratio":
        start = ws.cavity.length
        target = start * cfg.compression_ratio if direction == "expand" else start / cfg.compression_ratio
        grid = np.linspace(start, target, cfg.steps_per_adiabat + 1)
        for new_length in grid[1:]:
            _adiabat_step(ws, ledger, float(new_length))
    else:
        _run_force_balance(ws, ledger, direction)

    # Quasi-static transport leaves the state untouched, so no heat flows.
    ledger.q_alicki = 0.0
    return ledger


def _run_force_balance(ws: EngineWorkspace, ledger: StrokeLedger, direction: str):
    """Step the mirror until the averaged pressure balances the external load."""
    cfg = ws.cfg
    p_ext = cfg.external_pressure
    tol = cfg.force_pressure_rtol * p_ext
    sign = 1.0 if direction == "expand" else -1.0
    step = cfg.force_step_fraction * ws.cavity.length
    max_steps = 200 * cfg.steps_per_adiabat

    def margin() -> float:
        # Positive while the stroke still has pressure imbalance to consume.
        return sign * (ws.mean_pressure() - p_ext)

    if margin() <= 0.0:
        ledger.converged = True  # already balanced; degenerate zero-length stroke
        return

    def pressure_at(length: float) -> float:
        ns = ws.occupations()
        s = ws.cavity.cross_section
        return float(
            np.mean([TWO_PI * (2.0 * n + 1.0) / (2.0 * s * length**2) for n in ns])
        )

    steps = 0
    while steps < max_steps:
        candidate = ws.cavity.length + sign * step
        if candidate <= 0.0:
            raise ValueError("force balance drove the cavity length to zero")
        if sign * (pressure_at(candidate) - p_ext) > 0.0:
            _adiabat_step(ws, ledger, candidate)
            steps += 1
            continue
        # Crossed the balance point inside this step: bisect the sliver.
        lo, hi = ws.cavity.length, candidate
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if abs(pressure_at(mid) - p_ext) <= tol:
                lo = hi = mid
                break
            if sign * (pressure_at(mid) - p_ext) > 0.0:
                lo = mid
            else:
                hi = mid
        _adiabat_step(ws, ledger, 0.5 * (lo + hi))
        ledger.converged = True
        return
    raise ValueError(f"force balance not reached within {max_steps} steps")


def _curzon_ahlborn(t_hot: float, t_cold: float) -> float:
    return 1.0 - math.sqrt(t_cold / t_hot)


def run_cycle(cfg: EngineConfig) -> CycleRecord:
    """Run hot isochore, expansion, cold isochore, compression to a limit cycle.

    Repeats up to cfg.cycles full cycles from vacuum and returns the record
    of the last one executed, flagged as a limit cycle once the cycle-start
    and cycle-end energies agree to limit_cycle_rtol * |Q_hot|.
    """
    ws = EngineWorkspace(cfg)
    record = None
    for cycle_index in range(1, cfg.cycles + 1):
        energy_start = ws.energy()
        hot = run_isochore(ws, "hot", cfg.hot_budget)
        mi_expansion = ws.mutual_info() if cfg.record_mi else math.nan
        expansion = run_adiabat(ws, "expand")
        cold = run_isochore(ws, "cold", cfg.cold_budget)
        compression = run_adiabat(ws, "compress")
        energy_end = ws.energy()

        strokes = [hot, expansion, cold, compression]
        q_hot = hot.q_alicki
        q_cold = cold.q_alicki
        w_mech_net = expansion.w_mech + compression.w_mech
        w_alicki_net = expansion.w_alicki + compression.w_alicki
        eta = w_mech_net / q_hot if q_hot > 0.0 else math.nan
        omega_compressed = max(expansion.omega[0], compression.omega[-1])
        omega_expanded = expansion.omega[-1]
        limit_cycle = (
            q_hot > 0.0
            and abs(energy_end - energy_start) <= cfg.limit_cycle_rtol * abs(q_hot)
        )
        record = CycleRecord(
            strokes=strokes,
            q_hot=q_hot,
            q_cold=q_cold,
            w_mech_net=w_mech_net,
            w_mech_expansion=expansion.w_mech,
            w_alicki_net=w_alicki_net,
            eta=eta,
            eta_ca=_curzon_ahlborn(cfg.hot.temperature, cfg.cold.temperature),
            eta_otto_ideal=1.0 - omega_expanded / omega_compressed,
            limit_cycle=limit_cycle,
            energy_start=energy_start,
            energy_end=energy_end,
            cycles_run=cycle_index,
            tainted=any(s.tainted for s in strokes),
            mi_expansion=mi_expansion,
        )
        if limit_cycle:
            break
    return record


@dataclass
class AuditReport:
    """First-law bookkeeping of a completed cycle."""

    stroke_kinds: list[str]
    stroke_delta_e: list[float]
    stroke_q: list[float]
    stroke_w_alicki: list[float]
    stroke_w_mech: list[float]
    first_law_residuals: list[float]
    net_residual: float
    stroke_work_ratios: list[float]  # |W_mech / W_alicki| per adiabat
    piston_to_alicki_ratio: float
    alicki_output: float

    @property
    def max_residual(self) -> float:
        return max(map(abs, self.first_law_residuals + [self.net_residual]))


def work_heat_audit(record: CycleRecord) -> AuditReport:
    """Check dE = Q + W_alicki per stroke and compare the work definitions.

    Two comparisons are reported. Per adiabat, |W_mech/W_alicki| is the
    diagonal-state equivalence and sits at 1 for quasi-static strokes. The
    cycle-level piston_to_alicki_ratio divides the expansion piston work by
    the net Alicki work output of the cycle; it exceeds 1 because the
    zero-point pressure pushes the piston on every stroke but cancels out of
    the net Alicki balance, and it grows as partial thermalization (more
    correlated cavities) shrinks the cycle.
    """
    kinds, deltas, qs, w_als, w_ms, residuals, stroke_ratios = [], [], [], [], [], [], []
    for stroke in record.strokes:
        d_e = stroke.delta_energy
        kinds.append(stroke.kind)
        deltas.append(d_e)
        qs.append(stroke.q_alicki)
        w_als.append(stroke.w_alicki)
        w_ms.append(stroke.w_mech)
        scale = max(abs(d_e), abs(stroke.q_alicki), abs(stroke.w_alicki), 1e-30)
        residuals.append((d_e - stroke.q_alicki - stroke.w_alicki) / scale)
        if not stroke.is_isochore and abs(stroke.w_alicki) > 0.0:
            stroke_ratios.append(abs(stroke.w_mech / stroke.w_alicki))

    delta_cycle = record.energy_end - record.energy_start
    q_net = sum(qs)
    w_net = sum(w_als)
    scale = max(abs(delta_cycle), abs(q_net), abs(w_net), 1e-30)
    net_residual = (delta_cycle - q_net - w_net) / scale

    alicki_output = -record.w_alicki_net
    ratio = (
        record.w_mech_expansion / alicki_output if alicki_output > 0.0 else math.nan
    )
    return AuditReport(
        stroke_kinds=kinds,
        stroke_delta_e=deltas,
        stroke_q=qs,
        stroke_w_alicki=w_als,
        stroke_w_mech=w_ms,
        first_law_residuals=residuals,
        net_residual=net_residual,
        stroke_work_ratios=stroke_ratios,
        piston_to_alicki_ratio=ratio,
        alicki_output=alicki_output,
    )
