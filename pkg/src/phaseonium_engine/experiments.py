"""Canned experiments with deterministic CSV outputs.

Every experiment takes a plain-dict config (JSON on disk), writes CSV files
plus a JSON manifest into an output directory, and reports a status. CSV
bodies are byte-stable across re-runs: floats are serialized with 17
significant digits, rows are emitted in a fixed grid order, and nothing
time- or host-dependent enters the tables. NaN cells always travel with a
reason code in the row's flag column.

Units are natural (hbar = k_B = c = 1); CSV headers tag them.
"""
from __future__ import annotations

import hashlib
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .bath import (
    ALPHA_BOUNDARY_CLASSICAL,
    PhaseoniumParams,
    alpha_boundary_apparent,
    apparent_temperature,
    build_phaseonium,
    classical_temperature,
    solve_alpha_for_temperature,
    temperature_ratio,
)
from .collisions import (
    CollisionChannel,
    CollisionSettings,
    effective_temperature,
    thermalize,
)
from .engine import (
    BathSpec,
    CavityConfig,
    EngineConfig,
    run_cycle,
    work_heat_audit,
)
from .operators import DensityMatrix, fock_space, number_operator, von_neumann_entropy

SCHEMA_VERSION = 1
WORKERS_ENV_VAR = "PHASEONIUM_ENGINE_WORKERS"

EXPERIMENTS = ("temp-ratio", "thermalize", "engine-sweep", "cascade-cycle", "mi-vs-work")

__all__ = [
    "SCHEMA_VERSION",
    "WORKERS_ENV_VAR",
    "EXPERIMENTS",
    "ExperimentResult",
    "default_config",
    "apply_overrides",
    "config_hash",
    "run_experiment",
]


# ---------------------------------------------------------------------------
# Config plumbing


def default_config(experiment: str) -> dict:
    """Built-in parameter block for each experiment."""
    pi = math.pi
    common = {
        "experiment": experiment,
        "schema_version": SCHEMA_VERSION,
        "seed": 0,
    }
    if experiment == "temp-ratio":
        return common | {
            "omega": 2 * pi,
            "alpha_points": 30,
            "phi_points": 61,
            "alpha_min": 0.02,
            "alpha_max_fraction": 0.98,
            "boundary_points": 241,
        }
    if experiment == "thermalize":
        return common | {
            "temperature": 2.0,
            "phi": 0.84 * pi,
            "length": 1.0,
            "n_levels": 20,
            "coupling": 1.0,
            "dt": 0.5,
            "convergence_tol": 1e-7,
            "max_collisions": 5000,
            "budget": None,
        }
    if experiment == "engine-sweep":
        return common | {
            "t_hot": 2.0,
            "t_cold": 0.01,
            "phi_hot_grid": [x * pi for x in (0.05, 0.15, 0.25, 0.35, 0.45)],
            "phi_cold_grid": [x * pi for x in (1.05, 1.1625, 1.275, 1.3875, 1.50)],
            "length": 1.0,
            "cross_section": 1.0,
            "n_levels": 20,
            "coupling": 1.0,
            "dt": 0.5,
            "hot_budget": 50,
            "cold_budget": 6,
            "steps_per_adiabat": 400,
            "cycles": 20,
            "external_pressure": None,  # None: vacuum radiation pressure at L
        }
    if experiment == "cascade-cycle":
        return common | {
            "t_hot": 2.0,
            "t_cold": 0.01,
            "phi_hot": 0.84 * pi,
            "phi_cold": pi / 40,
            "length": 1.0,
            "cross_section": 1.0,
            "n_levels": 12,
            "coupling": 1.0,
            "dt": 0.5,
            "compression_ratio": 1.01,
            "steps_per_adiabat": 300,
            "budgets": [None, 12],
            "cycles": 25,
            "convergence_tol": 1e-9,
            "max_collisions": 20000,
        }
    if experiment == "mi-vs-work":
        return common | {
            "t_hot": 2.0,
            "t_cold": 0.01,
            "phi_hot": 0.681 * pi,
            "phi_cold": 1.525 * pi,
            "length": 1.0,
            "cross_section": 1.0,
            "n_levels": 12,
            "coupling": 1.0,
            "dt": 0.5,
            "compression_ratio": 1.01,
            "steps_per_adiabat": 300,
            "budgets": [96, 64, 48, 32],
            "cycles": 30,
        }
    raise ValueError(f"unknown experiment {experiment!r}; pick one of {EXPERIMENTS}")


def apply_overrides(config: dict, overrides: list[str]) -> dict:
    """Apply key=value pairs, values parsed as JSON when possible."""
    out = dict(config)
    for item in overrides:
        if "=" not in item:
            raise ValueError(f"override {item!r} is not of the form key=value")
        key, raw = item.split("=", 1)
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        out[key.strip()] = value
    return out


def config_hash(config: dict) -> str:
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


# ---------------------------------------------------------------------------
# CSV + manifest output


def _format_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "%.17g" % value
    return str(value)


def _write_csv(path: Path, experiment: str, header: list[str], rows) -> None:
    lines = [f"# schema_version={SCHEMA_VERSION} experiment={experiment}"]
    lines.append(",".join(header))
    for row in rows:
        if len(row) != len(header):
            raise ValueError(f"row width {len(row)} does not match header {header}")
        lines.append(",".join(_format_cell(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


@dataclass
class ExperimentResult:
    experiment: str
    out_dir: Path
    files: list[str]
    status: str  # ok | tainted-truncation | non-converged

    @property
    def exit_code(self) -> int:
        return 0 if self.status == "ok" else 2


def _write_manifest(result: ExperimentResult, config: dict) -> None:
    entries = []
    for name in result.files:
        data = (result.out_dir / name).read_bytes()
        entries.append(
            {
                "name": name,
                "bytes": len(data),
                "sha256": hashlib.sha256(data).hexdigest(),
            }
        )
    manifest = {
        "schema_version": SCHEMA_VERSION,
        "experiment": result.experiment,
        "config": config,
        "config_hash": config_hash(config),
        "package_version": __version__,
        "created_utc": datetime.now(timezone.utc).isoformat(),
        "status": result.status,
        "files": entries,
    }
    _write_json(result.out_dir / "manifest.json", manifest)
    result.files.append("manifest.json")


# ---------------------------------------------------------------------------
# temp-ratio


def _temp_ratio_rows(cfg: dict):
    omega = cfg["omega"]
    if cfg["alpha_points"] < 1 or cfg["phi_points"] < 1:
        raise ValueError("temp-ratio needs a nonempty (alpha, phi) grid")
    alphas = np.linspace(
        cfg["alpha_min"],
        cfg["alpha_max_fraction"] * ALPHA_BOUNDARY_CLASSICAL,
        cfg["alpha_points"],
    )
    phis = np.linspace(0.0, 2 * math.pi, cfg["phi_points"])
    rows = []
    for alpha in alphas:
        for phi in phis:
            params = PhaseoniumParams(float(alpha), float(phi), omega)
            t_phi = apparent_temperature(params)
            t_cl = classical_temperature(params)
            flag = "ok"
            if not t_phi.is_ok:
                flag = f"apparent-{t_phi.status}"
            elif not t_cl.is_ok:
                flag = f"classical-{t_cl.status}"
            ratio = temperature_ratio(params) if flag == "ok" else math.nan
            rows.append(
                (
                    float(alpha),
                    float(phi),
                    t_phi.value if t_phi.status != "unphysical" else math.nan,
                    t_cl.value if t_cl.status != "unphysical" else math.nan,
                    ratio,
                    flag,
                )
            )
    return rows


def _run_temp_ratio(cfg: dict, out_dir: Path) -> ExperimentResult:
    rows = _temp_ratio_rows(cfg)
    _write_csv(
        out_dir / "temp_ratio.csv",
        "temp-ratio",
        ["alpha[-]", "phi[rad]", "T_phi[1/t]", "T_cl[1/t]", "ratio[-]", "domain_flag"],
        rows,
    )
    phis = np.linspace(0.0, 2 * math.pi, cfg["boundary_points"])
    boundary = [(float(p), alpha_boundary_apparent(float(p))) for p in phis]
    _write_csv(
        out_dir / "temp_ratio_boundary.csv",
        "temp-ratio",
        ["phi[rad]", "alpha_boundary[-]"],
        boundary,
    )
    return ExperimentResult(
        "temp-ratio", out_dir, ["temp_ratio.csv", "temp_ratio_boundary.csv"], "ok"
    )


# ---------------------------------------------------------------------------
# thermalize


def _run_thermalize(cfg: dict, out_dir: Path) -> ExperimentResult:
    omega = 2 * math.pi / cfg["length"]
    space = fock_space(cfg["n_levels"])
    settings = CollisionSettings(
        coupling=cfg["coupling"],
        dt=cfg["dt"],
        convergence_tol=cfg["convergence_tol"],
        max_collisions=cfg["max_collisions"],
    )
    alpha = solve_alpha_for_temperature(cfg["temperature"], cfg["phi"], omega)
    fuel = build_phaseonium(PhaseoniumParams(alpha, cfg["phi"], omega))
    channel = CollisionChannel(space, fuel, settings)
    n_op = number_operator(space)

    rho = DensityMatrix.from_pure(space, 0)
    budget = cfg["budget"]

    def row(k: int, state: DensityMatrix):
        n = float(np.einsum("ij,ji->", n_op.mat, state.mat).real)
        energy = omega * (n + 0.5)
        return (
            k,
            n,
            energy,
            von_neumann_entropy(state),
            effective_temperature(state, omega),
        )

    rows = [row(0, rho)]
    status = "converged"
    if budget is None:
        final, report = thermalize(rho, fuel, settings)
        # Replay the trajectory for the ledger; collisions are deterministic.
        state = rho
        for k in range(1, report.collisions + 1):
            state = DensityMatrix(space, channel.apply(state.mat))
            rows.append(row(k, state))
        status = report.status
        tainted = report.tainted
        collisions = report.collisions
        final_state = final
    else:
        state = rho
        for k in range(1, int(budget) + 1):
            state = DensityMatrix(space, channel.apply(state.mat))
            rows.append(row(k, state))
        tainted = False
        collisions = int(budget)
        final_state = state

    _write_csv(
        out_dir / "thermalize_trajectory.csv",
        "thermalize",
        ["k[-]", "n_mean[-]", "E[1/t]", "S_vN[nat]", "T_eff[1/t]"],
        rows,
    )
    t_eff = effective_temperature(final_state, omega)
    summary = [
        (
            cfg["temperature"],
            t_eff,
            abs(t_eff - cfg["temperature"]) / cfg["temperature"],
            collisions,
            status,
        )
    ]
    _write_csv(
        out_dir / "thermalize_summary.csv",
        "thermalize",
        ["T_target[1/t]", "T_eff[1/t]", "rel_error[-]", "collisions[-]", "status"],
        summary,
    )
    overall = "tainted-truncation" if tainted else "ok"
    if status == "max_collisions":
        overall = "non-converged"
    return ExperimentResult(
        "thermalize",
        out_dir,
        ["thermalize_trajectory.csv", "thermalize_summary.csv"],
        overall,
    )


# ---------------------------------------------------------------------------
# engine-sweep


def _sweep_cell(args) -> tuple[int, int, tuple]:
    i, j, phi_h, phi_c, cfg = args
    length = cfg["length"]
    omega0 = 2 * math.pi / length
    p_ext = cfg["external_pressure"]
    if p_ext is None:
        # Vacuum radiation pressure at the nominal geometry: the piston load
        # that returns the cold cavity to its nominal length.
        p_ext = math.pi / (cfg["cross_section"] * length**2)
    engine_cfg = EngineConfig(
        cavity=CavityConfig(length, cfg["cross_section"], cfg["n_levels"]),
        n_cavities=1,
        hot=BathSpec.fixed_fuel(cfg["t_hot"], phi_h, omega0),
        cold=BathSpec.fixed_fuel(cfg["t_cold"], phi_c, omega0),
        collisions=CollisionSettings(coupling=cfg["coupling"], dt=cfg["dt"]),
        stroke_mode="force",
        external_pressure=p_ext,
        steps_per_adiabat=cfg["steps_per_adiabat"],
        cycles=cfg["cycles"],
        hot_budget=cfg["hot_budget"],
        cold_budget=cfg["cold_budget"],
        record_mi=False,
    )
    record = run_cycle(engine_cfg)
    eta_ca = record.eta_ca
    ratio = record.eta / eta_ca if math.isfinite(record.eta) else math.nan
    row = (
        phi_h,
        phi_c,
        record.eta,
        eta_ca,
        ratio,
        record.q_hot,
        record.w_mech_net,
        cfg["hot_budget"],
        cfg["cold_budget"],
        record.status,
    )
    return i, j, row


def _run_engine_sweep(cfg: dict, out_dir: Path) -> ExperimentResult:
    if not cfg["phi_hot_grid"] or not cfg["phi_cold_grid"]:
        raise ValueError("engine-sweep needs nonempty phase grids")
    cells = [
        (i, j, float(phi_h), float(phi_c), cfg)
        for i, phi_h in enumerate(cfg["phi_hot_grid"])
        for j, phi_c in enumerate(cfg["phi_cold_grid"])
    ]
    workers = int(os.environ.get(WORKERS_ENV_VAR, "1"))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_sweep_cell, cells))
    else:
        outcomes = [_sweep_cell(cell) for cell in cells]
    outcomes.sort(key=lambda item: (item[0], item[1]))
    rows = [row for _, _, row in outcomes]

    _write_csv(
        out_dir / "engine_sweep.csv",
        "engine-sweep",
        [
            "phi_H[rad]",
            "phi_C[rad]",
            "eta[-]",
            "eta_CA[-]",
            "ratio[-]",
            "Q_hot[1/t]",
            "W_net[1/t]",
            "collisions_hot[-]",
            "collisions_cold[-]",
            "status",
        ],
        rows,
    )
    statuses = {row[-1] for row in rows}
    status = "ok"
    if any(s == "tainted-truncation" for s in statuses):
        status = "tainted-truncation"
    elif any(s == "non-converged" for s in statuses):
        status = "non-converged"
    return ExperimentResult("engine-sweep", out_dir, ["engine_sweep.csv"], status)


# ---------------------------------------------------------------------------
# cascade-cycle


def _cascade_engine_config(cfg: dict, budget: int | None) -> EngineConfig:
    length = cfg["length"]
    return EngineConfig(
        cavity=CavityConfig(length, cfg["cross_section"], cfg["n_levels"]),
        n_cavities=2,
        hot=BathSpec(cfg["t_hot"], cfg["phi_hot"]),
        cold=BathSpec(cfg["t_cold"], cfg["phi_cold"]),
        collisions=CollisionSettings(
            coupling=cfg["coupling"],
            dt=cfg["dt"],
            convergence_tol=cfg.get("convergence_tol", 1e-9),
            max_collisions=cfg.get("max_collisions", 20000),
        ),
        stroke_mode="ratio",
        compression_ratio=cfg["compression_ratio"],
        steps_per_adiabat=cfg["steps_per_adiabat"],
        cycles=cfg["cycles"],
        hot_budget=budget,
        cold_budget=budget,
    )


def _cascade_step_rows(record) -> list[tuple]:
    rows = []
    for stroke in record.strokes:
        for k in range(len(stroke.time)):
            n1, n2 = stroke.occupation[k]
            omega = stroke.omega[k]
            rows.append(
                (
                    stroke.time[k],
                    stroke.kind,
                    stroke.length[k],
                    omega,
                    omega * (n1 + 0.5),
                    omega * (n2 + 0.5),
                    stroke.pressure[k][0],
                    stroke.pressure[k][1],
                    stroke.entropy[k][0],
                    stroke.entropy[k][1],
                    stroke.mutual_info[k],
                )
            )
    return rows


def _loop_area(record, cavity: int) -> float:
    """Signed area of one cavity's energy-frequency loop."""
    omegas, energies = [], []
    for stroke in record.strokes:
        for k in range(len(stroke.time)):
            omegas.append(stroke.omega[k])
            energies.append(stroke.omega[k] * (stroke.occupation[k][cavity] + 0.5))
    omegas = np.asarray(omegas)
    energies = np.asarray(energies)
    return float(
        0.5
        * np.sum(
            (omegas - np.roll(omegas, 1)) * (energies + np.roll(energies, 1))
        )
    )


def _budget_label(budget) -> str:
    return "full" if budget is None else f"b{int(budget)}"


def _run_cascade_cycle(cfg: dict, out_dir: Path) -> ExperimentResult:
    files: list[str] = []
    summary_rows = []
    worst = "ok"
    for budget in cfg["budgets"]:
        record = run_cycle(_cascade_engine_config(cfg, budget))
        label = _budget_label(budget)
        step_name = f"cascade_steps_{label}.csv"
        _write_csv(
            out_dir / step_name,
            "cascade-cycle",
            [
                "t[t]",
                "stroke",
                "L[t]",
                "omega[1/t]",
                "E1[1/t]",
                "E2[1/t]",
                "p1[1/t^4]",
                "p2[1/t^4]",
                "S1[nat]",
                "S2[nat]",
                "MI[nat]",
            ],
            _cascade_step_rows(record),
        )
        files.append(step_name)

        mi_all = [m for s in record.strokes for m in s.mutual_info]
        hot_end_mi = record.strokes[0].mutual_info[-1]
        summary_rows.append(
            (
                label,
                record.q_hot,
                record.w_mech_net,
                record.eta,
                _loop_area(record, 0),
                _loop_area(record, 1),
                record.mi_expansion,
                hot_end_mi,
                max(mi_all),
                record.status,
            )
        )
        audit = work_heat_audit(record)
        _write_json(
            out_dir / f"cascade_record_{label}.json",
            {
                "budget": budget,
                "q_hot": record.q_hot,
                "q_cold": record.q_cold,
                "w_mech_net": record.w_mech_net,
                "w_mech_expansion": record.w_mech_expansion,
                "w_alicki_net": record.w_alicki_net,
                "eta": record.eta,
                "eta_ca": record.eta_ca,
                "eta_otto_ideal": record.eta_otto_ideal,
                "limit_cycle": record.limit_cycle,
                "cycles_run": record.cycles_run,
                "mi_expansion": record.mi_expansion,
                "piston_to_alicki_ratio": audit.piston_to_alicki_ratio,
                "first_law_max_residual": audit.max_residual,
                "status": record.status,
            },
        )
        files.append(f"cascade_record_{label}.json")
        if record.status != "ok" and worst == "ok":
            worst = record.status
    _write_csv(
        out_dir / "cascade_summary.csv",
        "cascade-cycle",
        [
            "budget",
            "Q_hot[1/t]",
            "W_net[1/t]",
            "eta[-]",
            "loop_area_1[1/t^2]",
            "loop_area_2[1/t^2]",
            "MI_expansion[nat]",
            "MI_hot_end[nat]",
            "MI_max[nat]",
            "status",
        ],
        summary_rows,
    )
    files.append("cascade_summary.csv")
    return ExperimentResult("cascade-cycle", out_dir, files, worst)


# ---------------------------------------------------------------------------
# mi-vs-work


def _run_mi_vs_work(cfg: dict, out_dir: Path) -> ExperimentResult:
    budgets = list(cfg["budgets"])
    if any(b is None for b in budgets):
        raise ValueError("mi-vs-work sweeps finite budgets")
    if sorted(budgets, reverse=True) != budgets:
        raise ValueError("budgets must be given in descending order")
    rows = []
    worst = "ok"
    for budget in budgets:
        record = run_cycle(_cascade_engine_config(cfg, int(budget)))
        audit = work_heat_audit(record)
        rows.append(
            (
                int(budget),
                record.mi_expansion,
                record.w_mech_expansion,
                audit.alicki_output,
                record.q_hot,
                audit.piston_to_alicki_ratio,
                record.eta,
            )
        )
        if record.status != "ok" and worst == "ok":
            worst = record.status
    _write_csv(
        out_dir / "mi_vs_work.csv",
        "mi-vs-work",
        [
            "budget[-]",
            "MI[nat]",
            "W_mech[1/t]",
            "W_al[1/t]",
            "Q_hot[1/t]",
            "ratio_Wm_Wal[-]",
            "eta[-]",
        ],
        rows,
    )
    mis = [r[1] for r in rows]
    ratios = [r[5] for r in rows]
    etas = [r[6] for r in rows]
    qs = [r[4] for r in rows]
    diagnostics = {
        "mi_increasing_with_shrinking_budget": bool(np.all(np.diff(mis) > 0)),
        "ratio_increasing_with_shrinking_budget": bool(np.all(np.diff(ratios) > 0)),
        "q_hot_decreasing_with_shrinking_budget": bool(np.all(np.diff(qs) < 0)),
        "eta_relative_span": float((max(etas) - min(etas)) / min(etas)),
    }
    _write_json(out_dir / "mi_vs_work_diagnostics.json", diagnostics)
    return ExperimentResult(
        "mi-vs-work",
        out_dir,
        ["mi_vs_work.csv", "mi_vs_work_diagnostics.json"],
        worst,
    )


# ---------------------------------------------------------------------------
# dispatcher


_RUNNERS = {
    "temp-ratio": _run_temp_ratio,
    "thermalize": _run_thermalize,
    "engine-sweep": _run_engine_sweep,
    "cascade-cycle": _run_cascade_cycle,
    "mi-vs-work": _run_mi_vs_work,
}


def run_experiment(config: dict, out_dir: str | Path) -> ExperimentResult:
    experiment = config.get("experiment")
    if experiment not in _RUNNERS:
        raise ValueError(f"unknown experiment {experiment!r}; pick one of {EXPERIMENTS}")
    if config.get("schema_version", SCHEMA_VERSION) != SCHEMA_VERSION:
        raise ValueError(
            f"config schema_version {config.get('schema_version')} is not {SCHEMA_VERSION}"
        )
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    result = _RUNNERS[experiment](config, out)
    _write_manifest(result, config)
    return result
