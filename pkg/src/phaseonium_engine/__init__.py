"""Simulator for a phaseonium-fuelled quantum Otto engine.

Truncated-Fock cavities are thermalized by repeated collisions with
three-level coherent ancillas and driven through expansion/compression
strokes under radiation pressure, with exact bookkeeping of heat,
mechanical work, Alicki work, mutual information, and efficiency.
"""

__version__ = "0.1.0"

from .bath import (
    BathTemperature,
    PhaseoniumParams,
    PhaseoniumState,
    apparent_temperature,
    build_phaseonium,
    classical_temperature,
    decohered,
    solve_alpha_for_temperature,
)
from .collisions import (
    CascadeState,
    CollisionSettings,
    collide_cascade,
    collide_once,
    effective_temperature,
    interaction_hamiltonian,
    thermalize,
)
from .engine import (
    BathSpec,
    CavityConfig,
    CycleRecord,
    EngineConfig,
    StrokeLedger,
    mean_pressure_operator,
    pressure_operator,
    run_cycle,
    work_heat_audit,
)
from .operators import (
    DensityMatrix,
    HilbertSpace,
    OperatorMatrix,
    annihilation,
    creation,
    expectation,
    fock_space,
    joint_space,
    matrix_exp,
    mutual_information,
    number_operator,
    partial_trace,
    tensor,
    thermal_state,
    trace_distance,
    uhlmann_fidelity,
    von_neumann_entropy,
)

__all__ = [
    "__version__",
    "BathTemperature",
    "PhaseoniumParams",
    "PhaseoniumState",
    "apparent_temperature",
    "build_phaseonium",
    "classical_temperature",
    "decohered",
    "solve_alpha_for_temperature",
    "CascadeState",
    "CollisionSettings",
    "collide_cascade",
    "collide_once",
    "effective_temperature",
    "interaction_hamiltonian",
    "thermalize",
    "BathSpec",
    "CavityConfig",
    "CycleRecord",
    "EngineConfig",
    "StrokeLedger",
    "mean_pressure_operator",
    "pressure_operator",
    "run_cycle",
    "work_heat_audit",
    "DensityMatrix",
    "HilbertSpace",
    "OperatorMatrix",
    "annihilation",
    "creation",
    "expectation",
    "fock_space",
    "joint_space",
    "matrix_exp",
    "mutual_information",
    "number_operator",
    "partial_trace",
    "tensor",
    "thermal_state",
    "trace_distance",
    "uhlmann_fidelity",
    "von_neumann_entropy",
]
