"""Figure regeneration pipeline for phaseonium-engine CSV outputs."""

__version__ = "0.1.0"

from .figures import (
    FIGURE_IDS,
    plot_cycle,
    plot_efficiency_map,
    plot_mi_work,
    plot_temp_ratio,
)
from .schema import SchemaError, Table, read_table

__all__ = [
    "__version__",
    "FIGURE_IDS",
    "plot_cycle",
    "plot_efficiency_map",
    "plot_mi_work",
    "plot_temp_ratio",
    "SchemaError",
    "Table",
    "read_table",
]
