"""fleetfigs: figures from hubfleet results CSVs."""

from .figures import (
    FIGURE_KINDS,
    FigureSpec,
    box_stats,
    efficiency_curve,
    render,
    sweep_stats,
    timing_stats,
)
from .schema import RESULT_COLUMNS, SchemaError, load_results

__version__ = "0.1.0"
