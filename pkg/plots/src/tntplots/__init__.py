"""Figure rendering for collective-spin readout sweep outputs."""

from .figures import RENDERERS, SPECS, FigureSpec, render
from .reading import (
    DataError,
    QGrid,
    Table,
    load_manifest,
    load_preset_outputs,
    load_qgrid,
    load_summary,
    load_table,
)

__version__ = "1.0.0"

__all__ = [
    "DataError",
    "FigureSpec",
    "QGrid",
    "RENDERERS",
    "SPECS",
    "Table",
    "load_manifest",
    "load_preset_outputs",
    "load_qgrid",
    "load_summary",
    "load_table",
    "render",
]
