"""Figure layouts for tunneling-run CSV artifacts.

This package renders, it never simulates: every number comes from the CSV
files documented in schemas.py, and nothing here imports the solver that
produced them.
"""

from .plots import FigureRequest, render
from .schemas import SCHEMAS, SchemaError, load_csv

__all__ = ["FigureRequest", "render", "SCHEMAS", "SchemaError", "load_csv"]
