"""The CSV contracts this package consumes, and a strict loader for them.

Four schemas, one per artifact produced by the runner:

    quantum    t, norm, energy, T_r, S, re_C, im_C
    classical  t, T_r_classical, N_effective
    spectrum   E, rho_E
    summary    value, q_mean, q_cycle_max, q_cycle_min,
               c_mean, c_cycle_max, c_cycle_min

The header must match a schema exactly (names and order); any deviation is
reported by column name instead of producing a half-plotted figure.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

__all__ = ["SCHEMAS", "SchemaError", "load_csv"]

SCHEMAS = {
    "quantum": ("t", "norm", "energy", "T_r", "S", "re_C", "im_C"),
    "classical": ("t", "T_r_classical", "N_effective"),
    "spectrum": ("E", "rho_E"),
    "summary": ("value", "q_mean", "q_cycle_max", "q_cycle_min",
                "c_mean", "c_cycle_max", "c_cycle_min"),
}


class SchemaError(ValueError):
    """A CSV does not match its documented schema."""


def load_csv(path, schema: str) -> np.ndarray:
    """Load one artifact as a structured array after checking its header.

    nan values are allowed (sweeps record failed members as nan rows);
    non-numeric fields and missing/extra/reordered columns are not.
    """
    expected = SCHEMAS[schema]
    path = Path(path)
    with open(path) as fh:
        header = tuple(name.strip() for name in fh.readline().rstrip("\n").split(","))
    if header != expected:
        for name in expected:
            if name not in header:
                raise SchemaError(f"{path}: missing column '{name}' for the {schema} schema")
        for name in header:
            if name not in expected:
                raise SchemaError(f"{path}: unexpected column '{name}' for the {schema} schema")
        raise SchemaError(
            f"{path}: columns {header} are ordered differently from the "
            f"{schema} schema {expected}"
        )
    try:
        data = np.genfromtxt(path, delimiter=",", names=True, ndmin=1)
    except ValueError as exc:
        raise SchemaError(f"{path}: unreadable numeric data: {exc}") from exc
    if data.size == 0:
        raise SchemaError(f"{path}: no data rows under the {schema} header")
    for name in expected:
        column = data[name]
        if not np.issubdtype(column.dtype, np.floating):
            raise SchemaError(f"{path}: column '{name}' is not numeric")
    return data


def matching_time_axes(arrays, paths) -> np.ndarray:
    """All series of one figure must share a time axis; no resampling here.

    Returns the common axis. Tolerates round-off from the writers (1e-9)
    but refuses different lengths or genuinely different sampling.
    """
    reference = arrays[0]["t"]
    for data, path in zip(arrays[1:], paths[1:]):
        t = data["t"]
        if t.shape != reference.shape or float(np.abs(t - reference).max()) > 1e-9:
            raise SchemaError(
                f"{path}: time axis does not match {paths[0]} "
                "(lengths or sample times differ); resampling is not supported"
            )
    return reference
