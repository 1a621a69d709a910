"""Versioned CSV/JSON output files.

All CSVs are RFC-4180 style: header row, comma separators, LF endings.
Numeric fields are written with 17 significant digits so reruns are
byte-identical and values round-trip exactly. Writers stage to a temporary
file and rename, so a failure never leaves a partial file behind.

Schema version 1 column sets:

- trajectory: t, cos_theta, p00, p_minus, p_plus, psi_minus, psi_plus,
  delta_psi, norm
- scan (long form, one row per grid point): amplitude_au, beta_plus_ns2,
  beta_minus_ns2, delta_au, orientation, p00, p_minus, p_plus, psi_minus,
  psi_plus, delta_psi, norm_drift, status
- pulse: t, field_plus, field_minus
"""

from __future__ import annotations

import json
import math
import os
from pathlib import Path

from .propagate import TrajectoryResult
from .scan import ScanResult
from .units import NS2_TO_AU2

SCHEMA_VERSION = 1

TRAJECTORY_COLUMNS = [
    "t", "cos_theta", "p00", "p_minus", "p_plus",
    "psi_minus", "psi_plus", "delta_psi", "norm",
]
SCAN_COLUMNS = [
    "amplitude_au", "beta_plus_ns2", "beta_minus_ns2", "delta_au",
    "orientation", "p00", "p_minus", "p_plus",
    "psi_minus", "psi_plus", "delta_psi", "norm_drift", "status",
]
PULSE_COLUMNS = ["t", "field_plus", "field_minus"]


def fmt(x: float) -> str:
    """17-significant-digit representation (exact float round-trip)."""
    if isinstance(x, str):
        return x
    if math.isnan(x):
        return "nan"
    return f"{x:.17g}"


def _write_atomic(path: Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8", newline="")
    os.replace(tmp, path)


def _csv_text(columns: list[str], rows) -> str:
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def trajectory_csv_text(traj: TrajectoryResult) -> str:
    rows = (
        (
            traj.times[i], traj.cos_theta[i],
            traj.populations[i, 0], traj.populations[i, 1], traj.populations[i, 2],
            traj.phases[i, 0], traj.phases[i, 1], traj.phases[i, 2],
            traj.norm[i],
        )
        for i in range(len(traj.times))
    )
    return _csv_text(TRAJECTORY_COLUMNS, rows)


def scan_csv_text(result: ScanResult) -> str:
    rows = []
    for p in result.points:
        rows.append(
            (
                p.pulses.plus.amplitude,
                p.pulses.plus.beta / NS2_TO_AU2,
                p.pulses.minus.beta / NS2_TO_AU2,
                p.pulses.plus.delta,
                p.orientation,
                p.populations[0], p.populations[1], p.populations[2],
                p.phases[0], p.phases[1], p.phases[2],
                p.norm_drift,
                p.status,
            )
        )
    return _csv_text(SCAN_COLUMNS, rows)


def pulse_csv_text(times, field_plus, field_minus) -> str:
    rows = zip(times, field_plus, field_minus)
    return _csv_text(PULSE_COLUMNS, rows)


def write_text(path, text: str) -> None:
    _write_atomic(Path(path), text)


def write_json(path, payload: dict) -> None:
    _write_atomic(Path(path), json.dumps(payload, indent=2, sort_keys=True) + "\n")
