"""Parameter sweeps over pulse settings and landscape post-processing.

A scan runs one full propagation per grid point (rectangular, one or two
axes over amplitude, chirp rates or common detuning) and records the
post-pulse orientation maximum together with the final three-level
populations and phases. Points are independent; execution order never
affects the assembled result, and per-point failures are recorded rather
than fatal.

Post-processing covers ridge extraction (per-row argmax loci of the
orientation landscape), the published fitted chirp-locus formulas for the
two amplitude cases, and the two landscape symmetries (simultaneous sign
reversal of both chirps, and chirp exchange).
"""

from __future__ import annotations

import hashlib
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .model import ModelParams
from .propagate import (
    PropagationConfig,
    SystemOperators,
    dressed_projections,
    post_pulse_max_orientation,
    propagate,
)
from .pulses import PulsePair, PulseSpec
from .units import convert

AXIS_NAMES = ("amplitude", "beta_plus", "beta_minus", "delta")
SCAN_MODES = ("equal_chirp", "independent", "common_detuning")
FLAT_ROW_SPAN = 1e-4  # below this orientation span a ridge row is indeterminate


@dataclass(frozen=True)
class ScanAxis:
    """One swept parameter: a uniform grid of `points` values."""

    name: str
    minimum: float
    maximum: float
    points: int
    unit: str = "au"

    def __post_init__(self) -> None:
        if self.name not in AXIS_NAMES:
            raise ValueError(f"unknown axis {self.name!r}; expected one of {AXIS_NAMES}")
        if self.points < 2:
            raise ValueError("axis needs at least 2 points")
        if not self.maximum > self.minimum:
            raise ValueError("axis maximum must exceed minimum")

    def values(self) -> np.ndarray:
        return np.linspace(self.minimum, self.maximum, self.points)

    def values_au(self) -> np.ndarray:
        if self.unit in ("au", "au^2"):
            return self.values()
        target = "au^2" if self.name.startswith("beta") else "au"
        return np.array([convert(v, self.unit, target) for v in self.values()])

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "min": self.minimum,
            "max": self.maximum,
            "points": self.points,
            "unit": self.unit,
        }


@dataclass(frozen=True)
class ScanSpec:
    """Axes plus the fixed model/pulse/propagation settings of a sweep."""

    axes: tuple[ScanAxis, ...]
    params: ModelParams
    base_pulses: PulsePair
    propagation: PropagationConfig = PropagationConfig()
    mode: str = "independent"
    search_samples_per_period: int = 4096
    search_window_periods: float = 3.0

    def __post_init__(self) -> None:
        if not (1 <= len(self.axes) <= 2):
            raise ValueError("scans support 1 or 2 axes")
        if self.mode not in SCAN_MODES:
            raise ValueError(f"unknown scan mode {self.mode!r}")
        names = [a.name for a in self.axes]
        if len(set(names)) != len(names):
            raise ValueError("axes must sweep distinct parameters")
        if self.mode == "equal_chirp" and "beta_minus" in names:
            raise ValueError("equal_chirp mode forbids a beta_minus axis")

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(a.points for a in self.axes)

    def grid_size(self) -> int:
        return int(np.prod(self.shape))

    def to_dict(self) -> dict:
        return {
            "axes": [a.to_dict() for a in self.axes],
            "mode": self.mode,
            "model": {
                "B": self.params.B,
                "mu": self.params.mu,
                "omega_c": self.params.omega_c,
                "g": self.params.g,
                "J_max": self.params.J_max,
                "n_max": self.params.n_max,
            },
            "pulses": {
                side: {
                    "amplitude": s.amplitude,
                    "omega_center": s.omega_center,
                    "tau0": s.tau0,
                    "beta": s.beta,
                    "phi": s.phi,
                    "delta": s.delta,
                }
                for side, s in (("plus", self.base_pulses.plus), ("minus", self.base_pulses.minus))
            },
            "propagation": {
                "t_start": self.propagation.t_start,
                "t_end": self.propagation.t_end,
                "method": self.propagation.method,
                "dt": self.propagation.dt,
                "rtol": self.propagation.rtol,
                "atol": self.propagation.atol,
                "auto_extend": self.propagation.auto_extend,
            },
            "search": {
                "samples_per_period": self.search_samples_per_period,
                "window_periods": self.search_window_periods,
            },
        }

    def config_hash(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class ScanPoint:
    """Result of one grid point (or its failure record)."""

    index: tuple[int, ...]
    coords_au: dict
    pulses: PulsePair
    orientation: float = math.nan
    populations: tuple[float, float, float] = (math.nan,) * 3
    phases: tuple[float, float, float] = (math.nan,) * 3
    norm_drift: float = math.nan
    status: str = "ok"
    message: str = ""


@dataclass
class ScanResult:
    spec: ScanSpec
    points: list[ScanPoint]
    wall_time: float
    workers: int

    @property
    def failed(self) -> list[ScanPoint]:
        return [p for p in self.points if p.status != "ok"]

    @property
    def degraded(self) -> bool:
        return len(self.failed) > 0.05 * len(self.points)

    def orientation_grid(self) -> np.ndarray:
        grid = np.full(self.spec.shape, np.nan)
        for p in self.points:
            if p.status == "ok":
                grid[p.index] = p.orientation
        return grid

    def manifest(self) -> dict:
        return {
            "schema_version": 1,
            "kind": "scan",
            "config_hash": self.spec.config_hash(),
            "spec": self.spec.to_dict(),
            "grid_shape": list(self.spec.shape),
            "n_points": len(self.points),
            "failures": [
                {"index": list(p.index), "message": p.message} for p in self.failed
            ],
            "degraded": self.degraded,
            "wall_time_s": self.wall_time,
            "workers": self.workers,
        }


def apply_point(spec: ScanSpec, coords_au: dict) -> PulsePair:
    """Base pulse pair with one grid point's parameter overrides applied."""
    plus, minus = spec.base_pulses.plus, spec.base_pulses.minus
    for name, value in coords_au.items():
        if name == "amplitude":
            plus = replace(plus, amplitude=value)
            minus = replace(minus, amplitude=value)
        elif name == "beta_plus":
            plus = replace(plus, beta=value)
            if spec.mode == "equal_chirp":
                minus = replace(minus, beta=value)
        elif name == "beta_minus":
            minus = replace(minus, beta=value)
        elif name == "delta":
            plus = replace(plus, delta=value)
            minus = replace(minus, delta=value)
    return PulsePair(plus=plus, minus=minus)


_OPS_CACHE: dict[ModelParams, SystemOperators] = {}


def _cached_ops(params: ModelParams) -> SystemOperators:
    ops = _OPS_CACHE.get(params)
    if ops is None:
        ops = SystemOperators.build(params)
        _OPS_CACHE[params] = ops
    return ops


def _run_point(task: tuple[ScanSpec, tuple[int, ...], dict]) -> ScanPoint:
    spec, index, coords_au = task
    pulses = apply_point(spec, coords_au)
    try:
        ops = _cached_ops(spec.params)
        traj = propagate(spec.params, pulses, spec.propagation, ops=ops)
        orientation = post_pulse_max_orientation(
            traj.final_state, traj.final_time, pulses, ops,
            samples_per_period=spec.search_samples_per_period,
            window_periods=spec.search_window_periods,
        )
        pops, phases = dressed_projections(traj.final_state, ops.spectrum, traj.final_time)
        return ScanPoint(
            index=index,
            coords_au=coords_au,
            pulses=pulses,
            orientation=orientation,
            populations=tuple(pops),
            phases=tuple(phases),
            norm_drift=traj.norm_drift,
        )
    except Exception as exc:  # recorded, not fatal
        return ScanPoint(
            index=index, coords_au=coords_au, pulses=pulses,
            status="failed", message=f"{type(exc).__name__}: {exc}",
        )


def run_scan(spec: ScanSpec, workers: int = 1, progress: bool = False) -> ScanResult:
    """Propagate every grid point; deterministic row-major assembly.

    With workers > 1 the points run in a process pool; results are joined
    by grid index, so the output is independent of scheduling.
    """
    axes_au = [axis.values_au() for axis in spec.axes]
    tasks = []
    for flat, index in enumerate(np.ndindex(*spec.shape)):
        coords = {
            axis.name: float(axes_au[k][index[k]]) for k, axis in enumerate(spec.axes)
        }
        tasks.append((spec, tuple(index), coords))

    started = time.perf_counter()
    if workers <= 1:
        points = []
        for k, task in enumerate(tasks):
            points.append(_run_point(task))
            if progress:
                print(f"\rscan point {k + 1}/{len(tasks)}", end="", file=sys.stderr, flush=True)
        if progress:
            print(file=sys.stderr)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            points = list(pool.map(_run_point, tasks, chunksize=1))
    wall = time.perf_counter() - started
    return ScanResult(spec=spec, points=points, wall_time=wall, workers=workers)


@dataclass(frozen=True)
class RidgePoint:
    sweep_value: float
    argmax_value: float | None
    status: str  # "ok" | "indeterminate"


def extract_ridge(result: ScanResult, sweep_axis: str) -> list[RidgePoint]:
    """Per-row argmax locus of the orientation landscape.

    For every value on the sweep axis the argmax over the other axis is
    returned; ties are broken toward the smallest |coordinate|. Rows whose
    orientation span is below FLAT_ROW_SPAN (and rows with no valid points)
    are marked indeterminate. Failed points never participate.
    """
    if len(result.spec.axes) != 2:
        raise ValueError("ridge extraction needs a 2-axis scan")
    names = [a.name for a in result.spec.axes]
    if sweep_axis not in names:
        raise ValueError(f"axis {sweep_axis!r} not in scan axes {names}")
    k_sweep = names.index(sweep_axis)
    k_other = 1 - k_sweep
    sweep_vals = result.spec.axes[k_sweep].values()
    other_vals = result.spec.axes[k_other].values()

    ridge = []
    for i, sv in enumerate(sweep_vals):
        row = [
            (other_vals[p.index[k_other]], p.orientation)
            for p in result.points
            if p.index[k_sweep] == i and p.status == "ok"
        ]
        if not row:
            ridge.append(RidgePoint(float(sv), None, "indeterminate"))
            continue
        orients = np.array([o for _, o in row])
        if float(orients.max() - orients.min()) < FLAT_ROW_SPAN:
            ridge.append(RidgePoint(float(sv), None, "indeterminate"))
            continue
        top = orients.max()
        tied = [c for (c, o) in row if o >= top - 1e-12]
        ridge.append(RidgePoint(float(sv), float(min(tied, key=abs)), "ok"))
    return ridge


@dataclass(frozen=True)
class LocusFit:
    """Published fitted optimal-chirp locus beta_plus(beta_minus), in ns^2."""

    case: str  # "pi" or "1.75pi"

    @classmethod
    def amplitude_pi(cls) -> "LocusFit":
        return cls(case="pi")

    @classmethod
    def amplitude_1_75pi(cls) -> "LocusFit":
        return cls(case="1.75pi")


def eval_fitted_locus(beta_minus: float, fit: LocusFit) -> float:
    """Evaluate the fitted locus exactly as printed; inputs in ns^2.

    The amplitude-pi case is the two-branch exponential
    415 exp(-+beta_-/91) + 32.5 for beta_- < 0 / > 0; the 1.75 pi case is
    piecewise with logistic terms Y1, Y2 and an identity middle branch on
    (-113, 113) ns^2. Values outside every branch domain are rejected.
    """
    b = float(beta_minus)
    if fit.case == "pi":
        if -1000.0 <= b < 0.0:
            return 415.0 * math.exp(-b / 91.0) + 32.5
        if 0.0 < b <= 1000.0:
            return -415.0 * math.exp(b / 91.0) + 32.5
        raise ValueError(f"beta_minus={b} ns^2 outside the fitted branches")
    if fit.case == "1.75pi":
        y1 = 157.44 / (1.0 + 10.0 ** (0.0074 * (-321.6 - b)))
        y2 = -1040.44 / (1.0 + 10.0 ** (0.025 * (-167.0 - b)))
        if -1000.0 < b < -113.0:
            return 163.0 + y1 + y2
        if -113.0 < b < 113.0:
            return b
        if 113.0 < b < 1000.0:
            return -(163.0 + y1 + y2)
        raise ValueError(f"beta_minus={b} ns^2 outside the fitted branches")
    raise ValueError(f"unknown locus case {fit.case!r}")


@dataclass(frozen=True)
class SymmetryReport:
    max_sign_reversal_mismatch: float
    max_exchange_mismatch: float
    pairs_checked: int
    failed_points: int


def symmetry_report(result: ScanResult) -> SymmetryReport:
    """Landscape mismatch under (b+, b-) -> (-b+, -b-) and b+ <-> b-.

    Requires a two-axis chirp scan whose axes are symmetric about the
    origin (and identical to each other for the exchange check).
    """
    spec = result.spec
    names = [a.name for a in spec.axes]
    if sorted(names) != ["beta_minus", "beta_plus"]:
        raise ValueError("symmetry report needs beta_plus x beta_minus axes")
    for axis in spec.axes:
        v = axis.values()
        if not np.allclose(v, -v[::-1], rtol=0, atol=1e-9 * max(1.0, abs(v).max())):
            raise ValueError(f"axis {axis.name} is not symmetric about the origin")
    vp, vm = spec.axes[0].values(), spec.axes[1].values()
    exchange_ok = len(vp) == len(vm) and np.allclose(vp, vm, rtol=0, atol=1e-9)

    grid = result.orientation_grid()
    n0, n1 = grid.shape
    sign_m = 0.0
    exch_m = 0.0
    pairs = 0
    for i in range(n0):
        for j in range(n1):
            if math.isnan(grid[i, j]):
                continue
            r = grid[n0 - 1 - i, n1 - 1 - j]
            if not math.isnan(r):
                sign_m = max(sign_m, abs(grid[i, j] - r))
                pairs += 1
            if exchange_ok and i < n1 and j < n0:
                e = grid[j, i]
                if not math.isnan(e):
                    exch_m = max(exch_m, abs(grid[i, j] - e))
    return SymmetryReport(
        max_sign_reversal_mismatch=sign_m,
        max_exchange_mismatch=exch_m if exchange_ok else math.nan,
        pairs_checked=pairs,
        failed_points=len(result.failed),
    )
