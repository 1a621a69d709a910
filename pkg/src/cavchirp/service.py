"""HTTP service exposing the simulation library.

Every compute endpoint accepts one JSON run configuration (the same schema
as the YAML files, see config.RunConfig) and returns machine-readable
payloads: CSV bodies are produced server-side by the canonical writers so
clients persist them byte-for-byte. The CLI is a thin client of this app;
it talks to it in-process by default or over the network against `serve`.
"""

from __future__ import annotations

import cmath

import numpy as np
from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from . import __version__
from .config import ConfigError, ResolvedRun, RunConfig, resolve
from .csvio import (
    SCHEMA_VERSION,
    pulse_csv_text,
    scan_csv_text,
    trajectory_csv_text,
)
from .magnus import magnus_wavefunction, max_orientation_bound, theta_pair_from_pulses, wrap_angle
from .propagate import PropagationError, dressed_projections, post_pulse_max_orientation, propagate
from .pulses import QuadratureError, field_analytic
from .scan import run_scan

app = FastAPI(
    title="cavchirp",
    version=__version__,
    description="Chirped-pulse orientation control of a single molecule in a cavity",
)


class HealthResponse(BaseModel):
    status: str
    version: str
    schema_version: int


class PulseResponse(BaseModel):
    csv: str
    manifest: dict


class MagnusResponse(BaseModel):
    theta_minus: tuple[float, float]
    theta_plus: tuple[float, float]
    c00: tuple[float, float]
    c_minus: tuple[float, float]
    c_plus: tuple[float, float]
    populations: tuple[float, float, float]
    orientation_bound: float
    phase_residual: float
    manifest: dict


class OptimumResponse(BaseModel):
    k: int
    theta_abs: float
    amplitude_minus: float
    amplitude_plus: float
    pulse_phi_minus: float
    pulse_phi_plus: float
    target_phase_minus: float
    target_phase_plus: float
    phase_residual: float
    phase_condition_satisfied: bool
    orientation_bound: float
    manifest: dict


class SimulateResponse(BaseModel):
    csv: str
    summary: dict


class ScanResponse(BaseModel):
    csv: str
    manifest: dict


def _resolve_or_422(cfg: RunConfig) -> ResolvedRun:
    try:
        return resolve(cfg)
    except (ConfigError, ValueError) as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc


def _manifest(run: ResolvedRun, extra: dict | None = None) -> dict:
    payload = {
        "schema_version": SCHEMA_VERSION,
        "version": __version__,
        "resolved_config": run.resolved_config_dict(),
        "warnings": run.warnings,
        "levels": {
            "omega_minus": run.levels.omega_minus,
            "omega_plus": run.levels.omega_plus,
            "mu_tilde_minus": run.levels.mu_tilde_minus,
            "mu_tilde_plus": run.levels.mu_tilde_plus,
            "M_minus": run.levels.M_minus,
            "M_plus": run.levels.M_plus,
        },
    }
    if extra:
        payload.update(extra)
    return payload


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__, schema_version=SCHEMA_VERSION)


@app.post("/pulse", response_model=PulseResponse)
def pulse(cfg: RunConfig) -> PulseResponse:
    run = _resolve_or_422(cfg)
    tau0 = max(run.pulses.plus.tau0, run.pulses.minus.tau0)
    ts = run.propagation.t_start if run.propagation.t_start is not None else -28.0 * tau0
    te = run.propagation.t_end if run.propagation.t_end is not None else 28.0 * tau0
    times = np.linspace(ts, te, cfg.output.pulse_points)
    csv = pulse_csv_text(
        times,
        field_analytic(times, run.pulses.plus),
        field_analytic(times, run.pulses.minus),
    )
    return PulseResponse(csv=csv, manifest=_manifest(run, {"kind": "pulse"}))


@app.post("/magnus", response_model=MagnusResponse)
def magnus(cfg: RunConfig) -> MagnusResponse:
    run = _resolve_or_422(cfg)
    try:
        thetas = theta_pair_from_pulses(run.pulses, run.levels)
    except QuadratureError as exc:
        raise HTTPException(status_code=500, detail=str(exc)) from exc
    state = magnus_wavefunction(thetas)
    lev = run.levels
    lhs = (
        lev.omega_minus * cmath.phase(thetas.theta_plus)
        - lev.omega_plus * cmath.phase(thetas.theta_minus)
    ) / lev.g
    pair = lambda z: (z.real, z.imag)
    return MagnusResponse(
        theta_minus=pair(complex(thetas.theta_minus)),
        theta_plus=pair(complex(thetas.theta_plus)),
        c00=pair(complex(state.c00)),
        c_minus=pair(complex(state.c_minus)),
        c_plus=pair(complex(state.c_plus)),
        populations=state.populations,
        orientation_bound=max_orientation_bound(lev.M_minus, lev.M_plus),
        phase_residual=wrap_angle(lhs),
        manifest=_manifest(run, {"kind": "magnus"}),
    )


@app.post("/optimum", response_model=OptimumResponse)
def optimum(cfg: RunConfig) -> OptimumResponse:
    if cfg.pulses.design.kind != "optimal":
        raise HTTPException(
            status_code=422, detail="optimum endpoint requires design.kind == 'optimal'"
        )
    run = _resolve_or_422(cfg)
    sol = run.solution
    return OptimumResponse(
        k=sol.k,
        theta_abs=sol.theta_abs,
        amplitude_minus=sol.amplitude_minus,
        amplitude_plus=sol.amplitude_plus,
        pulse_phi_minus=sol.pulse_phi_minus,
        pulse_phi_plus=sol.pulse_phi_plus,
        target_phase_minus=sol.target_phase_minus,
        target_phase_plus=sol.target_phase_plus,
        phase_residual=sol.phase_residual,
        phase_condition_satisfied=sol.phase_condition_satisfied,
        orientation_bound=max_orientation_bound(run.levels.M_minus, run.levels.M_plus),
        manifest=_manifest(run, {"kind": "optimum"}),
    )


@app.post("/simulate", response_model=SimulateResponse)
def simulate(cfg: RunConfig) -> SimulateResponse:
    run = _resolve_or_422(cfg)
    try:
        traj = propagate(run.params, run.pulses, run.propagation, ops=run.ops)
        orientation = post_pulse_max_orientation(
            traj.final_state, traj.final_time, run.pulses, run.ops
        )
    except PropagationError as exc:
        raise HTTPException(status_code=500, detail=str(exc)) from exc
    pops, phases = dressed_projections(traj.final_state, run.ops.spectrum, traj.final_time)
    summary = _manifest(
        run,
        {
            "kind": "simulate",
            "post_pulse_max_orientation": orientation,
            "final_populations": [float(x) for x in pops],
            "final_phases": [float(x) for x in phases],
            "norm_drift": traj.norm_drift,
            "final_time": traj.final_time,
            "steps": traj.steps,
            "dt": traj.dt,
            "method": traj.method,
        },
    )
    return SimulateResponse(csv=trajectory_csv_text(traj), summary=summary)


@app.post("/scan", response_model=ScanResponse)
def scan(cfg: RunConfig, progress: bool = False) -> ScanResponse:
    if cfg.scan is None:
        raise HTTPException(status_code=422, detail="configuration has no scan block")
    run = _resolve_or_422(cfg)
    try:
        result = run_scan(run.scan_spec, workers=cfg.scan.workers, progress=progress)
    except PropagationError as exc:
        raise HTTPException(status_code=500, detail=str(exc)) from exc
    manifest = _manifest(run, {"kind": "scan"})
    manifest.update(result.manifest())
    return ScanResponse(csv=scan_csv_text(result), manifest=manifest)
