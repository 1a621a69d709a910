"""Run configuration: YAML schema, validation and resolution.

A run is described by one structured document with `model`, `pulses`,
`propagation` and optional `scan` / `output` blocks. Every dimensionful
number is a {value, unit} pair; unknown keys are rejected with the failing
field path. The same pydantic models serve as the HTTP request schema, and
a fully resolved configuration (everything in atomic units, explicit
carriers and amplitudes) re-parses to an identical run, which is what the
output manifests echo.

Carrier defaults: `calibrated` centers each pulse on the exact polariton
transition of the diagonalized model, which is what narrow-band driving
requires; `closed_form` uses the analytic doublet instead. The `optimal`
design solves the first-order area and phase conditions for amplitudes and
spectral phases; `explicit` takes them verbatim (a missing amplitude means
zero and is warned about).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Optional

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .magnus import (
    OptimalSolution,
    ThreeLevelParams,
    optimal_target_phases,
    solve_optimal_pulses,
)
from .model import (
    DEFAULT_G,
    DEFAULT_OMEGA_C,
    ModelParams,
    jc_dressed_spectrum,
)
from .propagate import PropagationConfig, SystemOperators
from .pulses import PulsePair, PulseSpec
from .scan import ScanAxis, ScanSpec
from .units import UnitError, convert, normalize_unit

DEFAULT_TAU0_AU = 5.409e8


class ConfigError(ValueError):
    """Configuration rejected; message carries the field diagnostics."""


class _Block(BaseModel):
    model_config = ConfigDict(extra="forbid")


class Quantity(_Block):
    value: float
    unit: str

    def in_au(self) -> float:
        """Convert to atomic units; 'pi_au' scales by pi (amplitude sugar)."""
        unit = self.unit.strip().lower()
        if unit == "pi_au":
            return self.value * math.pi
        canonical = normalize_unit(unit)
        if canonical in ("au", "au^2"):
            return self.value
        target = "au^2" if canonical == "ns^2" else "au"
        return convert(self.value, canonical, target)


def _q(value: float, unit: str) -> Quantity:
    return Quantity(value=value, unit=unit)


class ModelBlock(_Block):
    B: Quantity = Field(default_factory=lambda: _q(0.20286, "cm^-1"))
    mu: Quantity = Field(default_factory=lambda: _q(0.715, "debye"))
    omega_c: Quantity = Field(default_factory=lambda: _q(DEFAULT_OMEGA_C, "au"))
    g: Quantity = Field(default_factory=lambda: _q(DEFAULT_G, "au"))
    J_max: int = 4
    n_max: int = 3

    def to_params(self) -> ModelParams:
        return ModelParams(
            B=self.B.in_au(),
            mu=self.mu.in_au(),
            omega_c=self.omega_c.in_au(),
            g=self.g.in_au(),
            J_max=self.J_max,
            n_max=self.n_max,
        )


class DesignBlock(_Block):
    kind: Literal["optimal", "explicit"] = "optimal"
    k: int = 0
    target_phase_minus: float = 0.0
    target_phase_plus: Optional[float] = None  # None: solve the phase condition
    amplitude: Optional[Quantity] = None
    amplitude_plus: Optional[Quantity] = None
    amplitude_minus: Optional[Quantity] = None
    phi_plus: float = 0.0
    phi_minus: float = 0.0


class PulsesBlock(_Block):
    tau0: Quantity = Field(default_factory=lambda: _q(DEFAULT_TAU0_AU, "au"))
    beta_plus: Quantity = Field(default_factory=lambda: _q(0.0, "ns^2"))
    beta_minus: Quantity = Field(default_factory=lambda: _q(0.0, "ns^2"))
    delta: Quantity = Field(default_factory=lambda: _q(0.0, "au"))
    carriers: Literal["calibrated", "closed_form"] = "calibrated"
    omega_center_plus: Optional[Quantity] = None
    omega_center_minus: Optional[Quantity] = None
    design: DesignBlock = Field(default_factory=DesignBlock)


class PropagationBlock(_Block):
    t_start: Optional[Quantity] = None
    t_end: Optional[Quantity] = None
    method: Literal["split4", "rk4", "adaptive"] = "split4"
    dt: Quantity = Field(default_factory=lambda: _q(2.4e4, "au"))
    rtol: float = 1e-9
    atol: float = 1e-12
    sample_stride: int = 0
    target_samples: int = 2000
    auto_extend: bool = True

    def to_config(self) -> PropagationConfig:
        return PropagationConfig(
            t_start=None if self.t_start is None else self.t_start.in_au(),
            t_end=None if self.t_end is None else self.t_end.in_au(),
            method=self.method,
            dt=self.dt.in_au(),
            rtol=self.rtol,
            atol=self.atol,
            sample_stride=self.sample_stride,
            target_samples=self.target_samples,
            auto_extend=self.auto_extend,
        )


class AxisBlock(_Block):
    name: Literal["amplitude", "beta_plus", "beta_minus", "delta"]
    min: float
    max: float
    points: int
    unit: str = "au"

    def to_axis(self) -> ScanAxis:
        return ScanAxis(
            name=self.name, minimum=self.min, maximum=self.max,
            points=self.points, unit=self.unit,
        )


class ScanBlock(_Block):
    mode: Literal["equal_chirp", "independent", "common_detuning"] = "independent"
    axes: list[AxisBlock]
    workers: int = 1
    search_samples_per_period: int = 4096
    search_window_periods: float = 3.0


class OutputBlock(_Block):
    pulse_points: int = 2001


class RunConfig(_Block):
    model: ModelBlock = Field(default_factory=ModelBlock)
    pulses: PulsesBlock = Field(default_factory=PulsesBlock)
    propagation: PropagationBlock = Field(default_factory=PropagationBlock)
    scan: Optional[ScanBlock] = None
    output: OutputBlock = Field(default_factory=OutputBlock)


def parse_config(text: str) -> RunConfig:
    """Parse and validate a YAML run configuration."""
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"not valid YAML: {exc}") from exc
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigError("top level of the config must be a mapping")
    try:
        return RunConfig.model_validate(raw)
    except ValidationError as exc:
        lines = [
            f"  {'.'.join(str(p) for p in err['loc'])}: {err['msg']}"
            for err in exc.errors()
        ]
        raise ConfigError("invalid configuration:\n" + "\n".join(lines)) from exc


@dataclass
class ResolvedRun:
    """All physics objects of one run, plus a re-parseable echo."""

    config: RunConfig
    params: ModelParams
    ops: SystemOperators
    levels: ThreeLevelParams
    pulses: PulsePair
    propagation: PropagationConfig
    scan_spec: Optional[ScanSpec]
    solution: Optional[OptimalSolution]
    warnings: list[str]

    def resolved_config_dict(self) -> dict:
        """Fully explicit configuration (atomic units) that re-parses identically."""
        cfg = self.config
        return {
            "model": {
                "B": {"value": self.params.B, "unit": "au"},
                "mu": {"value": self.params.mu, "unit": "au"},
                "omega_c": {"value": self.params.omega_c, "unit": "au"},
                "g": {"value": self.params.g, "unit": "au"},
                "J_max": self.params.J_max,
                "n_max": self.params.n_max,
            },
            "pulses": {
                "tau0": {"value": self.pulses.plus.tau0, "unit": "au"},
                "beta_plus": {"value": self.pulses.plus.beta, "unit": "au^2"},
                "beta_minus": {"value": self.pulses.minus.beta, "unit": "au^2"},
                "delta": {"value": self.pulses.plus.delta, "unit": "au"},
                "carriers": cfg.pulses.carriers,
                "omega_center_plus": {"value": self.pulses.plus.omega_center, "unit": "au"},
                "omega_center_minus": {"value": self.pulses.minus.omega_center, "unit": "au"},
                "design": {
                    "kind": "explicit",
                    "amplitude_plus": {"value": self.pulses.plus.amplitude, "unit": "au"},
                    "amplitude_minus": {"value": self.pulses.minus.amplitude, "unit": "au"},
                    "phi_plus": self.pulses.plus.phi,
                    "phi_minus": self.pulses.minus.phi,
                },
            },
            "propagation": {
                "t_start": None if self.propagation.t_start is None
                else {"value": self.propagation.t_start, "unit": "au"},
                "t_end": None if self.propagation.t_end is None
                else {"value": self.propagation.t_end, "unit": "au"},
                "method": self.propagation.method,
                "dt": {"value": self.propagation.dt, "unit": "au"},
                "rtol": self.propagation.rtol,
                "atol": self.propagation.atol,
                "sample_stride": self.propagation.sample_stride,
                "target_samples": self.propagation.target_samples,
                "auto_extend": self.propagation.auto_extend,
            },
            "scan": None if cfg.scan is None else cfg.scan.model_dump(),
            "output": cfg.output.model_dump(),
        }


def resolve(cfg: RunConfig) -> ResolvedRun:
    """Turn a validated configuration into concrete physics objects."""
    warnings: list[str] = []
    params = cfg.model.to_params()
    ops = SystemOperators.build(params)

    if cfg.pulses.carriers == "calibrated":
        levels = ops.calibrated_levels()
    else:
        levels = ThreeLevelParams.from_spectrum(jc_dressed_spectrum(params))

    design = cfg.pulses.design
    solution = None
    if design.kind == "optimal":
        if design.target_phase_plus is None:
            targets = optimal_target_phases(levels, design.target_phase_minus)
        else:
            targets = (design.target_phase_minus, design.target_phase_plus)
        solution = solve_optimal_pulses(levels, k=design.k, target_phases=targets)
        amp_plus, amp_minus = solution.amplitude_plus, solution.amplitude_minus
        phi_plus, phi_minus = solution.pulse_phi_plus, solution.pulse_phi_minus
        if abs(solution.phase_residual) > 1e-9:
            warnings.append(
                "target phases violate the phase-matching condition "
                f"(residual {solution.phase_residual:.3g} g units)"
            )
    else:
        def _amp(side: str, specific: Optional[Quantity]) -> float:
            q = specific if specific is not None else design.amplitude
            if q is None:
                warnings.append(f"no amplitude given for the {side} pulse; using 0")
                return 0.0
            return q.in_au()

        amp_plus = _amp("plus", design.amplitude_plus)
        amp_minus = _amp("minus", design.amplitude_minus)
        phi_plus, phi_minus = design.phi_plus, design.phi_minus

    omega_plus = (
        cfg.pulses.omega_center_plus.in_au()
        if cfg.pulses.omega_center_plus is not None else levels.omega_plus
    )
    omega_minus = (
        cfg.pulses.omega_center_minus.in_au()
        if cfg.pulses.omega_center_minus is not None else levels.omega_minus
    )
    tau0 = cfg.pulses.tau0.in_au()
    delta = cfg.pulses.delta.in_au()
    pulses = PulsePair(
        plus=PulseSpec(
            amplitude=amp_plus, omega_center=omega_plus, tau0=tau0,
            beta=cfg.pulses.beta_plus.in_au(), phi=phi_plus, delta=delta,
        ),
        minus=PulseSpec(
            amplitude=amp_minus, omega_center=omega_minus, tau0=tau0,
            beta=cfg.pulses.beta_minus.in_au(), phi=phi_minus, delta=delta,
        ),
    )

    propagation = cfg.propagation.to_config()

    scan_spec = None
    if cfg.scan is not None:
        try:
            axes = tuple(a.to_axis() for a in cfg.scan.axes)
            scan_spec = ScanSpec(
                axes=axes,
                params=params,
                base_pulses=pulses,
                propagation=propagation,
                mode=cfg.scan.mode,
                search_samples_per_period=cfg.scan.search_samples_per_period,
                search_window_periods=cfg.scan.search_window_periods,
            )
        except (ValueError, UnitError) as exc:
            raise ConfigError(f"invalid scan block: {exc}") from exc

    return ResolvedRun(
        config=cfg,
        params=params,
        ops=ops,
        levels=levels,
        pulses=pulses,
        propagation=propagation,
        scan_spec=scan_spec,
        solution=solution,
        warnings=warnings,
    )


def resolve_text(text: str) -> ResolvedRun:
    return resolve(parse_config(text))
