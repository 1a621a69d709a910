"""First-order analytic solution of the driven three-level polariton model.

The ground dressed state |0;0> is driven to the doublet |+-;0> by the two
pulses, each addressing only its own branch. To first order in the
time-ordered exponential the state is governed entirely by the complex
pulse areas

    theta_pm(t) = mu_tilde_pm * integral dt' E_pm(t') exp(-i omega_pm t'),

through the interaction-picture wave function

    |psi> = cos(theta0) |0;0>
            + i (theta_-^*/theta0) sin(theta0) |-;0>
            + i (theta_+^*/theta0) sin(theta0) |+;0>,

with theta0 = sqrt(|theta_-|^2 + |theta_+|^2). At resonance the full-window
areas reduce to the spectral amplitudes, |theta_pm| = |mu_tilde_pm| * amp_pm,
independent of the chirp rates.

The field-free orientation of a three-level superposition,

    <cos(theta)> = 2 sum_pm |C00||C_pm| cos(-omega_pm t + phi_pm) M_pm,

is bounded by sqrt(M_-^2 + M_+^2) = 1/sqrt(3) ~ 0.5774. The bound is
attained for |C00| = sqrt(2)/2, |C_pm| = 1/2, provided the relative phases
phi_pm = arg C00 - arg C_pm satisfy the matching condition

    omega_- phi_+ - omega_+ phi_- = g pi + 2 g k pi,

which is what makes the two beat notes peak simultaneously. Solving the
area and phase conditions for the pulse parameters yields the optimal
amplitudes amp_pm = |theta_pm| / |mu_tilde_pm| and spectral phases.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .model import DressedSpectrum
from .pulses import PulsePair, PulseSpec, resonant_fourier_component

SQRT2 = math.sqrt(2.0)


def wrap_angle(x: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    w = math.fmod(x + math.pi, 2.0 * math.pi)
    if w <= 0.0:
        w += 2.0 * math.pi
    return w - math.pi


@dataclass(frozen=True)
class ThreeLevelParams:
    """Frequencies and moments of the {|0;0>, |-;0>, |+;0>} subsystem.

    Built either from the closed-form doublet (exactly opposite moments
    +-1/sqrt(6) mu-scaled) or from the diagonalized full model, where the
    magnitudes of the two branches differ at the few-percent level but the
    sign pattern is preserved.
    """

    omega_minus: float
    omega_plus: float
    mu_tilde_minus: float
    mu_tilde_plus: float
    M_minus: float
    M_plus: float

    def __post_init__(self) -> None:
        if not (self.omega_plus > self.omega_minus > 0):
            raise ValueError("branch frequencies must satisfy omega_+ > omega_- > 0")
        if not (self.mu_tilde_plus > 0 > self.mu_tilde_minus):
            raise ValueError("expected mu_tilde_+ > 0 > mu_tilde_-")
        if not (self.M_plus > 0 > self.M_minus):
            raise ValueError("expected M_+ > 0 > M_-")

    @classmethod
    def from_spectrum(cls, spectrum: DressedSpectrum) -> "ThreeLevelParams":
        return cls(
            omega_minus=spectrum.omega_minus0,
            omega_plus=spectrum.omega_plus0,
            mu_tilde_minus=spectrum.mu_tilde_minus0,
            mu_tilde_plus=spectrum.mu_tilde_plus0,
            M_minus=spectrum.M_minus0,
            M_plus=spectrum.M_plus0,
        )

    @property
    def g(self) -> float:
        return 0.5 * (self.omega_plus - self.omega_minus)


@dataclass(frozen=True)
class ThetaPair:
    """Complex pulse areas of the two branches."""

    theta_minus: complex
    theta_plus: complex

    @property
    def theta0(self) -> float:
        return math.hypot(abs(self.theta_minus), abs(self.theta_plus))


@dataclass(frozen=True)
class SuperpositionState:
    """Coefficients over {|0;0>, |-;0>, |+;0>} with the dynamical phase removed."""

    c00: complex
    c_minus: complex
    c_plus: complex

    @property
    def norm(self) -> float:
        return math.sqrt(abs(self.c00) ** 2 + abs(self.c_minus) ** 2 + abs(self.c_plus) ** 2)

    @property
    def populations(self) -> tuple[float, float, float]:
        return (abs(self.c00) ** 2, abs(self.c_minus) ** 2, abs(self.c_plus) ** 2)

    def relative_phase(self, branch: str) -> float:
        """phi_{branch,0} = arg C00 - arg C_branch, wrapped to (-pi, pi]."""
        c = {"minus": self.c_minus, "plus": self.c_plus}[branch]
        return wrap_angle(cmath.phase(self.c00) - cmath.phase(c))


def theta_integral(
    pulse: PulseSpec, omega_target: float, mu_tilde: float, t_end: float | None = None
) -> complex:
    """Complex pulse area, optionally truncated at t_end."""
    return mu_tilde * resonant_fourier_component(pulse, omega_target, t_end=t_end)


def theta_pair_from_pulses(
    pair: PulsePair, levels: ThreeLevelParams, t_end: float | None = None
) -> ThetaPair:
    return ThetaPair(
        theta_minus=theta_integral(pair.minus, levels.omega_minus, levels.mu_tilde_minus, t_end),
        theta_plus=theta_integral(pair.plus, levels.omega_plus, levels.mu_tilde_plus, t_end),
    )


def magnus_wavefunction(thetas: ThetaPair) -> SuperpositionState:
    """First-order state for given pulse areas; continuous at theta0 = 0."""
    theta0 = thetas.theta0
    sinc = np.sinc(theta0 / math.pi)  # sin(theta0)/theta0, exactly 1 at 0
    return SuperpositionState(
        c00=complex(math.cos(theta0)),
        c_minus=1j * np.conj(thetas.theta_minus) * sinc,
        c_plus=1j * np.conj(thetas.theta_plus) * sinc,
    )


def max_orientation_bound(M_minus: float, M_plus: float) -> float:
    """Largest attainable |<cos(theta)>| for the three-level superposition."""
    return math.hypot(M_minus, M_plus)


def orientation_timeseries(
    state: SuperpositionState, levels: ThreeLevelParams, t_grid
) -> np.ndarray:
    """Field-free <cos(theta)>(t) of a three-level superposition."""
    t = np.asarray(t_grid, dtype=float)
    a00 = abs(state.c00)
    out = np.zeros_like(t)
    for c, omega, M in (
        (state.c_minus, levels.omega_minus, levels.M_minus),
        (state.c_plus, levels.omega_plus, levels.M_plus),
    ):
        phi = cmath.phase(state.c00) - cmath.phase(c) if abs(c) > 0 else 0.0
        out += 2.0 * a00 * abs(c) * np.cos(-omega * t + phi) * M
    return out


def check_phase_condition(
    phases: tuple[float, float], levels: ThreeLevelParams
) -> float:
    """Residual of the phase-matching condition, in units of g.

    phases = (phi_minus, phi_plus) are target superposition phases. Returns
    (omega_- phi_+ - omega_+ phi_-)/g minus the nearest admissible value
    pi + 2 k pi, minimized over integer k; zero means exactly matched.
    """
    phi_minus, phi_plus = phases
    lhs = (levels.omega_minus * phi_plus - levels.omega_plus * phi_minus) / levels.g
    return wrap_angle(lhs - math.pi)


def optimal_target_phases(
    levels: ThreeLevelParams, phi_minus: float = 0.0, k: int = 0
) -> tuple[float, float]:
    """Pick phi_plus so that (phi_minus, phi_plus) matches the phase condition.

    With phi_minus = 0 and k = 0 this gives phi_plus = g pi / omega_-, which
    for the default spectrum (omega_- ~ 9 g) is numerically ~ pi/9.
    """
    phi_plus = (levels.g * math.pi * (1 + 2 * k) + levels.omega_plus * phi_minus) / levels.omega_minus
    return (phi_minus, phi_plus)


@dataclass(frozen=True)
class OptimalSolution:
    """Pulse parameters realizing the orientation maximum at branch k."""

    k: int
    theta_abs: float
    amplitude_minus: float
    amplitude_plus: float
    pulse_phi_minus: float
    pulse_phi_plus: float
    arg_theta_minus: float
    arg_theta_plus: float
    target_phase_minus: float
    target_phase_plus: float
    phase_residual: float

    @property
    def phase_condition_satisfied(self) -> bool:
        return abs(self.phase_residual) < 1e-9


def solve_optimal_pulses(
    levels: ThreeLevelParams,
    k: int = 0,
    target_phases: tuple[float, float] | None = None,
) -> OptimalSolution:
    """Amplitudes and spectral phases for the k-th orientation maximum.

    The area condition |theta_pm| = sqrt(2) pi/8 + sqrt(2) k pi/4 fixes the
    amplitudes through amp_pm = |theta_pm| / |mu_tilde_pm| (moduli, so the
    amplitudes stay nonnegative; the sign of mu_tilde_- moves into the
    phase). Target superposition phases map onto the area arguments via
    arg theta_pm = phi_pm + (-1)^k pi/2, since sin(theta0) and cos(theta0)
    change sign together along the branch sequence. Requested phases that
    violate the matching condition are not rejected: the solution is
    returned with the residual reported.
    """
    if k < 0:
        raise ValueError("branch index k must be nonnegative")
    if target_phases is None:
        target_phases = optimal_target_phases(levels)
    phi_minus_t, phi_plus_t = target_phases

    theta_abs = SQRT2 * math.pi / 8.0 + SQRT2 * k * math.pi / 4.0
    half_pi = 0.5 * math.pi if k % 2 == 0 else -0.5 * math.pi
    arg_theta_minus = wrap_angle(phi_minus_t + half_pi)
    arg_theta_plus = wrap_angle(phi_plus_t + half_pi)

    # theta_pm = mu_tilde_pm amp_pm exp(i phi_pm): the negative mu_tilde_-
    # contributes pi to arg theta_-.
    phi_pulse_plus = arg_theta_plus if levels.mu_tilde_plus > 0 else wrap_angle(arg_theta_plus - math.pi)
    phi_pulse_minus = wrap_angle(arg_theta_minus - math.pi) if levels.mu_tilde_minus < 0 else arg_theta_minus

    # Residual of the area-argument matching condition (admissible values
    # are even multiples of g pi), equivalent to the target-phase condition.
    lhs = (levels.omega_minus * arg_theta_plus - levels.omega_plus * arg_theta_minus) / levels.g
    residual = wrap_angle(lhs)

    return OptimalSolution(
        k=k,
        theta_abs=theta_abs,
        amplitude_minus=theta_abs / abs(levels.mu_tilde_minus),
        amplitude_plus=theta_abs / abs(levels.mu_tilde_plus),
        pulse_phi_minus=phi_pulse_minus,
        pulse_phi_plus=phi_pulse_plus,
        arg_theta_minus=arg_theta_minus,
        arg_theta_plus=arg_theta_plus,
        target_phase_minus=phi_minus_t,
        target_phase_plus=phi_plus_t,
        phase_residual=residual,
    )


def build_pulse_pair(
    solution: OptimalSolution,
    levels: ThreeLevelParams,
    tau0: float,
    beta_plus: float = 0.0,
    beta_minus: float = 0.0,
    delta: float = 0.0,
) -> PulsePair:
    """Realize an optimal solution as a concrete pulse pair."""
    return PulsePair(
        plus=PulseSpec(
            amplitude=solution.amplitude_plus,
            omega_center=levels.omega_plus,
            tau0=tau0,
            beta=beta_plus,
            phi=solution.pulse_phi_plus,
            delta=delta,
        ),
        minus=PulseSpec(
            amplitude=solution.amplitude_minus,
            omega_center=levels.omega_minus,
            tau0=tau0,
            beta=beta_minus,
            phi=solution.pulse_phi_minus,
            delta=delta,
        ),
    )
