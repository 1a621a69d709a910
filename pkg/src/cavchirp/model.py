"""Composite rotor-photon basis, operators and the polariton spectrum.

The system is a linear rigid rotor (rotational constant B, permanent dipole
mu) coupled to a single cavity mode of frequency omega_c. Only the M = 0
magnetic sublevel enters: a linearly polarized drive acting on cos(theta)
from |J=0, M=0> never populates M != 0.

The field-free Hamiltonian kept here is

    H0 = B J^2 + omega_c a^dag a - sqrt(3) g cos(theta) (a + a^dag),

with the quadratic self-energy and self-dipole terms dropped (negligible for
g/omega_c <= 0.1). The coupling prefactor sqrt(omega_c / (2 eps0 V)) mu is
never needed separately: the single-excitation coupling g is the primary
input and equals that prefactor times <00|cos(theta)|10> = 1/sqrt(3).

Restricting to the lowest two rotor states on resonance gives the familiar
two-level light-matter model whose eigenvalues come in doublets

    omega_{0,0} = 0,   omega_{+-,n} = omega_c (n + 1) +- g sqrt(n + 1),

with eigenstates |+-;n> = (|00>|n+1> +- |10>|n>)/sqrt(2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .units import DEBYE_TO_AU, WAVENUMBER_TO_AU

SQRT2 = math.sqrt(2.0)
SQRT3 = math.sqrt(3.0)

# OCS defaults. B and mu are the spectroscopic values converted to atomic
# units; omega_c and g are fixed by the quoted polariton doublet
# omega_- = 1.66379e-6, omega_+ = 2.03353e-6 via half-sum and half-difference.
DEFAULT_B_AU = 0.20286 * WAVENUMBER_TO_AU
DEFAULT_MU_AU = 0.715 * DEBYE_TO_AU
DEFAULT_OMEGA_MINUS = 1.66379e-6
DEFAULT_OMEGA_PLUS = 2.03353e-6
DEFAULT_OMEGA_C = 0.5 * (DEFAULT_OMEGA_PLUS + DEFAULT_OMEGA_MINUS)
DEFAULT_G = 0.5 * (DEFAULT_OMEGA_PLUS - DEFAULT_OMEGA_MINUS)


@dataclass(frozen=True)
class ModelParams:
    """Physical constants of the molecule-cavity system, in atomic units."""

    B: float = DEFAULT_B_AU
    mu: float = DEFAULT_MU_AU
    omega_c: float = DEFAULT_OMEGA_C
    g: float = DEFAULT_G
    J_max: int = 4
    n_max: int = 3

    def __post_init__(self) -> None:
        if self.B <= 0 or self.mu <= 0 or self.omega_c <= 0 or self.g <= 0:
            raise ValueError("B, mu, omega_c and g must all be positive")
        # The reference doublet itself sits at g/omega_c = 0.1000022, so the
        # regime bound carries a small relative slack.
        if self.g / self.omega_c > 0.1 * (1.0 + 1e-3):
            raise ValueError(
                f"coupling ratio g/omega_c = {self.g / self.omega_c:.3g} "
                "outside the supported regime (<= 0.1)"
            )
        if self.J_max < 1:
            raise ValueError("J_max must be at least 1")
        if self.n_max < 0:
            raise ValueError("n_max must be nonnegative")

    @property
    def mu01(self) -> float:
        """Rotor transition dipole <00|mu cos(theta)|10> = mu / sqrt(3)."""
        return self.mu / SQRT3


@dataclass(frozen=True)
class CompositeBasis:
    """Ordered |J, n> product basis, lexicographic in (n, J)."""

    J_max: int
    n_max: int

    def __post_init__(self) -> None:
        if self.J_max < 1:
            raise ValueError("J_max must be at least 1")
        if self.n_max < 0:
            raise ValueError("n_max must be nonnegative")

    @property
    def dim(self) -> int:
        return (self.J_max + 1) * (self.n_max + 1)

    def index(self, J: int, n: int) -> int:
        if not (0 <= J <= self.J_max and 0 <= n <= self.n_max):
            raise IndexError(f"state (J={J}, n={n}) outside basis")
        return n * (self.J_max + 1) + J

    def label(self, i: int) -> tuple[int, int]:
        if not (0 <= i < self.dim):
            raise IndexError(f"index {i} outside basis of dimension {self.dim}")
        n, J = divmod(i, self.J_max + 1)
        return J, n

    def labels(self) -> list[tuple[int, int]]:
        return [self.label(i) for i in range(self.dim)]


def build_basis(J_max: int, n_max: int) -> CompositeBasis:
    """Composite basis with 0 <= J <= J_max, 0 <= n <= n_max, M = 0."""
    return CompositeBasis(J_max=J_max, n_max=n_max)


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense operator over a CompositeBasis with a Hermiticity flag."""

    matrix: np.ndarray
    hermitian: bool = True

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("operator matrix must be square")
        if self.hermitian:
            scale = np.max(np.abs(m)) or 1.0
            dev = np.max(np.abs(m - m.conj().T))
            if dev > 1e-14 * scale:
                raise ValueError(f"matrix flagged Hermitian deviates by {dev:.3e}")


def cos_theta_coupling(J: int) -> float:
    """Rotor matrix element <J, M=0|cos(theta)|J+1, M=0>."""
    return (J + 1) / math.sqrt((2 * J + 1) * (2 * J + 3))


def cos_theta_matrix(basis: CompositeBasis) -> OperatorMatrix:
    """cos(theta) on the composite basis: couples J <-> J+1, diagonal in n."""
    dim = basis.dim
    mat = np.zeros((dim, dim))
    for n in range(basis.n_max + 1):
        for J in range(basis.J_max):
            c = cos_theta_coupling(J)
            i, j = basis.index(J, n), basis.index(J + 1, n)
            mat[i, j] = c
            mat[j, i] = c
    return OperatorMatrix(mat)


def photon_number_matrix(basis: CompositeBasis) -> OperatorMatrix:
    """a^dag a on the composite basis."""
    diag = np.array([float(n) for _, n in basis.labels()])
    return OperatorMatrix(np.diag(diag))


def rotor_j2_matrix(basis: CompositeBasis) -> OperatorMatrix:
    """J^2 (eigenvalue J(J+1)) on the composite basis."""
    diag = np.array([float(J * (J + 1)) for J, _ in basis.labels()])
    return OperatorMatrix(np.diag(diag))


def field_quadrature_matrix(basis: CompositeBasis) -> OperatorMatrix:
    """a + a^dag on the composite basis (identity on the rotor factor)."""
    dim = basis.dim
    mat = np.zeros((dim, dim))
    for n in range(basis.n_max):
        c = math.sqrt(n + 1)
        for J in range(basis.J_max + 1):
            i, j = basis.index(J, n), basis.index(J, n + 1)
            mat[i, j] = c
            mat[j, i] = c
    return OperatorMatrix(mat)


def build_H0(params: ModelParams, basis: CompositeBasis) -> OperatorMatrix:
    """Field-free Hamiltonian including the counter-rotating coupling."""
    dim = basis.dim
    h = np.zeros((dim, dim))
    for i, (J, n) in enumerate(basis.labels()):
        h[i, i] = params.B * J * (J + 1) + params.omega_c * n
    cos_m = cos_theta_matrix(basis).matrix
    quad = field_quadrature_matrix(basis).matrix
    h -= SQRT3 * params.g * (cos_m @ quad)
    return OperatorMatrix(h)


def dipole_matrix(params: ModelParams, basis: CompositeBasis) -> OperatorMatrix:
    """Projection of the dipole on the field axis, mu cos(theta)."""
    return OperatorMatrix(params.mu * cos_theta_matrix(basis).matrix)


@dataclass(frozen=True)
class DressedSpectrum:
    """Closed-form polariton doublets of the resonant two-level model.

    omega_minus[n] and omega_plus[n] hold omega_{-+,n} for n = 0 .. n_max-1
    (the highest doublet representable in the basis). M_{+-,0} are the
    orientation matrix elements <0;0|cos(theta)|+-;0> and mu_tilde_{+-,0}
    the transition dipoles, equal and opposite between the two branches.
    """

    omega_c: float
    g: float
    mu01: float
    basis: CompositeBasis
    omega_minus: np.ndarray = field(repr=False, default=None)
    omega_plus: np.ndarray = field(repr=False, default=None)

    omega_00: float = 0.0

    def __post_init__(self) -> None:
        n = np.arange(self.basis.n_max)
        rabi = self.g * np.sqrt(n + 1.0)
        center = self.omega_c * (n + 1.0)
        object.__setattr__(self, "omega_minus", center - rabi)
        object.__setattr__(self, "omega_plus", center + rabi)

    @property
    def omega_minus0(self) -> float:
        return float(self.omega_minus[0])

    @property
    def omega_plus0(self) -> float:
        return float(self.omega_plus[0])

    @property
    def M_plus0(self) -> float:
        return 1.0 / math.sqrt(6.0)

    @property
    def M_minus0(self) -> float:
        return -1.0 / math.sqrt(6.0)

    @property
    def mu_tilde_plus0(self) -> float:
        return +(SQRT2 / 2.0) * self.mu01

    @property
    def mu_tilde_minus0(self) -> float:
        return -(SQRT2 / 2.0) * self.mu01

    def ground_vector(self) -> np.ndarray:
        """|0;0> = |J=0>|n=0> on the composite basis."""
        v = np.zeros(self.basis.dim)
        v[self.basis.index(0, 0)] = 1.0
        return v

    def branch_vector(self, sign: int, n: int = 0) -> np.ndarray:
        """Doublet eigenvector |+-;n> on the composite basis.

        The interaction enters the total Hamiltonian with an overall minus
        sign, so the upper branch is the antisymmetric combination of
        |00>|n+1> and |10>|n>. Overall signs are fixed so the orientation
        moments keep their conventional values M_{+-,0} = +-1/sqrt(6):

            |+-;n> = (+-|10>|n> - |00>|n+1>) / sqrt(2).
        """
        if sign not in (+1, -1):
            raise ValueError("sign must be +1 or -1")
        if not (0 <= n < self.basis.n_max):
            raise ValueError(f"doublet n={n} not representable in this basis")
        v = np.zeros(self.basis.dim)
        v[self.basis.index(0, n + 1)] = -1.0 / SQRT2
        v[self.basis.index(1, n)] = sign / SQRT2
        return v


def jc_dressed_spectrum(params: ModelParams) -> DressedSpectrum:
    """Polariton spectrum, transition moments and dressed vectors."""
    basis = build_basis(params.J_max, params.n_max)
    return DressedSpectrum(
        omega_c=params.omega_c, g=params.g, mu01=params.mu01, basis=basis
    )


def jc_hamiltonian(params: ModelParams, basis: CompositeBasis) -> OperatorMatrix:
    """Resonant two-level light-matter Hamiltonian on the composite basis.

    Only J in {0, 1} participates; the rotor transition frequency is tied to
    the cavity (resonant construction), and the coupling keeps the excitation
    number n + J conserved. The interaction sign is inherited from the total
    Hamiltonian (coupling element -g sqrt(n+1)); eigenvalues are unaffected.
    States with J > 1 are left uncoupled at their bare energies.
    """
    dim = basis.dim
    h = np.zeros((dim, dim))
    for i, (J, n) in enumerate(basis.labels()):
        h[i, i] = params.omega_c * n + (params.omega_c if J == 1 else 0.0)
        if J > 1:
            h[i, i] += params.B * J * (J + 1) - 2.0 * params.B
    for n in range(basis.n_max):
        i = basis.index(1, n)
        j = basis.index(0, n + 1)
        h[i, j] = h[j, i] = -params.g * math.sqrt(n + 1)
    return OperatorMatrix(h)


def verify_spectrum_numerically(params: ModelParams, basis: CompositeBasis) -> dict:
    """Cross-check the closed-form doublets against direct diagonalization.

    Diagonalizes the resonant two-level block numerically and compares each
    doublet against omega_c (n+1) +- g sqrt(n+1). Returns the worst absolute
    eigenvalue deviation together with the per-doublet values.
    """
    if basis.J_max < 1 or basis.n_max < 1:
        raise ValueError("basis must include J in {0,1} and n in {0,1}")
    spectrum = DressedSpectrum(
        omega_c=params.omega_c, g=params.g, mu01=params.mu01, basis=basis
    )
    h = jc_hamiltonian(params, basis).matrix
    deviations = []
    doublets = []
    for n in range(basis.n_max):
        idx = [basis.index(0, n + 1), basis.index(1, n)]
        block = h[np.ix_(idx, idx)]
        evals = np.linalg.eigvalsh(block)
        lo, hi = float(evals[0]), float(evals[1])
        doublets.append(
            {
                "n": n,
                "numeric": (lo, hi),
                "closed_form": (float(spectrum.omega_minus[n]), float(spectrum.omega_plus[n])),
            }
        )
        deviations.append(abs(lo - spectrum.omega_minus[n]))
        deviations.append(abs(hi - spectrum.omega_plus[n]))
    ground = float(h[basis.index(0, 0), basis.index(0, 0)])
    deviations.append(abs(ground - spectrum.omega_00))
    return {
        "max_abs_deviation": float(max(deviations)),
        "ground": ground,
        "doublets": doublets,
    }
