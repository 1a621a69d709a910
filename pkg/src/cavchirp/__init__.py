"""Chirped-pulse orientation control of a single molecule in a cavity.

Library layout:

- units: frozen conversions between lab units and atomic units
- model: rotor-photon basis, operators, polariton spectrum
- pulses: spectral-domain chirped pulses and their closed time-domain form
- magnus: first-order three-level solution and optimal pulse parameters
- propagate: exact driven dynamics and post-pulse observables
- scan: parameter-sweep landscapes, ridge extraction, fitted loci
- config / csvio: run configuration and versioned file outputs
- service / cli: HTTP service wrapping the library, thin command-line client
"""

from .model import ModelParams, build_basis, jc_dressed_spectrum
from .pulses import PulsePair, PulseSpec
from .magnus import (
    ThreeLevelParams,
    magnus_wavefunction,
    max_orientation_bound,
    solve_optimal_pulses,
)
from .propagate import PropagationConfig, SystemOperators, propagate

__version__ = "0.1.0"

__all__ = [
    "ModelParams",
    "PropagationConfig",
    "PulsePair",
    "PulseSpec",
    "SystemOperators",
    "ThreeLevelParams",
    "build_basis",
    "jc_dressed_spectrum",
    "magnus_wavefunction",
    "max_orientation_bound",
    "propagate",
    "solve_optimal_pulses",
    "__version__",
]
