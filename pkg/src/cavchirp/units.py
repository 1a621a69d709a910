"""Unit conversions between laboratory units and atomic units.

All internal computation uses atomic units (hbar = e = m_e = 1). Only four
conversion pairs are supported, matching the quantities a run config may
declare: energies in cm^-1, dipole moments in Debye, times in ns and chirp
rates in ns^2. The constants are frozen at the digits below so that binary
outputs are bit-reproducible.
"""

from __future__ import annotations

# Energy equivalent of one wavenumber (a.u. per cm^-1).
WAVENUMBER_TO_AU = 4.556335e-6

# Dipole moment of one Debye (a.u. per D).
DEBYE_TO_AU = 0.3934303

# Duration of one atomic time unit in seconds.
AU_TIME_SECONDS = 2.4188843265857e-17

# Derived time conversions.
NS_TO_AU = 1e-9 / AU_TIME_SECONDS          # ~4.134137e7 a.u. per ns
NS2_TO_AU2 = NS_TO_AU * NS_TO_AU           # chirp rates, a.u.^2 per ns^2


class UnitError(ValueError):
    """Raised for conversion requests between unsupported unit tags."""


# Canonical spellings accepted for each tag.
_ALIASES = {
    "cm^-1": "cm^-1",
    "cm-1": "cm^-1",
    "wavenumber": "cm^-1",
    "debye": "debye",
    "d": "debye",
    "ns": "ns",
    "ns^2": "ns^2",
    "ns2": "ns^2",
    "au": "au",
    "a.u.": "au",
    "au^2": "au^2",
    "a.u.^2": "au^2",
}

# Multiplicative factors for every supported (from, to) pair.
_FACTORS = {
    ("cm^-1", "au"): WAVENUMBER_TO_AU,
    ("au", "cm^-1"): 1.0 / WAVENUMBER_TO_AU,
    ("debye", "au"): DEBYE_TO_AU,
    ("au", "debye"): 1.0 / DEBYE_TO_AU,
    ("ns", "au"): NS_TO_AU,
    ("au", "ns"): 1.0 / NS_TO_AU,
    ("ns^2", "au^2"): NS2_TO_AU2,
    ("au^2", "ns^2"): 1.0 / NS2_TO_AU2,
}


def normalize_unit(tag: str) -> str:
    """Return the canonical spelling of a unit tag, or raise UnitError."""
    key = tag.strip().lower()
    if key not in _ALIASES:
        raise UnitError(f"unknown unit tag {tag!r}")
    return _ALIASES[key]


def conversion_factor(from_unit: str, to_unit: str) -> float:
    """Multiplicative factor taking a value in `from_unit` to `to_unit`."""
    src = normalize_unit(from_unit)
    dst = normalize_unit(to_unit)
    try:
        return _FACTORS[(src, dst)]
    except KeyError:
        raise UnitError(
            f"unsupported conversion {from_unit!r} -> {to_unit!r}; supported "
            "pairs are cm^-1<->au (energy), debye<->au (dipole), "
            "ns<->au (time), ns^2<->au^2 (chirp)"
        ) from None


def convert(value: float, from_unit: str, to_unit: str) -> float:
    """Exact multiplicative conversion between two supported unit tags."""
    return value * conversion_factor(from_unit, to_unit)
