"""Dimensionless normalization and SI conversions.

All chain mechanics in this package run in dimensionless units: energies in
units of E0 = e^2/(4 pi eps0 d0), lengths in units of d0, and time measured
so that one angular-frequency unit equals 2 pi x 1 MHz.  The length unit d0
is fixed by force balance at the frequency unit,

    d0^3 * m * omega_unit^2 = e^2 / (4 pi eps0),

so a dimensionless rate gamma converts to SI as gamma * omega_unit.
"""

from dataclasses import dataclass

import numpy as np
from scipy import constants as const

#: angular frequency unit, 2 pi x 1 MHz
OMEGA_UNIT = 2.0 * np.pi * 1e6

#: Coulomb coupling e^2/(4 pi eps0), in J m
COULOMB = const.e**2 / (4.0 * np.pi * const.epsilon_0)

#: default ion mass (amu); a single mass is used for the whole chain
DEFAULT_MASS_AMU = 171.0


@dataclass(frozen=True)
class Normalization:
    """Unit system for one ion mass.

    Attributes
    ----------
    mass : float
        Ion mass in kg.
    d0 : float
        Length unit in m.
    e0 : float
        Energy unit in J.
    omega_unit : float
        Angular frequency unit in rad/s (always 2 pi x 1 MHz).
    """

    mass: float
    d0: float
    e0: float
    omega_unit: float = OMEGA_UNIT


def normalization_for(mass_kg):
    """Build the Normalization for an ion of the given mass.

    Parameters
    ----------
    mass_kg : float
        Ion mass in kg (use `mass_amu * scipy.constants.atomic_mass`).

    Raises
    ------
    ValueError
        If the mass is not positive.
    """
    if not mass_kg > 0:
        raise ValueError(f"ion mass must be positive, got {mass_kg}")
    d0 = (COULOMB / (mass_kg * OMEGA_UNIT**2)) ** (1.0 / 3.0)
    e0 = COULOMB / d0
    return Normalization(mass=mass_kg, d0=d0, e0=e0)


def normalization_for_amu(mass_amu=DEFAULT_MASS_AMU):
    """Same as :func:`normalization_for` with the mass given in amu."""
    return normalization_for(mass_amu * const.atomic_mass)


def rate_to_si(gamma_normalized):
    """Convert a dimensionless rate to 1/s."""
    return gamma_normalized * OMEGA_UNIT


def rate_from_si(rate_si):
    """Convert a rate in 1/s to dimensionless units."""
    return rate_si / OMEGA_UNIT


def time_to_normalized(t_seconds):
    """Convert a duration in seconds to dimensionless time units."""
    return t_seconds * OMEGA_UNIT


def time_from_normalized(t_normalized):
    """Convert a dimensionless duration to seconds."""
    return t_normalized / OMEGA_UNIT


def frequency_to_si(omega_normalized):
    """Convert a dimensionless angular frequency to rad/s."""
    return omega_normalized * OMEGA_UNIT
