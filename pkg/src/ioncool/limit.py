"""Steady-state cooling limits n0 = h / c and the quadratic analytic bound."""

from dataclasses import dataclass

import numpy as np

from .damping import (DampingConfig, exact_damped_modes, linearized_rate,
                      perturbative_rate)
from .heating import heating_rate
from .modes import com_mode_index, spectrum_for
from .potential import hessian
from .units import frequency_to_si, rate_to_si

METHODS = ("exact-eigen", "perturbative", "linearized", "quadratic-bound")


@dataclass(frozen=True)
class CoolingLimitReport:
    """One cooling-limit evaluation: n0 = h / c with both rates in SI."""

    n0: float
    h: float
    c: float
    method: str
    omega0_si: float
    participation: float


def com_cooling_rate(chain, gamma, method="exact-eigen", spectrum=None):
    """COM cooling rate (normalized units) for a chain and coolant set."""
    if spectrum is None:
        spectrum = spectrum_for(chain.potential, chain.positions)
    cfg = DampingConfig(gamma=gamma, coolant_indices=chain.coolant_indices)
    com = com_mode_index(spectrum)
    if method == "exact-eigen":
        damped = exact_damped_modes(-hessian(chain.potential, chain.positions),
                                    cfg, undamped=spectrum)
        return damped.cooling_rate(com)
    if method == "perturbative":
        return perturbative_rate(spectrum, cfg, com)
    if method == "linearized":
        return linearized_rate(spectrum, cfg, com)
    raise ValueError(f"unknown method {method!r}; use one of {METHODS[:3]}")


def cooling_limit(chain, heating_model, gamma, method="exact-eigen"):
    """Cooling limit of the chain's COM mode.

    h comes from the heating model at the chain's COM frequency (SI); c is
    the damped-mode cooling rate by the chosen method, converted to SI.

    Raises
    ------
    ValueError
        If there are no coolants or the resulting cooling rate is zero.
    """
    if not chain.coolant_indices:
        raise ValueError("chain has no coolants; cooling limit undefined")
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    spectrum = spectrum_for(chain.potential, chain.positions)
    com = com_mode_index(spectrum)
    omega0 = frequency_to_si(spectrum.frequencies[com])
    h = heating_rate(heating_model, omega0)
    c = rate_to_si(com_cooling_rate(chain, gamma, method, spectrum=spectrum))
    if c == 0:
        raise ValueError("cooling rate is zero; no steady state exists")
    s = float(np.sum(spectrum.mode(com)[sorted(chain.coolant_indices)] ** 2))
    return CoolingLimitReport(n0=h / c, h=h, c=c, method=method,
                              omega0_si=omega0, participation=s)


def quadratic_upper_bound(n_ions, n_coolants, x2, gamma, heating_model):
    """Analytic cooling limit of the matching pure-quadratic chain.

    In a quadratic trap every COM participation factor is N^(-1/2), so the
    coolant participation sum is exactly N_C / N, and the COM frequency is
    sqrt(2 x2) in normalized units.  The quadratic chain both heats faster
    (lower frequency) and cools slower (lower participation) than a quartic
    chain with the same x2 and centered coolants, so this value bounds the
    quartic chain's limit from above.
    """
    if n_coolants < 1 or n_coolants > n_ions:
        raise ValueError("need 1 <= n_coolants <= n_ions")
    if not x2 > 0:
        raise ValueError("quadratic bound needs x2 > 0")
    omega_norm = np.sqrt(2.0 * x2)
    s = n_coolants / n_ions
    g = gamma / omega_norm
    x = (g * s) ** 2
    c_norm = omega_norm / np.sqrt(2.0) * np.sqrt(x / (np.sqrt(1.0 + x) + 1.0))
    omega0 = frequency_to_si(omega_norm)
    h = heating_rate(heating_model, omega0)
    c = rate_to_si(c_norm)
    return CoolingLimitReport(n0=h / c, h=h, c=c, method="quadratic-bound",
                              omega0_si=omega0, participation=s)
