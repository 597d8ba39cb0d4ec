"""Empirical power-law heating of the COM mode.

The heating rate at an axial COM angular frequency w (rad/s) is

    h = D * w * (A0 * w^(-2-alpha) + B0)    [quanta/s],

with chain-independent A0, B0, alpha and a dimensionless normalization D
pinned once against a reference cooling limit.  Below the crossover
frequency the A0 term dominates and heating falls as the trap stiffens.
"""

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class HeatingModel:
    """Power-law heating parameters.

    alpha is the dimensionless noise exponent, a0 has units
    s^-1 (rad/s)^(2+alpha), b0 has units s^-1, and d is the dimensionless
    chain normalization factor.
    """

    alpha: float = 0.8
    a0: float = 8.2e17
    b0: float = 0.9
    d: float = 1.0

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if self.a0 < 0 or self.b0 < 0:
            raise ValueError("a0 and b0 must be non-negative")
        if self.d <= 0:
            raise ValueError("d must be positive")


def heating_rate(model, omega0_si):
    """COM heating rate in quanta/s at an angular frequency in rad/s."""
    if not omega0_si > 0:
        raise ValueError(f"omega0 must be positive, got {omega0_si}")
    return model.d * omega0_si * (
        model.a0 * omega0_si ** (-2.0 - model.alpha) + model.b0)


def crossover_frequency(model):
    """Angular frequency above which heating grows with frequency again."""
    return (model.a0 * (1.0 + model.alpha) / model.b0) ** (1.0 / (2.0 + model.alpha))


def calibrate_d(model, omega0_si, cooling_rate_si, observed_n0):
    """Return D such that h/c reproduces an observed cooling limit.

    The limit is linear in D, so this is a single division:
    D = n0_observed * c / (w (A0 w^(-2-alpha) + B0)).
    """
    if not observed_n0 > 0:
        raise ValueError("observed n0 must be positive")
    if not cooling_rate_si > 0:
        raise ValueError("cooling rate must be positive for calibration")
    h_unit = heating_rate(replace(model, d=1.0), omega0_si)
    return float(observed_n0 * cooling_rate_si / h_unit)


def with_d(model, d):
    """A copy of the model with the normalization factor replaced."""
    return replace(model, d=float(d))
