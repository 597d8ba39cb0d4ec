"""Sympathetic cooling of long trapped-ion chains.

Tools to compute trap equilibria and normal modes, exact and perturbative
cooling rates of damped chains, power-law heating, cooling limits, phonon
dynamics over gate/cool duty cycles, circuit fidelity, and the parameter
studies built on top of them (coolant count and placement, cooling
schedule, trap frequency).
"""

__version__ = "0.1.0"

from .units import (OMEGA_UNIT, Normalization, normalization_for,
                    normalization_for_amu, rate_to_si, rate_from_si,
                    time_to_normalized, time_from_normalized, frequency_to_si)
from .potential import (TrapPotential, IonChain, REFERENCE_POTENTIAL,
                        potential_energy, gradient, hessian,
                        solve_equilibrium, build_chain, calibrate_equispacing,
                        calibrate_equispacing_normalized, ion_labels,
                        label_to_index, index_to_label, centered_labels,
                        inner_spacings)
from .modes import (ModeSpectrum, normal_modes, spectrum_for, dynamical_matrix,
                    com_mode_index, participation_sum)
from .damping import (DampingConfig, DampedSpectrum, companion_matrix,
                      exact_damped_modes, perturbative_rate, linearized_rate,
                      first_order_mode_correction, perturbation_error_scan)
from .heating import (HeatingModel, heating_rate, calibrate_d, with_d,
                      crossover_frequency)
from .limit import (CoolingLimitReport, cooling_limit, com_cooling_rate,
                    quadratic_upper_bound)
from .dynamics import (DutyCycleSchedule, FidelityModel, Trajectory,
                       GateRecord, evolve, gate_fidelity, mean_gate_fidelity,
                       total_fidelity, steady_cycle_start)
from .optimize import (RABI_GAMMA, SweepSpec, SweepResult, study_chain,
                       study_potential, duty_point_metrics,
                       optimal_cooling_time, reference_heating_model,
                       reference_kappa, calibrate_kappa_to_mean_fidelity,
                       sweep_duty_cycle, sweep_duty_cycle_with_radial,
                       sweep_coolant_count, enumerate_placements,
                       sweep_frequency_fill)
from .errors import (ConfigError, ConvergenceError, InstabilityError,
                     DegenerateModeError, GuardError, CalibrationError)
