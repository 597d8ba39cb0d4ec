"""Exact damped-mode spectra versus the perturbative cooling-rate formula.

Cooling light on the coolant ions adds a velocity-damping force, turning
the chain into coupled damped oscillators.  The exact route diagonalizes
the 2N x 2N first-order system; the cheap route perturbs the undamped
modes.  This script shows how close the two stay across the realistic
damping range, and the trace identity that pins the exact solver.
"""

import numpy as np

import ioncool as ic

pot = ic.REFERENCE_POTENTIAL
u = ic.solve_equilibrium(pot, 15)
spec = ic.spectrum_for(pot, u)
k = -ic.hessian(pot, u)
coolants = frozenset({6, 7})  # center labels (-1, 0)

gamma = ic.RABI_GAMMA[640e3]
cfg = ic.DampingConfig(gamma=gamma, coolant_indices=coolants)
damped = ic.exact_damped_modes(k, cfg, undamped=spec)

print("damped eigenvalues matched to the five lowest modes "
      f"(gamma = {gamma:.3e}, coolants at labels -1, 0):")
print(f"  {'mode':>4} {'freq (und.)':>12} {'Im z':>12} {'-Re z (rate)':>14} "
      f"{'pert. rate':>14} {'rel err':>10}")
for i in range(5):
    z = damped.eigenvalues[i]
    pert = ic.perturbative_rate(spec, cfg, i)
    err = abs(pert + z.real) / -z.real
    print(f"  {i:>4} {spec.frequencies[i]:>12.6f} {z.imag:>12.6f} "
          f"{-z.real:>14.6e} {pert:>14.6e} {err:>10.2e}")

total = 2 * float(np.sum(damped.eigenvalues.real))
print(f"\ntrace identity: sum of 2 Re z = {total:.6e} "
      f"vs -gamma |C| = {-gamma * len(coolants):.6e}")

print("\nCOM-rate accuracy of the perturbative formula across gamma:")
for g, err in ic.perturbation_error_scan(k, coolants, np.logspace(-6, -3, 7)):
    print(f"  gamma = {g:.2e}: relative error {err:.2e}")

lin = ic.linearized_rate(spec, cfg, 0)
print(f"\nlinearized COM rate (gamma/2 x participation) = {lin:.4e}; "
      "at these damping strengths the linear form is already exact to ~1e-6")

w1 = ic.first_order_mode_correction(spec, cfg, 0)
print(f"first-order COM eigenvector correction norm = {np.linalg.norm(w1):.2e} "
      "(the damped COM mode barely hybridizes)")
