"""Gate/cool duty cycles: phonon sawtooth, fidelity, and the optimum.

Gates heat the COM mode; cooling intervals pull it back toward n0.  Gate
fidelity decays with the motional excitation at the gate start and with
the wall-clock dephasing of the whole cycle, so there is an interior
optimum in the cooling time.  This script draws the sawtooth, scans the
duty cycle at each tabulated Rabi frequency, and repeats the scan with a
radial-cooling wait.
"""

import numpy as np

import ioncool as ic
from ioncool.optimize import SweepSpec, optimal_cooling_time

heating = ic.reference_heating_model()
kappa = ic.reference_kappa()
print(f"calibrations: D = {heating.d:.4e}, kappa = {kappa:.4e}\n")

chain = ic.study_chain(6)

# --- sawtooth ------------------------------------------------------------
rep = ic.cooling_limit(chain, heating, ic.RABI_GAMMA[640e3])
sched = ic.DutyCycleSchedule(gates_per_cycle=8, cooling_time_per_cycle=2e-3,
                             total_gates=40)
traj = ic.evolve(rep.n0, sched, rep.h, rep.c)
print("phonon sawtooth (8 gates then one cooling interval per cycle):")
lo, hi = min(traj.nbars), max(traj.nbars)
for t, n, phase in traj.csv_rows()[:28]:
    bar = "#" * int(round((n - lo) / (hi - lo) * 50))
    print(f"  t = {t*1e3:7.3f} ms  n = {n:7.2f}  {phase:<6} {bar}")
print("  ...\n")

# --- duty-cycle scan at 640 kHz -----------------------------------------
taus = tuple(np.arange(25e-6, 3500e-6, 25e-6))
spec = SweepSpec(study="duty-scan", gamma=ic.RABI_GAMMA[640e3],
                 cooling_times=taus, gates_per_cycle=(1, 2, 4),
                 kappa=kappa, heating=heating)
result = ic.sweep_duty_cycle(spec)
best = result.argmax
print(f"640 kHz grid optimum: {best['cooling_time_s']*1e6:.0f} us cooling per "
      f"cycle at {best['gates_per_cycle']} gate/cycle")
print(f"  duty {best['axial_duty_cycle']*100:.1f}%, mean gate fidelity "
      f"{best['mean_fidelity']:.5f}, total {best['total_fidelity']:.3f}")
print("refined per gates-per-cycle:")
for g, info in best["refined_by_gates_per_cycle"].items():
    print(f"  {g} gate(s)/cycle: best cooling {info['cooling_time_s']*1e6:7.1f} us, "
          f"total fidelity {info['total_fidelity']:.4f}")
print("cooling after every single gate wins at every damping rate\n")

# --- optima across Rabi frequencies, with and without radial wait --------
print("optimal cooling time per gate (continuous refinement):")
print(f"  {'Rabi':>8} {'no radial':>12} {'radial = cooling':>18}")
for rabi in (640e3, 275e3, 180e3):
    t0, _ = optimal_cooling_time(ic.RABI_GAMMA[rabi], kappa, heating)
    t1, _ = optimal_cooling_time(ic.RABI_GAMMA[rabi], kappa, heating,
                                 radial_factor=1.0)
    print(f"  {rabi/1e3:5.0f} kHz {t0*1e6:9.0f} us {t1*1e6:15.0f} us")
print("the radial wait lengthens every cycle, so dephasing pushes the "
      "optimum toward shorter cooling")
