"""Cooling limit across COM frequency and coolant filling fraction.

A 21-ion chain is rescaled to a grid of COM frequencies (the trap
coefficients transform as (f^2, f^(10/3)), which multiplies every mode
frequency by f without changing the mode shapes) while coolants fill the
chain from the center outward.  Stiffer traps heat less, so the limit
falls to the right; adding coolants saturates once the participation sum
approaches one, so rows plateau downward.
"""

import numpy as np

import ioncool as ic
from ioncool.optimize import SweepSpec

heating = ic.reference_heating_model()
freq_khz = (150, 200, 250, 300, 350, 400)
fills = (1, 3, 5, 7, 9, 13, 17, 21)

spec = SweepSpec(study="freq-fill",
                 com_frequencies_si=tuple(2 * np.pi * f * 1e3 for f in freq_khz),
                 fill_counts=fills, gamma=ic.RABI_GAMMA[640e3],
                 kappa=0.0, heating=heating)
result = ic.sweep_frequency_fill(spec, n_ions=21)

table = {}
for rec in result.records:
    table[(rec["omega0_target_si"], rec["fill_count"])] = rec

print("cooling limit n0 (quanta), 21-ion chain, 640 kHz damping")
header = "  fill\\freq " + "".join(f"{f:>9} kHz" for f in freq_khz)
print(header)
for count in fills:
    row = f"  {count:>2}/21     "
    for f in freq_khz:
        rec = table[(2 * np.pi * f * 1e3, count)]
        row += f"{rec['n0']:>13.1f}"
    print(row)

print("\nparticipation sum of the centered coolants (shared by all columns):")
for count in fills:
    rec = table[(2 * np.pi * freq_khz[0] * 1e3, count)]
    print(f"  {count:>2}/21: {rec['participation']:.4f}")

last, prev = fills[-1], fills[-2]
worst = max(abs(table[(2 * np.pi * f * 1e3, prev)]["n0"]
                - table[(2 * np.pi * f * 1e3, last)]["n0"])
            / table[(2 * np.pi * f * 1e3, last)]["n0"] for f in freq_khz)
print(f"\nplateau: filling {prev}/21 -> {last}/21 moves n0 by at most "
      f"{worst*100:.2f}% (the last coolants join at the low-participation "
      "edge)")
best = result.argmax
print(f"minimum of the map: n0 = {best['n0']:.2f} at "
      f"{best['omega0_si']/(2*np.pi*1e3):.0f} kHz, fill "
      f"{best['fill_count']}/21")
