"""COM phonon-number dynamics over gate/cool duty cycles and gate fidelity.

A cycle runs `gates_per_cycle` sequential two-qubit gates, then one cooling
interval, then an optional radial-cooling wait (no gates, no axial cooling).
The mode heats linearly at h quanta/s during gates and the radial wait and
relaxes exponentially toward n0 = h / c during cooling, so the trajectory
has a piecewise closed form and is evaluated segment by segment without an
ODE solver.
"""

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class DutyCycleSchedule:
    """Timing of one gate/cool cycle and the total gate count."""

    gate_time: float = 250e-6
    gates_per_cycle: int = 1
    cooling_time_per_cycle: float = 0.0
    total_gates: int = 500
    radial_overhead: float = 0.0

    def __post_init__(self):
        if self.gate_time < 0 or self.cooling_time_per_cycle < 0 \
                or self.radial_overhead < 0:
            raise ValueError("times must be non-negative")
        if self.gates_per_cycle < 1 or self.total_gates < 1:
            raise ValueError("gate counts must be >= 1")

    @property
    def cycle_time(self):
        return (self.gates_per_cycle * self.gate_time
                + self.cooling_time_per_cycle + self.radial_overhead)

    @property
    def duty_cycle(self):
        """Cooling fraction of the full cycle (radial wait included)."""
        return self.cooling_time_per_cycle / self.cycle_time

    @property
    def axial_duty_cycle(self):
        """Cooling fraction of cooling + gate time, radial wait excluded."""
        busy = self.cooling_time_per_cycle + self.gates_per_cycle * self.gate_time
        return self.cooling_time_per_cycle / busy

    @property
    def n_cycles(self):
        return math.ceil(self.total_gates / self.gates_per_cycle)

    def total_wall_time(self):
        """Wall time of the whole circuit, trailing cooling included."""
        full, rem = divmod(self.total_gates, self.gates_per_cycle)
        t = full * self.cycle_time
        if rem:
            t += (rem * self.gate_time + self.cooling_time_per_cycle
                  + self.radial_overhead)
        return t


@dataclass(frozen=True)
class FidelityModel:
    """Two-qubit gate fidelity vs motional excitation and qubit dephasing.

    F(n, w) = (1 + (kappa n)^2)^(-1/2) * exp(-w / t2), where w is the wall
    time attributed to the gate (its own duration plus its per-gate share of
    the cycle's cooling and radial time).
    """

    t2: float = 0.5
    kappa: float = 0.0

    def __post_init__(self):
        if not self.t2 > 0:
            raise ValueError("t2 must be positive")
        if self.kappa < 0:
            raise ValueError("kappa must be non-negative")


def gate_fidelity(model, n_at_start, wall_time_attributed):
    """Fidelity of one gate starting at phonon number n."""
    if n_at_start < 0 or wall_time_attributed < 0:
        raise ValueError("n and wall time must be non-negative")
    motional = (1.0 + (model.kappa * n_at_start) ** 2) ** -0.5
    return motional * math.exp(-wall_time_attributed / model.t2)


@dataclass
class GateRecord:
    start_time: float
    n_at_start: float
    fidelity: float = None


@dataclass
class Trajectory:
    """Sampled n̄(t) at segment boundaries plus per-gate records."""

    times: list = field(default_factory=list)
    nbars: list = field(default_factory=list)
    phases: list = field(default_factory=list)
    gates: list = field(default_factory=list)

    def append(self, t, n, phase):
        self.times.append(t)
        self.nbars.append(n)
        self.phases.append(phase)

    def csv_rows(self):
        """Rows of (t_seconds, n_quanta, phase_label)."""
        return list(zip(self.times, self.nbars, self.phases))


def steady_cycle_start(schedule, h, c):
    """Gate-start phonon number of the periodic full-cycle orbit.

    Fixed point of one cycle (g gates, cooling, radial wait):

        n* = n0 + (g h T_gate e^(-c tau) + h t_radial) / (1 - e^(-c tau)).

    Requires c > 0 and a positive cooling interval.
    """
    if c <= 0 or schedule.cooling_time_per_cycle <= 0:
        raise ValueError("steady cycle needs c > 0 and a cooling interval")
    n0 = h / c
    decay = math.exp(-c * schedule.cooling_time_per_cycle)
    heat = (schedule.gates_per_cycle * h * schedule.gate_time * decay
            + h * schedule.radial_overhead)
    return n0 + heat / (1.0 - decay)


def evolve(n_init, schedule, h, c, fidelity=None):
    """Evolve n̄(t) through the whole schedule.

    Parameters
    ----------
    n_init : float
        Phonon number at t = 0 (the first gate starts immediately).
    schedule : DutyCycleSchedule
    h : float
        Heating rate, quanta/s.
    c : float
        COM cooling rate during cooling intervals, 1/s.
    fidelity : FidelityModel, optional
        When given, each gate record carries its fidelity; the wall time
        attributed to a gate is gate_time + (cooling + radial)/(gates in
        its own cycle).

    Returns
    -------
    Trajectory
    """
    if n_init < 0:
        raise ValueError("n_init must be non-negative")
    if h < 0 or c < 0:
        raise ValueError("rates must be non-negative")
    n0 = h / c if c > 0 else 0.0
    traj = Trajectory()
    t, n = 0.0, float(n_init)
    remaining = schedule.total_gates
    while remaining > 0:
        g_here = min(schedule.gates_per_cycle, remaining)
        w_attr = schedule.gate_time + (
            schedule.cooling_time_per_cycle + schedule.radial_overhead) / g_here
        for _ in range(g_here):
            f = gate_fidelity(fidelity, n, w_attr) if fidelity else None
            traj.gates.append(GateRecord(start_time=t, n_at_start=n, fidelity=f))
            traj.append(t, n, "gate")
            t += schedule.gate_time
            n += h * schedule.gate_time
        remaining -= g_here
        if schedule.cooling_time_per_cycle > 0:
            traj.append(t, n, "cool")
            t += schedule.cooling_time_per_cycle
            if c > 0:
                n = n0 + (n - n0) * math.exp(-c * schedule.cooling_time_per_cycle)
            else:
                n += h * schedule.cooling_time_per_cycle
        if schedule.radial_overhead > 0:
            traj.append(t, n, "radial")
            t += schedule.radial_overhead
            n += h * schedule.radial_overhead
    traj.append(t, n, "end")
    return traj


def _gate_fidelities(trajectory):
    fs = [g.fidelity for g in trajectory.gates]
    if not fs:
        raise ValueError("trajectory has no recorded gates")
    if any(f is None for f in fs):
        raise ValueError("gates carry no fidelity; evolve with a FidelityModel")
    return fs


def mean_gate_fidelity(trajectory):
    """Arithmetic mean of the per-gate fidelities."""
    fs = _gate_fidelities(trajectory)
    return math.fsum(fs) / len(fs)


def total_fidelity(trajectory):
    """Product of the per-gate fidelities (whole-circuit figure of merit)."""
    fs = _gate_fidelities(trajectory)
    return math.exp(math.fsum(math.log(f) for f in fs))
