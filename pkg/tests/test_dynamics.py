import math

import numpy as np
import pytest

import ioncool as ic

H, C = 1000.0, 67.0  # representative SI rates for schedule-level tests


def test_schedule_validation_and_duty():
    s = ic.DutyCycleSchedule(gate_time=250e-6, gates_per_cycle=1,
                             cooling_time_per_cycle=750e-6, total_gates=500)
    assert s.duty_cycle == pytest.approx(0.75, rel=1e-12)
    assert s.axial_duty_cycle == pytest.approx(0.75, rel=1e-12)
    r = ic.DutyCycleSchedule(cooling_time_per_cycle=500e-6,
                             radial_overhead=500e-6)
    assert r.duty_cycle == pytest.approx(0.4, rel=1e-12)
    assert r.axial_duty_cycle == pytest.approx(2 / 3, rel=1e-12)
    with pytest.raises(ValueError):
        ic.DutyCycleSchedule(gates_per_cycle=0)
    with pytest.raises(ValueError):
        ic.DutyCycleSchedule(cooling_time_per_cycle=-1e-6)


def test_no_heating_no_cooling_constant():
    s = ic.DutyCycleSchedule(cooling_time_per_cycle=0.0, total_gates=10)
    traj = ic.evolve(5.0, s, h=0.0, c=0.0)
    assert all(abs(n - 5.0) < 1e-15 for n in traj.nbars)


def test_long_cooling_reaches_fixed_point():
    s = ic.DutyCycleSchedule(gates_per_cycle=1, cooling_time_per_cycle=1.0,
                             total_gates=1)
    traj = ic.evolve(500.0, s, h=H, c=C)
    assert traj.nbars[-1] == pytest.approx(H / C, rel=1e-3)


def test_heating_segments_exactly_linear():
    s = ic.DutyCycleSchedule(gates_per_cycle=4, cooling_time_per_cycle=300e-6,
                             total_gates=8)
    traj = ic.evolve(2.0, s, h=H, c=C)
    g = traj.gates
    # three consecutive gate starts inside one cycle are collinear
    x = [g[0].start_time, g[1].start_time, g[2].start_time]
    y = [g[0].n_at_start, g[1].n_at_start, g[2].n_at_start]
    slope1 = (y[1] - y[0]) / (x[1] - x[0])
    slope2 = (y[2] - y[1]) / (x[2] - x[1])
    assert abs(slope1 - slope2) / slope1 < 1e-12
    assert slope1 == pytest.approx(H, rel=1e-12)


def test_zero_cooling_circuit_wall_time():
    s = ic.DutyCycleSchedule(gate_time=250e-6, gates_per_cycle=1,
                             cooling_time_per_cycle=0.0, total_gates=500)
    assert s.total_wall_time() == pytest.approx(0.125, rel=1e-12)
    traj = ic.evolve(0.0, s, h=H, c=C)
    assert traj.times[-1] == pytest.approx(0.125, rel=1e-12)


def test_gate_fidelity_closed_forms():
    model = ic.FidelityModel(t2=0.5, kappa=1.0)
    assert ic.gate_fidelity(model, 0.0, 0.0) == 1.0
    assert ic.gate_fidelity(model, math.sqrt(3.0), 0.0) == pytest.approx(0.5, rel=1e-14)
    assert ic.gate_fidelity(model, 0.0, 0.5) == pytest.approx(math.exp(-1.0), rel=1e-14)
    with pytest.raises(ValueError):
        ic.gate_fidelity(model, -1.0, 0.0)


def test_fidelity_aggregation_identities():
    s = ic.DutyCycleSchedule(gates_per_cycle=2, cooling_time_per_cycle=400e-6,
                             total_gates=100)
    model = ic.FidelityModel(t2=0.5, kappa=0.01)
    traj = ic.evolve(10.0, s, h=H, c=C, fidelity=model)
    fs = [g.fidelity for g in traj.gates]
    total = ic.total_fidelity(traj)
    assert total == pytest.approx(math.exp(math.fsum(math.log(f) for f in fs)),
                                  rel=1e-12)
    assert ic.mean_gate_fidelity(traj) == pytest.approx(sum(fs) / len(fs),
                                                        rel=1e-12)


def test_perfect_gates_aggregate_to_one():
    traj = ic.Trajectory()
    for i in range(5):
        traj.gates.append(ic.GateRecord(start_time=i * 1e-3, n_at_start=0.0,
                                        fidelity=1.0))
    assert ic.mean_gate_fidelity(traj) == 1.0
    assert ic.total_fidelity(traj) == 1.0


def test_fidelity_requires_model():
    s = ic.DutyCycleSchedule(cooling_time_per_cycle=100e-6, total_gates=3)
    traj = ic.evolve(1.0, s, h=H, c=C)
    with pytest.raises(ValueError):
        ic.mean_gate_fidelity(traj)


def test_steady_cycle_start_is_fixed_point():
    s = ic.DutyCycleSchedule(gates_per_cycle=3, cooling_time_per_cycle=600e-6,
                             total_gates=3, radial_overhead=100e-6)
    n_s = ic.steady_cycle_start(s, H, C)
    traj = ic.evolve(n_s, s, h=H, c=C)
    # end of the single full cycle returns to the fixed point
    assert traj.nbars[-1] == pytest.approx(n_s, rel=1e-12)


def test_trajectory_bounds_during_cycling():
    s = ic.DutyCycleSchedule(gates_per_cycle=2, cooling_time_per_cycle=500e-6,
                             total_gates=40)
    n0 = H / C
    traj = ic.evolve(n0, s, h=H, c=C)
    assert all(n >= n0 * (1 - 1e-12) for n in traj.nbars)
    # starting at or below the periodic orbit, the peak stays under the
    # steady gate-start value plus one cycle of heating
    ceiling = ic.steady_cycle_start(s, H, C) + 2 * H * s.gate_time
    assert max(traj.nbars) <= ceiling * (1 + 1e-12)


def test_mean_fidelity_unimodal_in_cooling_time():
    model = ic.FidelityModel(t2=0.5, kappa=2.4e-3)
    taus = np.arange(50e-6, 2000e-6, 50e-6)
    means = []
    for tau in taus:
        s = ic.DutyCycleSchedule(gates_per_cycle=1, cooling_time_per_cycle=tau,
                                 total_gates=200)
        start = ic.steady_cycle_start(s, H, C)
        traj = ic.evolve(start, s, h=H, c=C, fidelity=model)
        means.append(ic.mean_gate_fidelity(traj))
    i = int(np.argmax(means))
    assert 0 < i < len(means) - 1
    assert all(b > a for a, b in zip(means[:i], means[1:i + 1]))
    assert all(a > b for a, b in zip(means[i:], means[i + 1:]))


def test_csv_rows_shape():
    s = ic.DutyCycleSchedule(cooling_time_per_cycle=100e-6, total_gates=2,
                             radial_overhead=50e-6)
    traj = ic.evolve(0.0, s, h=H, c=C)
    rows = traj.csv_rows()
    assert rows[0][2] == "gate"
    labels = {r[2] for r in rows}
    assert labels == {"gate", "cool", "radial", "end"}
    times = [r[0] for r in rows]
    assert all(b > a for a, b in zip(times, times[1:]))


def test_sawtooth_floor_tracks_cooling_limit(heating_model):
    """A 23-ion chain equispaced at 3.7 um, seven centered coolants, 640 kHz
    damping, 60 percent duty over three long cycles: the end-of-cooling
    floor sits within 5 percent of h/c."""
    pot, _ = ic.calibrate_equispacing(23, 3.7e-6)
    chain = ic.build_chain(pot, n_coolants=7, n_qubits=14)
    rep = ic.cooling_limit(chain, heating_model, 5.328e-5)
    gates_per_cycle = 167
    heat_time = gates_per_cycle * 250e-6
    tau = 0.6 / 0.4 * heat_time
    s = ic.DutyCycleSchedule(gate_time=250e-6, gates_per_cycle=gates_per_cycle,
                             cooling_time_per_cycle=tau, total_gates=500)
    traj = ic.evolve(rep.n0, s, rep.h, rep.c)
    floors = [traj.nbars[i + 1] for i, p in enumerate(traj.phases)
              if p == "cool"]
    assert len(floors) == 3
    assert abs(floors[-1] - rep.n0) / rep.n0 < 0.05
