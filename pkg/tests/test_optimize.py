import numpy as np
import pytest

import ioncool as ic
from ioncool.optimize import SweepSpec, duty_point_metrics, spec_hash

GAMMA_640 = 5.328e-5


def test_rabi_gamma_lookup():
    assert ic.RABI_GAMMA[180e3] == 1.387e-5
    assert ic.RABI_GAMMA[275e3] == 3.468e-5
    assert ic.RABI_GAMMA[640e3] == 5.328e-5


def test_placement_enumeration_small_chain(heating_model):
    records = ic.enumerate_placements(7, 2, GAMMA_640,
                                      heating_model=heating_model)
    assert len(records) == 21
    best = records[0]
    assert set(best["coolant_labels"]) in ({-1, 0}, {0, 1})
    # mirrored placements perform identically
    by_labels = {r["coolant_labels"]: r["n0"] for r in records}
    for labels, n0 in by_labels.items():
        mirror = tuple(sorted(-l for l in labels))
        assert abs(by_labels[mirror] - n0) / n0 < 1e-9
    n0s = [r["n0"] for r in records]
    assert n0s == sorted(n0s)


def test_placement_guard():
    with pytest.raises(ic.GuardError):
        ic.enumerate_placements(60, 12, GAMMA_640)


def test_placement_threads_match_serial(heating_model):
    serial = ic.enumerate_placements(7, 2, GAMMA_640,
                                     heating_model=heating_model, threads=1)
    threaded = ic.enumerate_placements(7, 2, GAMMA_640,
                                       heating_model=heating_model, threads=4)
    assert [r["coolant_labels"] for r in serial] == \
        [r["coolant_labels"] for r in threaded]
    assert [r["n0"] for r in serial] == [r["n0"] for r in threaded]


def test_duty_sweep_matches_standalone_points(heating_model, kappa):
    taus = (300e-6, 500e-6, 700e-6)
    spec = SweepSpec(study="duty-scan", cooling_times=taus,
                     gates_per_cycle=(1,), kappa=kappa, heating=heating_model)
    result = ic.sweep_duty_cycle(spec)
    assert len(result.records) == 3
    for tau, rec in zip(taus, result.records):
        alone = duty_point_metrics(tau, GAMMA_640, kappa, heating_model)
        for key in ("mean_fidelity", "total_fidelity", "n0"):
            assert rec[key] == pytest.approx(alone[key], rel=1e-12)
    assert result.argmax["total_fidelity"] == max(r["total_fidelity"]
                                                  for r in result.records)


def test_duty_sweep_deterministic(heating_model, kappa):
    spec = SweepSpec(study="duty-scan", cooling_times=(400e-6, 600e-6),
                     gates_per_cycle=(1, 2), kappa=kappa, heating=heating_model)
    a = ic.sweep_duty_cycle(spec)
    b = ic.sweep_duty_cycle(spec)
    assert a.records == b.records
    assert a.argmax == b.argmax
    assert a.provenance == b.provenance


def test_duty_sweep_threads_match_serial(heating_model, kappa):
    spec = SweepSpec(study="duty-scan", cooling_times=(400e-6, 600e-6, 800e-6),
                     gates_per_cycle=(1,), kappa=kappa, heating=heating_model)
    a = ic.sweep_duty_cycle(spec, threads=1)
    b = ic.sweep_duty_cycle(spec, threads=3)
    assert a.records == b.records


def test_radial_sweep_lowers_optimum(heating_model, kappa):
    taus = tuple(np.arange(200e-6, 1200e-6, 25e-6))
    base = SweepSpec(study="duty-scan", cooling_times=taus, kappa=kappa,
                     heating=heating_model)
    plain = ic.sweep_duty_cycle(base)
    radial = ic.sweep_duty_cycle_with_radial(base, overhead_factor=1.0)
    assert radial.argmax["cooling_time_s"] < plain.argmax["cooling_time_s"]
    assert radial.argmax["total_fidelity"] < plain.argmax["total_fidelity"]
    rec = radial.records[0]
    assert rec["radial_overhead_s"] == pytest.approx(rec["cooling_time_s"])


def test_coolant_sweep_records(heating_model, kappa):
    spec = SweepSpec(study="coolant-scan", cooling_times=(500e-6,),
                     coolant_counts=(0, 2, 4), kappa=kappa,
                     heating=heating_model, recalibrate=False)
    result = ic.sweep_coolant_count(spec)
    assert [r["n_coolants"] for r in result.records] == [0, 2, 4]
    assert result.argmax["mean_fidelity"] == max(r["mean_fidelity"]
                                                 for r in result.records)
    # zero coolants is the no-cooling baseline and scores worst
    baseline = result.records[0]
    assert baseline["c_per_s"] == 0.0
    assert all(baseline["mean_fidelity"] < r["mean_fidelity"]
               for r in result.records[1:])
    with pytest.raises(ValueError):
        ic.sweep_coolant_count(SweepSpec(study="x", cooling_times=(1e-4,),
                                         coolant_counts=(-1,), kappa=kappa,
                                         heating=heating_model))


def test_frequency_fill_sweep(heating_model, kappa):
    freqs = tuple(2 * np.pi * f for f in (200e3, 300e3))
    spec = SweepSpec(study="freq-fill", com_frequencies_si=freqs,
                     fill_counts=(3, 7, 9), kappa=kappa, heating=heating_model)
    result = ic.sweep_frequency_fill(spec, n_ions=9)
    assert len(result.records) == 6
    # realized frequencies track the targets through the trap rescaling
    for rec in result.records:
        assert rec["omega0_si"] == pytest.approx(rec["omega0_target_si"],
                                                 rel=1e-6)
    # limit falls with frequency at fixed fill, and with fill at fixed freq
    by_fill = {}
    for rec in result.records:
        by_fill.setdefault(rec["fill_count"], []).append(rec["n0"])
    for fill, n0s in by_fill.items():
        assert n0s[0] > n0s[1]
    by_freq = {}
    for rec in result.records:
        by_freq.setdefault(rec["omega0_target_si"], []).append(rec["n0"])
    for freq, n0s in by_freq.items():
        assert n0s[0] > n0s[1] > n0s[2]


def test_reference_calibrations_round_trip(heating_model, kappa):
    chain = ic.study_chain(2, n_qubits=11, recalibrate=False)
    rep = ic.cooling_limit(chain, heating_model, GAMMA_640)
    assert rep.n0 == pytest.approx(29.0, rel=1e-9)
    tau_star, _ = ic.optimal_cooling_time(GAMMA_640, kappa, heating_model)
    assert tau_star == pytest.approx(487e-6, abs=2e-6)


def test_mean_fidelity_calibration_infeasible_at_published_level(heating_model):
    """The published mean gate fidelity cannot be reached: with the
    specified wall-time dephasing attribution, kappa = 0 already caps the
    reference schedule below the target."""
    with pytest.raises(ic.CalibrationError):
        ic.calibrate_kappa_to_mean_fidelity(target=0.9993,
                                            cooling_time=750e-6,
                                            heating_model=heating_model)


def test_mean_fidelity_calibration_reachable_target(heating_model):
    kappa = ic.calibrate_kappa_to_mean_fidelity(target=0.996,
                                                cooling_time=750e-6,
                                                heating_model=heating_model)
    got = duty_point_metrics(750e-6, GAMMA_640, kappa,
                             heating_model)["mean_fidelity"]
    assert got == pytest.approx(0.996, abs=1e-6)


def test_spec_hash_stable():
    a = spec_hash({"x": 1.0, "y": [1, 2]})
    b = spec_hash({"y": [1, 2], "x": 1.0})
    assert a == b and len(a) == 12
