import math

import pytest

import ioncool as ic


def test_zero_model_zero_rate():
    model = ic.HeatingModel(alpha=0.8, a0=0.0, b0=0.0, d=1.0)
    for w in (1e4, 1e6, 1e8):
        assert ic.heating_rate(model, w) == 0.0


def test_hand_evaluation_at_reference_parameters():
    model = ic.HeatingModel(alpha=0.8, a0=8.2e17, b0=0.9, d=1.0)
    w = 2 * math.pi * 1e5
    expected = w * (8.2e17 * w ** (-2.8) + 0.9)
    assert ic.heating_rate(model, w) == pytest.approx(expected, rel=1e-14)
    # noise term dominates the flat term at the 100 kHz scale
    assert 8.2e17 * w ** (-2.8) > 10 * 0.9


def test_monotone_decreasing_below_crossover():
    model = ic.HeatingModel()
    wc = ic.crossover_frequency(model)
    ws = [wc * f for f in (0.05, 0.1, 0.3, 0.6, 0.9)]
    hs = [ic.heating_rate(model, w) for w in ws]
    assert all(a > b for a, b in zip(hs, hs[1:]))
    above = [ic.heating_rate(model, w) for w in (1.1 * wc, 2 * wc, 5 * wc)]
    assert all(a < b for a, b in zip(above, above[1:]))


def test_linear_in_d():
    base = ic.HeatingModel()
    w = 2e6
    assert ic.heating_rate(ic.with_d(base, 3.0), w) == pytest.approx(
        3.0 * ic.heating_rate(base, w), rel=1e-14)


def test_calibrate_d_round_trip():
    base = ic.HeatingModel()
    omega0, c = 2.5e6, 40.0
    d = ic.calibrate_d(base, omega0, c, observed_n0=29.0)
    model = ic.with_d(base, d)
    assert ic.heating_rate(model, omega0) / c == pytest.approx(29.0, rel=1e-12)
    d2 = ic.calibrate_d(base, omega0, c, observed_n0=58.0)
    assert d2 == pytest.approx(2 * d, rel=1e-14)


def test_domain_errors():
    model = ic.HeatingModel()
    with pytest.raises(ValueError):
        ic.heating_rate(model, 0.0)
    with pytest.raises(ValueError):
        ic.heating_rate(model, -1e5)
    with pytest.raises(ValueError):
        ic.calibrate_d(model, 1e6, 10.0, observed_n0=0.0)
    with pytest.raises(ValueError):
        ic.calibrate_d(model, 1e6, 0.0, observed_n0=29.0)
    with pytest.raises(ValueError):
        ic.HeatingModel(alpha=-0.5)
    with pytest.raises(ValueError):
        ic.HeatingModel(d=0.0)
