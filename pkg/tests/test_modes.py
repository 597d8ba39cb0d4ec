import numpy as np
import pytest

import ioncool as ic
from conftest import quadratic_chain


def test_single_ion_frequency_from_curvature():
    # scalar oracle: d2V/du2 = 2 X2, so omega = sqrt(2 X2)
    x2 = 0.0123
    spec = ic.normal_modes(ic.hessian(ic.TrapPotential(x2=x2), np.zeros(1)))
    assert spec.frequencies[0] == pytest.approx(np.sqrt(2 * x2), rel=1e-14)


def test_quadratic_chain_com_mode_uniform():
    for n in (4, 9):
        pot, u = quadratic_chain(n)
        spec = ic.spectrum_for(pot, u)
        i = ic.com_mode_index(spec)
        assert i == 0
        assert np.max(np.abs(spec.mode(i) - n ** -0.5)) < 1e-10
        assert spec.frequencies[0] == pytest.approx(np.sqrt(2 * pot.x2), rel=1e-10)


def test_quartic_chain_center_participation_larger(spectrum15):
    v0 = spectrum15.mode(ic.com_mode_index(spectrum15))
    center = abs(v0[7])
    edges = np.abs(v0[[0, 14]])
    assert np.all(center > edges)
    # monotone growth toward the center on each side
    assert np.all(np.diff(np.abs(v0[:8])) > 0)


def test_spectrum_invariants(spectrum15, k15):
    m = spectrum15.mode_matrix
    assert np.max(np.abs(m.T @ m - np.eye(15))) < 1e-10
    for i in range(15):
        resid = k15 @ m[:, i] + spectrum15.frequencies[i] ** 2 * m[:, i]
        assert np.max(np.abs(resid)) < 1e-8
        assert ic.participation_sum(spectrum15, i, range(15)) == pytest.approx(1.0, abs=1e-12)
    assert np.all(np.diff(spectrum15.frequencies) >= 0)
    assert np.all(m.sum(axis=0) >= -1e-12)


def test_mode_reflection_symmetry(spectrum15):
    for i in range(15):
        v = spectrum15.mode(i)
        overlap = abs(float(v @ v[::-1]))
        assert abs(overlap - 1.0) < 1e-8


def test_com_selection_is_frequency_based(spectrum15):
    # permuting the stored order must not change which mode is selected
    perm = np.array([3, 0, 1, 2] + list(range(4, 15)))
    shuffled = ic.ModeSpectrum(frequencies=spectrum15.frequencies[perm],
                               mode_matrix=spectrum15.mode_matrix[:, perm])
    j = ic.com_mode_index(shuffled)
    assert shuffled.frequencies[j] == spectrum15.frequencies[0]


def test_com_sign_check():
    freqs = np.array([1.0, 2.0])
    vecs = np.array([[0.8, 0.6], [-0.6, 0.8]])
    with pytest.raises(ic.DegenerateModeError):
        ic.com_mode_index(ic.ModeSpectrum(frequencies=freqs, mode_matrix=vecs))


def test_participation_validation(spectrum15):
    with pytest.raises(ValueError):
        ic.participation_sum(spectrum15, 99, [0])
    with pytest.raises(ValueError):
        ic.participation_sum(spectrum15, 0, [0, 0])
    with pytest.raises(ValueError):
        ic.participation_sum(spectrum15, 0, [15])


def test_quadratic_participation_fraction():
    pot, u = quadratic_chain(10)
    spec = ic.spectrum_for(pot, u)
    s = ic.participation_sum(spec, 0, range(3))
    assert s == pytest.approx(3 / 10, abs=1e-12)


def test_center_pair_beats_edge_pair(spectrum15):
    com = ic.com_mode_index(spectrum15)
    center = ic.participation_sum(spectrum15, com, [6, 7])
    edge = ic.participation_sum(spectrum15, com, [0, 14])
    assert center > edge


def test_unstable_hessian_rejected():
    with pytest.raises(ic.InstabilityError):
        ic.normal_modes(np.diag([-1.0, 1.0]))


def test_nonsymmetric_hessian_rejected():
    with pytest.raises(ValueError):
        ic.normal_modes(np.array([[1.0, 0.5], [0.0, 1.0]]))


def test_com_frequency_falls_with_length_at_fixed_pitch():
    """Chains re-equispaced at the reference pitch soften as they grow, so
    the COM frequency decreases with ion number.  (At literally fixed trap
    coefficients the quartic walls stiffen instead and the COM frequency
    rises; the fixed-pitch family is the physically operated one.)"""
    freqs = []
    for n in (15, 18, 21):
        pot = ic.study_potential(n)
        u = ic.solve_equilibrium(pot, n)
        spec = ic.spectrum_for(pot, u)
        freqs.append(spec.frequencies[ic.com_mode_index(spec)])
    assert freqs[0] > freqs[1] > freqs[2]
