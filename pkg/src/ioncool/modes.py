"""Undamped normal modes of a chain and mode participation sums."""

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateModeError, InstabilityError
from .potential import hessian


@dataclass(frozen=True)
class ModeSpectrum:
    """Normal mode frequencies and participation factors.

    frequencies are ascending, dimensionless angular frequencies.
    mode_matrix has one orthonormal column per mode; entry [k, i] is the
    participation factor of ion k in mode i.  Column signs are fixed so the
    entries of each mode sum to a non-negative value.
    """

    frequencies: np.ndarray
    mode_matrix: np.ndarray

    @property
    def n_ions(self):
        return self.mode_matrix.shape[0]

    def mode(self, i):
        return self.mode_matrix[:, i]


def dynamical_matrix(hess):
    """The matrix K in x'' = K x, i.e. minus the Hessian."""
    return -np.asarray(hess, dtype=float)


def normal_modes(hess):
    """Diagonalize a chain Hessian into a ModeSpectrum.

    Raises
    ------
    InstabilityError
        If the Hessian is not positive definite (unconfined chain).
    """
    hess = np.asarray(hess, dtype=float)
    if hess.ndim != 2 or hess.shape[0] != hess.shape[1]:
        raise ValueError("hessian must be square")
    if not np.allclose(hess, hess.T, atol=1e-12):
        raise ValueError("hessian must be symmetric")
    w2, vecs = np.linalg.eigh(hess)
    if w2[0] <= 0:
        raise InstabilityError(
            f"chain is not confined: lowest Hessian eigenvalue {w2[0]:.3e}")
    signs = np.where(vecs.sum(axis=0) >= 0, 1.0, -1.0)
    return ModeSpectrum(frequencies=np.sqrt(w2), mode_matrix=vecs * signs)


def spectrum_for(pot, positions):
    """Convenience wrapper: modes of a solved chain."""
    return normal_modes(hessian(pot, positions))


def com_mode_index(spectrum, sign_tol=1e-8):
    """Index of the center-of-mass-like mode (lowest frequency).

    Verifies that all ions move in phase in that mode; a sign disagreement
    means the lowest mode is not COM-like and selection is ambiguous.
    """
    i = int(np.argmin(spectrum.frequencies))
    v = spectrum.mode(i)
    if np.min(v) < -sign_tol * np.max(np.abs(v)):
        raise DegenerateModeError(
            "lowest mode has mixed-sign participation; no clean COM mode")
    return i


def participation_sum(spectrum, mode_index, ion_indices):
    """Sum of squared participation factors of `ion_indices` in one mode."""
    n = spectrum.n_ions
    if not 0 <= mode_index < n:
        raise ValueError(f"mode index {mode_index} out of range")
    idx = list(ion_indices)
    if len(idx) != len(set(idx)):
        raise ValueError("ion set contains duplicates")
    for k in idx:
        if not 0 <= k < n:
            raise ValueError(f"ion index {k} out of range")
    v = spectrum.mode(mode_index)
    return float(np.sum(v[idx] ** 2))
