"""Damped chain modes: exact companion-matrix solution and perturbation theory.

The damped equation of motion is x'' = K x - gamma P x', where K is the
dynamical matrix (minus the Hessian) and P projects onto the coolant ions.
The exact solution linearizes to the 2N x 2N first-order system

    d/dt [x, x'] = [[0, I], [K, -gamma P]] [x, x'],

whose eigenvalues z have Re z <= 0 for gamma >= 0; |Re z| of a mode is its
cooling rate.  The perturbative route approximates the same rates from the
undamped spectrum and the coolant participation sum.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateModeError
from .modes import participation_sum

DEGENERACY_GAP = 1e-8


@dataclass(frozen=True)
class DampingConfig:
    """Per-ion damping rate and the set of cooled ions."""

    gamma: float
    coolant_indices: frozenset

    def __post_init__(self):
        if self.gamma < 0:
            raise ValueError("gamma must be non-negative")
        object.__setattr__(self, "coolant_indices",
                           frozenset(self.coolant_indices))


@dataclass(frozen=True)
class DampedSpectrum:
    """Damped eigenvalues matched one-to-one to the undamped modes.

    eigenvalues[i] is the damped eigenvalue (Im z >= 0 representative of its
    conjugate pair) matched to undamped mode i by eigenvector overlap;
    damped_modes[:, i] is its position-space eigenvector, normalized and
    phased so the overlap with the undamped mode is real positive.
    all_eigenvalues holds the full 2N companion spectrum.
    """

    eigenvalues: np.ndarray
    damped_modes: np.ndarray
    all_eigenvalues: np.ndarray

    def cooling_rate(self, i):
        return float(-self.eigenvalues[i].real)


def companion_matrix(k_matrix, damping):
    """The 2N x 2N first-order system matrix [[0, I], [K, -gamma P]]."""
    k = np.asarray(k_matrix, dtype=float)
    n = k.shape[0]
    p = np.zeros((n, n))
    for i in damping.coolant_indices:
        if not 0 <= i < n:
            raise ValueError(f"coolant index {i} out of range")
        p[i, i] = 1.0
    top = np.hstack([np.zeros((n, n)), np.eye(n)])
    bottom = np.hstack([k, -damping.gamma * p])
    return np.vstack([top, bottom])


def exact_damped_modes(k_matrix, damping, undamped=None):
    """Solve the damped system exactly and match modes to the undamped ones.

    Parameters
    ----------
    k_matrix : ndarray
        Dynamical matrix K = -Hessian.
    damping : DampingConfig
    undamped : ModeSpectrum, optional
        Matching reference; computed from -K if omitted.

    Each undamped mode, in ascending frequency order, is matched to the
    unused damped eigenvector of maximal position-space overlap, with ties
    broken by frequency proximity.
    """
    from .modes import normal_modes  # local to avoid cycle at import time

    k = np.asarray(k_matrix, dtype=float)
    n = k.shape[0]
    if undamped is None:
        undamped = normal_modes(-k)
    m = companion_matrix(k, damping)
    z, w = np.linalg.eig(m)

    pos = w[:n, :]
    norms = np.linalg.norm(pos, axis=0)
    norms[norms == 0] = 1.0
    pos = pos / norms

    matched_z = np.empty(n, dtype=complex)
    matched_w = np.empty((n, n), dtype=complex)
    used = set()
    for i in range(n):
        v = undamped.mode(i)
        overlaps = np.abs(v @ pos)
        # prefer the Im >= 0 member of each conjugate pair; for overdamped
        # (real) pairs take the slow-decay root, which continues the
        # underdamped +i omega branch across critical damping
        order = sorted(
            (j for j in range(2 * n) if j not in used and z[j].imag >= 0),
            key=lambda j: (-overlaps[j],
                           abs(z[j].imag - undamped.frequencies[i]),
                           -z[j].real),
        )
        if not order:
            order = sorted((j for j in range(2 * n) if j not in used),
                           key=lambda j: -overlaps[j])
        j = order[0]
        used.add(j)
        phase = v @ pos[:, j]
        rot = np.conj(phase) / abs(phase) if phase != 0 else 1.0
        matched_z[i] = z[j]
        matched_w[:, i] = pos[:, j] * rot
    return DampedSpectrum(eigenvalues=matched_z, damped_modes=matched_w,
                          all_eigenvalues=z)


def perturbative_rate(spectrum, damping, mode_index):
    """Cooling rate of one mode from first-order eigenvalue perturbation.

    The first-order damped eigenvalue is
    z^2 = -w^2 + i gamma w S with S the coolant participation sum, whose
    real part gives

        rate = (w / sqrt(2)) * sqrt(sqrt(1 + g^2 S^2) - 1),   g = gamma / w.

    Evaluated in the cancellation-free form
    sqrt(1 + x) - 1 = x / (sqrt(1 + x) + 1) so tiny gamma stays accurate.
    """
    w = float(spectrum.frequencies[mode_index])
    s = participation_sum(spectrum, mode_index, damping.coolant_indices)
    g = damping.gamma / w
    x = (g * s) ** 2
    return float(w / np.sqrt(2.0) * np.sqrt(x / (np.sqrt(1.0 + x) + 1.0)))


def linearized_rate(spectrum, damping, mode_index):
    """First-order-in-gamma cooling rate, (gamma/2) * participation sum."""
    s = participation_sum(spectrum, mode_index, damping.coolant_indices)
    return 0.5 * damping.gamma * s


def first_order_mode_correction(spectrum, damping, mode_index):
    """First-order damped-eigenvector correction for one mode.

    Returns the order-gamma correction term (gamma included),

        dw_i = gamma * sum_{k != i} [ i w_i / (w_i^2 - w_k^2) ]
                                    (v_k . P v_i) v_k,

    which is orthogonal to v_i and vanishes when every ion is a coolant
    (P = identity is diagonal in the mode basis).

    Raises
    ------
    DegenerateModeError
        If another mode sits within DEGENERACY_GAP of this one in frequency.
    """
    freqs = spectrum.frequencies
    n = spectrum.n_ions
    if not 0 <= mode_index < n:
        raise ValueError("mode index out of range")
    w_i = freqs[mode_index]
    gaps = np.abs(np.delete(freqs, mode_index) - w_i)
    if gaps.size and np.min(gaps) < DEGENERACY_GAP:
        raise DegenerateModeError(
            f"mode {mode_index} is degenerate within {DEGENERACY_GAP:.0e}")
    v_i = spectrum.mode(mode_index)
    cool = sorted(damping.coolant_indices)
    out = np.zeros(n, dtype=complex)
    for k in range(n):
        if k == mode_index:
            continue
        v_k = spectrum.mode(k)
        coupling = float(np.sum(v_k[cool] * v_i[cool]))  # v_k . P v_i
        out = out + (1j * w_i / (w_i**2 - freqs[k] ** 2)) * coupling * v_k
    return damping.gamma * out


def perturbation_error_scan(k_matrix, coolant_indices, gammas, undamped=None):
    """Relative error of the perturbative COM rate against the exact one.

    Returns a list of (gamma, relative_error) pairs over the given grid.
    """
    from .modes import normal_modes, com_mode_index

    k = np.asarray(k_matrix, dtype=float)
    if undamped is None:
        undamped = normal_modes(-k)
    com = com_mode_index(undamped)
    rows = []
    for gamma in gammas:
        cfg = DampingConfig(gamma=float(gamma), coolant_indices=coolant_indices)
        if gamma == 0:
            rows.append((0.0, 0.0))
            continue
        exact = exact_damped_modes(k, cfg, undamped=undamped).cooling_rate(com)
        approx = perturbative_rate(undamped, cfg, com)
        rows.append((float(gamma), abs(approx - exact) / exact))
    return rows
