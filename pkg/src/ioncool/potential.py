"""Axial trap potential, equilibrium positions, and equispacing calibration.

The dimensionless axial potential of a chain at positions u is

    V(u) = sum_i (X2 u_i^2 + X4 u_i^4) + 1/2 sum_{i != j} 1 / |u_i - u_j|.

X2 may be negative (a shallow double well flattens the middle of long
chains), but X4 must then be positive so the chain stays confined.
"""

from dataclasses import dataclass

import numpy as np
from scipy import optimize as opt

from .errors import ConvergenceError
from .units import normalization_for_amu, DEFAULT_MASS_AMU

EQUILIBRIUM_TOL = 1e-10


@dataclass(frozen=True)
class TrapPotential:
    """Quadratic + quartic axial trap coefficients (dimensionless)."""

    x2: float
    x4: float = 0.0

    def __post_init__(self):
        if self.x4 < 0:
            raise ValueError("x4 must be non-negative")
        if self.x4 == 0 and self.x2 <= 0:
            raise ValueError("need x2 > 0 or x4 > 0 for a confining trap")


#: the equispaced 15-ion reference trap
REFERENCE_POTENTIAL = TrapPotential(x2=0.00188, x4=0.00177)


@dataclass(frozen=True)
class IonChain:
    """A solved chain with role assignments.

    positions are sorted normalized coordinates; coolant, qubit and endcap
    index sets are disjoint and cover all ions.
    """

    potential: TrapPotential
    positions: np.ndarray
    coolant_indices: frozenset
    qubit_indices: frozenset
    endcap_indices: frozenset
    mass_amu: float = DEFAULT_MASS_AMU

    @property
    def n_ions(self):
        return len(self.positions)

    def __post_init__(self):
        n = len(self.positions)
        if np.any(np.diff(self.positions) <= 0):
            raise ValueError("positions must be strictly increasing")
        sets = (self.coolant_indices, self.qubit_indices, self.endcap_indices)
        all_idx = sorted(i for s in sets for i in s)
        if all_idx != list(range(n)):
            raise ValueError("coolant/qubit/endcap sets must partition the chain")
        g = gradient(self.potential, self.positions)
        if np.max(np.abs(g)) >= 1e-8:
            raise ValueError("positions are not an equilibrium of the potential")


def ion_labels(n):
    """Center-offset integer labels for an n-ion chain.

    Odd n: -(n-1)/2 .. (n-1)/2 with 0 at the center.  Even n: -n/2 .. -1 and
    1 .. n/2 with no 0.
    """
    if n % 2 == 1:
        return list(range(-(n // 2), n // 2 + 1))
    return [k for k in range(-(n // 2), n // 2 + 1) if k != 0]


def label_to_index(n, label):
    """Map a center-offset label to a 0-based position index."""
    if label == 0 and n % 2 == 0:
        raise ValueError("even chains have no label 0")
    half = n // 2
    if abs(label) > half or (n % 2 == 1 and abs(label) > half):
        raise ValueError(f"label {label} out of range for n={n}")
    if n % 2 == 1:
        return label + half
    return label + half if label < 0 else label + half - 1


def index_to_label(n, index):
    """Inverse of :func:`label_to_index`."""
    if not 0 <= index < n:
        raise ValueError(f"index {index} out of range for n={n}")
    half = n // 2
    if n % 2 == 1:
        return index - half
    return index - half if index < half else index - half + 1


def centered_labels(n, count):
    """The `count` labels closest to the chain center.

    Ties between +k and -k resolve toward the negative label, so two
    centered coolants in an odd chain get labels (-1, 0).
    """
    order = sorted(ion_labels(n), key=lambda l: (abs(l), l))
    if count > n:
        raise ValueError(f"cannot pick {count} of {n} ions")
    return order[:count]


def _pairwise_differences(u):
    du = u[:, None] - u[None, :]
    np.fill_diagonal(du, np.inf)
    return du


def _check_distinct(u):
    u = np.asarray(u, dtype=float)
    if u.ndim != 1 or u.size < 1:
        raise ValueError("positions must be a non-empty 1-D array")
    if u.size > 1:
        du = np.abs(u[:, None] - u[None, :])
        np.fill_diagonal(du, np.inf)
        if np.min(du) == 0.0:
            raise ValueError("coincident ion positions (Coulomb singularity)")
    return u


def potential_energy(pot, u):
    """Total dimensionless potential energy at positions u."""
    u = _check_distinct(u)
    trap = np.sum(pot.x2 * u**2 + pot.x4 * u**4)
    if u.size == 1:
        return float(trap)
    du = _pairwise_differences(u)
    return float(trap + 0.5 * np.sum(1.0 / np.abs(du)))


def gradient(pot, u):
    """Analytic gradient of the potential at positions u."""
    u = _check_distinct(u)
    g = 2.0 * pot.x2 * u + 4.0 * pot.x4 * u**3
    if u.size > 1:
        du = _pairwise_differences(u)
        g = g - np.sum(np.sign(du) / du**2, axis=1)
    return g


def hessian(pot, u):
    """Analytic Hessian of the potential at positions u (symmetric)."""
    u = _check_distinct(u)
    n = u.size
    diag_trap = 2.0 * pot.x2 + 12.0 * pot.x4 * u**2
    if n == 1:
        return np.array([[diag_trap[0]]])
    du = _pairwise_differences(u)
    off = -2.0 / np.abs(du) ** 3
    h = off.copy()
    np.fill_diagonal(h, 0.0)
    np.fill_diagonal(h, diag_trap - h.sum(axis=1))
    return h


def _extent_estimate(pot, n):
    # half-extent where the trap force on an edge ion balances the Coulomb
    # push of the rest of the chain, treated as a point charge at the center
    if n == 1:
        return 1.0

    def balance(r):
        return 2.0 * pot.x2 * r + 4.0 * pot.x4 * r**3 - n**2 / (4.0 * r**2)

    lo, hi = 1e-3, 1e3
    while balance(hi) < 0:
        hi *= 10.0
        if hi > 1e12:
            raise ConvergenceError("could not bracket the chain extent")
    return opt.brentq(balance, lo, hi)


def solve_equilibrium(pot, n_ions, initial_guess=None, tol=EQUILIBRIUM_TOL,
                      max_iter=200):
    """Solve for the sorted equilibrium positions of n ions.

    Damped Newton iteration on the gradient with backtracking, started from
    equally spaced points spanning an estimated chain extent.  The solution
    is symmetrized (the potential is even, so the minimizer satisfies
    u_i = -u_{n-1-i} exactly) and verified against `tol` on the gradient
    max-norm.

    Returns
    -------
    ndarray
        Strictly increasing equilibrium positions.

    Raises
    ------
    ConvergenceError
        If the residual does not reach `tol` within `max_iter` iterations.
    """
    if n_ions < 1:
        raise ValueError("n_ions must be >= 1")
    if n_ions == 1:
        return np.zeros(1)
    if initial_guess is not None:
        u = np.sort(np.asarray(initial_guess, dtype=float))
        if u.size != n_ions:
            raise ValueError("initial guess has wrong length")
    else:
        r = _extent_estimate(pot, n_ions)
        u = np.linspace(-r, r, n_ions)

    resid = np.inf
    for _ in range(max_iter):
        g = gradient(pot, u)
        resid = np.max(np.abs(g))
        if resid < 0.01 * tol:
            break
        h = hessian(pot, u)
        step = None
        lam = 0.0
        # Levenberg fallback keeps the step well-defined away from the minimum
        for _ in range(60):
            try:
                step = np.linalg.solve(h + lam * np.eye(n_ions), g)
                break
            except np.linalg.LinAlgError:
                lam = max(2.0 * lam, 1e-10)
        if step is None:
            raise ConvergenceError("singular Hessian in Newton step", residual=resid)
        scale = 1.0
        for _ in range(60):
            trial = u - scale * step
            if np.all(np.diff(trial) > 0):
                if np.max(np.abs(gradient(pot, trial))) < resid:
                    break
            scale *= 0.5
        else:
            raise ConvergenceError("line search stalled", residual=resid, best=u)
        u = u - scale * step

    u = 0.5 * (u - u[::-1])  # exact reflection antisymmetry
    resid = np.max(np.abs(gradient(pot, u)))
    if resid >= tol:
        raise ConvergenceError(
            f"equilibrium residual {resid:.3e} above tolerance {tol:.1e}",
            residual=resid, best=u)
    return u


def build_chain(pot, n_coolants, n_qubits=14, mass_amu=DEFAULT_MASS_AMU,
                coolant_labels=None):
    """Build a chain of n_coolants + n_qubits + 2 ions with roles assigned.

    The two outermost ions are endcaps (neither qubits nor coolants).
    Coolants default to the most central labels; pass `coolant_labels` to
    place them explicitly.
    """
    n = n_coolants + n_qubits + 2
    u = solve_equilibrium(pot, n)
    if coolant_labels is None:
        coolant_labels = centered_labels(n, n_coolants)
    coolants = frozenset(label_to_index(n, l) for l in coolant_labels)
    endcaps = frozenset({0, n - 1})
    if coolants & endcaps:
        raise ValueError("coolants may not sit on the endcap positions")
    qubits = frozenset(range(n)) - coolants - endcaps
    return IonChain(potential=pot, positions=u, coolant_indices=coolants,
                    qubit_indices=qubits, endcap_indices=endcaps,
                    mass_amu=mass_amu)


def inner_spacings(u):
    """Nearest-neighbor gaps excluding the two endcap gaps."""
    sp = np.diff(u)
    return sp[1:-1] if sp.size > 2 else sp


def calibrate_equispacing_normalized(n_ions, target_spacing, x0=None,
                                     mean_weight=10.0):
    """Find (x2, x4) that equispace the inner ions at a normalized pitch.

    Minimizes the variance of the inner nearest-neighbor gaps (the endcap
    gaps are free, which is what the endcap ions are for) plus a penalty
    keeping the inner mean gap at `target_spacing`.  x2 is free to go
    negative; x4 is kept positive.

    Returns
    -------
    (TrapPotential, dict)
        The calibrated trap and a report with the residual spacing spread.
    """
    if n_ions < 3:
        raise ValueError("equispacing needs at least 3 ions")
    if not target_spacing > 0:
        raise ValueError("target spacing must be positive")
    if x0 is None:
        ref = REFERENCE_POTENTIAL
        u = solve_equilibrium(ref, 15)
        s = target_spacing / np.mean(inner_spacings(u))
        x0 = (ref.x2 / s**3, ref.x4 / s**5)

    def cost(p):
        x2, x4 = p[0], np.exp(p[1])
        try:
            u = solve_equilibrium(TrapPotential(x2, x4), n_ions)
        except (ConvergenceError, ValueError):
            return 1e9
        sp = inner_spacings(u)
        mis = (np.mean(sp) - target_spacing) / target_spacing
        return float(np.var(sp) / target_spacing**2 + mean_weight * mis**2)

    p0 = np.array([x0[0], np.log(x0[1])])
    res = opt.minimize(cost, p0, method="Nelder-Mead",
                       options=dict(xatol=1e-10, fatol=1e-18,
                                    maxiter=4000, maxfev=4000))
    x2, x4 = float(res.x[0]), float(np.exp(res.x[1]))
    pot = TrapPotential(x2, x4)
    if not res.success and res.fun > 1e-2:
        raise ConvergenceError("equispacing search did not converge",
                               residual=res.fun, best=pot)
    u = solve_equilibrium(pot, n_ions)
    sp = inner_spacings(u)
    report = {
        "mean_spacing": float(np.mean(sp)),
        "spread": float(np.std(sp) / np.mean(sp)),
        "cost": float(res.fun),
        "n_evaluations": int(res.nfev),
    }
    return pot, report


def calibrate_equispacing(n_ions, target_spacing_m, mass_amu=DEFAULT_MASS_AMU):
    """Equispacing calibration with the pitch given in meters.

    The target is converted through the mass-dependent length unit; the
    report echoes the achieved mean spacing in meters.
    """
    norm = normalization_for_amu(mass_amu)
    pot, report = calibrate_equispacing_normalized(
        n_ions, target_spacing_m / norm.d0)
    report["mean_spacing_m"] = report["mean_spacing"] * norm.d0
    return pot, report
