"""Effective couplings of three trapped ions after eliminating the phonons.

Ions are labelled 1, 2 (driven along x) and 3 (driven along z).  With the
per-mode spin-phonon couplings ``J_{1,n} = eta_{1,n} Omega_x``,
``J_{2,n} = eta_{2,n} Omega_x``, ``J_{3,n} = eta_{3,n} Omega_z`` and the
trilinear strength ``h_n = eta_{3,n} Omega_alpha``::

    J1 = sum_n J_{1,n} J_{2,n} / (nu^2 - Omega_n^2)
    J2 = sum_n J_{2,n} J_{3,n} / (nu^2 - Omega_n^2)
    J3 = sum_n J_{1,n} J_{3,n} / (nu^2 - Omega_n^2)
    J  = sum_n J_{1,n} J_{2,n} h_n / (nu^2 - Omega_n^2)

These are evaluated as written; interpreting the result as rad/ms is a
convention, since the expressions are not dimensionally a frequency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .hamiltonians import CirculantParams

HBAR = 1.054571817e-34  # J s
LAMB_DICKE_ADVISORY = 0.3
DETUNING_MARGIN = 10.0

UNIT_NOTE = (
    "coupling sums are evaluated as printed and read as rad/ms by convention; "
    "they are not dimensionally a frequency"
)


class ResonanceError(ValueError):
    def __init__(self, mode: int, nu: float):
        super().__init__(f"beat note nu = {nu} is resonant with mode {mode}")
        self.mode = mode


def lamb_dicke(b: float, k: float, M: float, omega_n: float) -> float:
    """``eta = b k sqrt(hbar / (2 M Omega_n))`` in SI units (k in 1/m, M in kg, Omega_n in rad/s)."""
    if not M > 0:
        raise ValueError("mass must be positive")
    if not omega_n > 0:
        raise ValueError("mode frequency must be positive")
    return b * k * math.sqrt(HBAR / (2.0 * M * omega_n))


def _denominators(nu: float, omegas) -> np.ndarray:
    omegas = np.asarray(omegas, dtype=float)
    den = nu**2 - omegas**2
    hit = np.flatnonzero(den == 0.0)
    if hit.size:
        raise ResonanceError(int(hit[0]), nu)
    return den


def _same_length(*lists) -> list[np.ndarray]:
    arrs = [np.asarray(x, dtype=float).ravel() for x in lists]
    if len({a.size for a in arrs}) > 1:
        raise ValueError("per-mode lists must have equal length")
    return arrs


def pairwise_coupling(J_j, J_p, nu: float, omegas) -> float:
    J_j, J_p, omegas = _same_length(J_j, J_p, omegas)
    if not J_j.size:
        return 0.0
    return float(np.sum(J_j * J_p / _denominators(nu, omegas)))


def trilinear_coupling(J_j, J_p, h, nu: float, omegas) -> float:
    J_j, J_p, h, omegas = _same_length(J_j, J_p, h, omegas)
    if not J_j.size:
        return 0.0
    return float(np.sum(J_j * J_p * h / _denominators(nu, omegas)))


@dataclass(frozen=True)
class ModeSet:
    """Radial modes: ``omegas[n]`` in rad/ms, ``eta[j, n]`` for ions j = 0, 1, 2.

    ``b`` keeps the normal-mode coefficients the eta values came from, if known.
    """

    omegas: np.ndarray
    eta: np.ndarray
    b: np.ndarray | None = None

    def __post_init__(self):
        om = np.asarray(self.omegas, dtype=float).ravel()
        eta = np.asarray(self.eta, dtype=float).reshape(3, om.size)
        if np.any(om <= 0):
            raise ValueError("mode frequencies must be positive")
        object.__setattr__(self, "omegas", om)
        object.__setattr__(self, "eta", eta)

    @classmethod
    def empty(cls) -> "ModeSet":
        return cls(np.zeros(0), np.zeros((3, 0)))


@dataclass(frozen=True)
class DriveParams:
    nu: float
    omega_x: float
    omega_z: float
    omega_alpha: float

    def scaled(self, c: float) -> "DriveParams":
        return DriveParams(self.nu, c * self.omega_x, c * self.omega_z, c * self.omega_alpha)


@dataclass(frozen=True)
class IonCouplings:
    J1: float
    J2: float
    J3: float
    J: float


def spin_phonon(modes: ModeSet, drive: DriveParams):
    """Per-mode ``(J_1n, J_2n, J_3n, h_n)``."""
    return (
        modes.eta[0] * drive.omega_x,
        modes.eta[1] * drive.omega_x,
        modes.eta[2] * drive.omega_z,
        modes.eta[2] * drive.omega_alpha,
    )


def effective_couplings(modes: ModeSet, drive: DriveParams) -> IonCouplings:
    j1n, j2n, j3n, h = spin_phonon(modes, drive)
    nu, om = drive.nu, modes.omegas
    return IonCouplings(
        pairwise_coupling(j1n, j2n, nu, om),
        pairwise_coupling(j2n, j3n, nu, om),
        pairwise_coupling(j1n, j3n, nu, om),
        trilinear_coupling(j1n, j2n, h, nu, om),
    )


def circulant_residual(c: IonCouplings) -> float:
    """Relative spread of (J2, J3, J); zero when the circulant constraint J2 = J3 = J holds."""
    trio = np.array([c.J2, c.J3, c.J])
    top = np.max(np.abs(trio))
    if top == 0.0:
        return 0.0
    return float((trio.max() - trio.min()) / top)


def advisories(modes: ModeSet, drive: DriveParams) -> list[str]:
    notes = [UNIT_NOTE]
    if modes.eta.size and np.max(np.abs(modes.eta)) > LAMB_DICKE_ADVISORY:
        notes.append(f"max |eta| = {np.max(np.abs(modes.eta)):.3g} exceeds {LAMB_DICKE_ADVISORY}; "
                     "outside the Lamb-Dicke regime")
    j1n, j2n, j3n, h = spin_phonon(modes, drive)
    for n, om in enumerate(modes.omegas):
        strongest = max(abs(j1n[n]), abs(j2n[n]), abs(j3n[n]), abs(h[n]))
        if abs(om - drive.nu) < DETUNING_MARGIN * strongest:
            notes.append(f"mode {n}: |Omega_n - nu| = {abs(om - drive.nu):.3g} is not large "
                         f"against couplings ~ {strongest:.3g}")
    return notes


@dataclass(frozen=True)
class CirculantPoint:
    params: CirculantParams
    couplings: IonCouplings
    residual: float
    scale: float
    drive: DriveParams
    advisories: tuple[str, ...]


def circulant_point_search(modes: ModeSet, drive: DriveParams, decades: float = 6.0) -> CirculantPoint:
    """Best common rescaling of the three laser amplitudes towards J2 = J3 = J.

    Pairwise terms grow as the square of the scale and the trilinear one as
    its cube, so the scale can bring J onto J2 and J3 but cannot fix a
    mismatch between J2 and J3 themselves.  A log-spaced scan over
    ``10**(+-decades)`` locates the basin, then golden-section search refines.
    """
    def resid(logc: float) -> float:
        return circulant_residual(effective_couplings(modes, drive.scaled(10.0**logc)))

    grid = np.linspace(-decades, decades, 241)
    vals = np.array([resid(x) for x in grid])
    i = int(np.argmin(vals))
    best = float(grid[i])
    if 0 < i < grid.size - 1 and vals[i] < min(vals[i - 1], vals[i + 1]):
        res = minimize_scalar(resid, bracket=(grid[i - 1], grid[i], grid[i + 1]), method="golden",
                              options={"xtol": 1e-12})
        if res.fun <= vals[i]:
            best = float(res.x)
    scale = 10.0**best
    tuned = drive.scaled(scale)
    c = effective_couplings(modes, tuned)
    notes = advisories(modes, tuned)
    if min(c.J1, c.J2, c.J3, c.J) < 0:
        notes.append("some couplings are negative; circulant parameters use magnitudes")
    params = CirculantParams(1, J=abs(c.J), J1=abs(c.J1), phi=0.0)
    return CirculantPoint(params, c, circulant_residual(c), scale, tuned, tuple(notes))
