"""Fourier modes, closed-form spectra, the mixing angle and numerical branch tracking."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import hamiltonians as ham
from .numerics import DIM, hermitian_eigensystem, max_norm

OMEGA = cmath.exp(1j * math.pi / 4)
_NORM = 1.0 / (2.0 * math.sqrt(2.0))
DEGENERACY_TOL = 1e-9


class FormulaDomainError(ArithmeticError):
    """A closed-form expression hit a singular point (a zero denominator)."""


def fourier_modes() -> np.ndarray:
    """Matrix whose column j is psi_j, with ``psi_j[k] = exp(i pi j k / 4) / (2 sqrt 2)``."""
    k = np.arange(DIM)
    return np.exp(1j * np.pi * np.outer(k, k) / 4) * _NORM


def circulant_eigenvalues(p: ham.CirculantParams) -> np.ndarray:
    """Eigenvalue belonging to each Fourier mode, in mode order (not sorted)."""
    row = ham.circulant_first_row(p)
    k = np.arange(DIM)
    vals = np.exp(1j * np.pi * np.outer(k, k) / 4) @ row
    if np.max(np.abs(vals.imag)) > 1e-12 * (1 + np.max(np.abs(row))):
        raise ArithmeticError("circulant spectrum is not real")
    return vals.real


def multiset_distance(a, b) -> float:
    """Largest difference between two value lists after sorting both."""
    a, b = np.sort(np.asarray(a, float)), np.sort(np.asarray(b, float))
    if a.shape != b.shape:
        raise ValueError("multisets differ in size")
    return float(np.max(np.abs(a - b))) if a.size else 0.0


# ---------------------------------------------------------------------------
# offset scheme at phi = pi/2

@dataclass(frozen=True)
class OffsetSpectrum:
    lambda_pm: tuple[float, float]
    delta_pm: tuple[float, float]
    mu_pm: tuple[float, float]
    gamma_pm: tuple[float, float]
    internals: dict = field(default_factory=dict, compare=False)
    mode: str = "corrected"

    def values(self) -> np.ndarray:
        return np.array([*self.lambda_pm, *self.delta_pm, *self.mu_pm, *self.gamma_pm])


def quartic_coefficients(J, J1, d1, d2, d3) -> tuple[float, float, float, float]:
    """A, B, C, D of ``y^4 + A y^3 + B y^2 + C y + D`` with ``y = lambda^2``."""
    A = -16 * J**2 - 4 * d1**2 - 4 * d2**2 - 4 * d3**2 - 8 * J1**2
    B = (
        32 * J**2 * d1**2 + 32 * J**2 * d2**2 + 48 * J**2 * d3**2 + 128 * J**2 * J1**2
        + 6 * d1**4 + 4 * d1**2 * d2**2 + 4 * d1**2 * d3**2 + 16 * d1**2 * J1**2
        + 6 * d2**4 + 4 * d2**2 * d3**2 + 24 * d2**2 * J1**2
        + 6 * d3**4 + 8 * d3**2 * J1**2 + 16 * J1**4
    )
    C = (
        -16 * J**2 * d1**4 - 32 * J**2 * d1**2 * d2**2 - 128 * J**2 * d1**2 * J1**2
        - 16 * J**2 * d2**4 - 128 * J**2 * d2**2 * J1**2 - 48 * J**2 * d3**4 - 256 * J**2 * J1**4
        - 4 * d1**6 + 4 * d1**4 * d2**2 + 4 * d1**4 * d3**2 - 8 * d1**4 * J1**2 + 4 * d1**2 * d2**4
        - 40 * d1**2 * d2**2 * d3**2 + 4 * d1**2 * d3**4 - 32 * d1**2 * d3**2 * J1**2
        - 4 * d2**6 + 4 * d2**4 * d3**2 - 24 * d2**4 * J1**2
        + 4 * d2**2 * d3**4 + 16 * d2**2 * d3**2 * J1**2 - 32 * d2**2 * J1**4
        - 4 * d3**6 + 8 * d3**4 * J1**2 - 32 * d3**2 * J1**4
    )
    D = (
        4 * d1**4 * d2**2 * d3**2 + 4 * d1**2 * d2**4 * d3**2 + 4 * d1**2 * d2**2 * d3**4
        - 4 * d1**6 * d2**2 - 4 * d1**6 * d3**2 + 6 * d1**4 * d2**4
        + 6 * d1**4 * d3**4 - 4 * d1**2 * d2**6 - 4 * d1**2 * d3**6 - 4 * d2**6 * d3**2
        + 6 * d2**4 * d3**4 - 4 * d2**2 * d3**6 + 16 * d2**4 * J1**4
        - 8 * d3**6 * J1**2 + 16 * d3**4 * J1**4 + 16 * J**2 * d3**6 + 8 * d2**6 * J1**2
        + 16 * d1**2 * d3**4 * J1**2 - 24 * d2**4 * d3**2 * J1**2
        + 24 * d2**2 * d3**4 * J1**2 - 32 * d2**2 * d3**2 * J1**4
        + 8 * d1**4 * d2**2 * J1**2 - 8 * d1**4 * d3**2 * J1**2 - 16 * d1**2 * d2**4 * J1**2
        - 128 * J**2 * d3**4 * J1**2 + 256 * J**2 * d3**2 * J1**4 + 16 * J**2 * d1**4 * d3**2
        - 32 * J**2 * d1**2 * d3**4 + 16 * J**2 * d2**4 * d3**2
        - 32 * J**2 * d2**2 * d3**4 + 32 * J**2 * d1**2 * d2**2 * d3**2
        + 128 * J**2 * d1**2 * d3**2 * J1**2 + 128 * J**2 * d2**2 * d3**2 * J1**2
        + d1**8 + d2**8 + d3**8
    )
    return float(A), float(B), float(C), float(D)


def _printed_roots(A, B, C, D):
    """The resolvent exactly as printed, absolute values included."""
    p = (8 * B - 3) / 8
    q = (-1 + 4 * B + 8 * C) / 8
    d0 = B**2 + 3 * C + 12 * D
    d1 = 2 * B**3 + 9 * B * C + 27 * D + 27 * C**2 - 72 * B * D
    Q = np.cbrt(0.5 * abs(d1 + math.sqrt(abs(d1**2 - 4 * d0**3))))
    if Q == 0.0:
        raise FormulaDomainError("Q = 0 in the printed resolvent")
    S = 0.5 * math.sqrt(abs(-2 * p + (Q + d0 / Q)) / 3)
    if S == 0.0:
        raise FormulaDomainError("S = 0 in the printed resolvent (degenerate point)")
    r1 = 0.5 * math.sqrt(abs(-4 * S**2 - 2 * p + q / S))
    r2 = 0.5 * math.sqrt(abs(-4 * S**2 - 2 * p - q / S))
    ys = (-A / 4 - S + r1, -A / 4 - S - r1, -A / 4 + S + r2, -A / 4 + S - r2)
    roots = tuple(math.sqrt(abs(y)) for y in ys)
    return roots, dict(p=p, q=q, S=S, Q=Q, Delta0=d0, Delta=d1)


def _corrected_roots(A, B, C, D, rel=1e-12):
    """Ferrari-Cardano with the monic leading coefficient carried through.

    The printed p, q, Delta0 and Delta drop the cubic coefficient A; restoring
    it gives the standard depressed-quartic quantities.  Complex arithmetic
    avoids the branch ambiguity of the absolute values.  When the principal
    cube root leads to S = 0 the other two roots of the resolvent are tried.
    """
    p = (8 * B - 3 * A**2) / 8
    q = (A**3 - 4 * A * B + 8 * C) / 8
    d0 = B**2 - 3 * A * C + 12 * D
    d1 = 2 * B**3 - 9 * A * B * C + 27 * C**2 + 27 * A**2 * D - 72 * B * D
    scale = max(abs(A), abs(B) ** 0.5, abs(C) ** (1 / 3), abs(D) ** 0.25, 1e-300)
    disc = cmath.sqrt(d1**2 - 4 * d0**3)
    base = 0.5 * (d1 + disc)
    if abs(base) <= rel * scale**3:
        base = 0.5 * (d1 - disc)
    if abs(base) <= rel * scale**3:
        raise FormulaDomainError("Q = 0: triple root of the resolvent")
    Q0 = base ** (1 / 3)
    for branch in range(3):
        Q = Q0 * cmath.exp(2j * math.pi * branch / 3)
        S = 0.5 * cmath.sqrt(-2 * p / 3 + (Q + d0 / Q) / 3)
        if abs(S) > math.sqrt(rel) * scale:
            break
    else:
        raise FormulaDomainError("S = 0 for every cube-root branch (degenerate point)")
    r1 = 0.5 * cmath.sqrt(-4 * S**2 - 2 * p + q / S)
    r2 = 0.5 * cmath.sqrt(-4 * S**2 - 2 * p - q / S)
    ys = (-A / 4 - S + r1, -A / 4 - S - r1, -A / 4 + S + r2, -A / 4 + S - r2)
    roots = tuple(math.sqrt(max(y.real, 0.0)) for y in ys)
    return roots, dict(p=p, q=q, S=S, Q=Q, Delta0=d0, Delta=d1, cube_branch=branch,
                       max_imag=max(abs(y.imag) for y in ys))


def _label_by_initial_limit(roots, d1, d2, d3):
    """Order and sign the four magnitudes like the coupling-free eigenvalues.

    Without couplings the positive members are the signed sums
    d1+d2+d3, d1+d2-d3, d1-d2+d3, d1-d2-d3.  The radicals come out in formula
    order, so the k-th largest magnitude is given to the label whose sum is
    the k-th largest in magnitude and inherits its sign.  This matches the
    branches continuously as long as no two magnitudes cross.
    """
    sums = np.array([d1 + d2 + d3, d1 + d2 - d3, d1 - d2 + d3, d1 - d2 - d3])
    if not np.any(sums):
        return roots
    mags = np.sort(np.asarray(roots))[::-1]
    rank = np.argsort(-np.abs(sums), kind="stable")
    out = np.empty(4)
    out[rank] = mags
    return tuple(float(x) for x in np.where(sums < 0, -out, out))


def closed_form_offset_spectrum(J: float, J1: float, d1: float, d2: float, d3: float,
                                mode: str = "corrected") -> OffsetSpectrum:
    """Eight eigenfrequencies of the phi = pi/2 offset Hamiltonian in radicals.

    ``mode="printed"`` evaluates the resolvent with the cubic coefficient
    left out of p, q, Delta0 and Delta, absolute values and all;
    ``mode="corrected"`` restores it.  Only the corrected form reproduces the numerical
    spectrum; the printed one is kept so its disagreement can be measured.
    Raises :class:`FormulaDomainError` at points where S or Q vanish.
    """
    A, B, C, D = quartic_coefficients(J, J1, d1, d2, d3)
    if mode == "printed":
        roots, extra = _printed_roots(A, B, C, D)
    elif mode == "corrected":
        roots, extra = _corrected_roots(A, B, C, D)
    else:
        raise ValueError("mode must be 'printed' or 'corrected'")
    if mode == "corrected":
        roots = _label_by_initial_limit(roots, d1, d2, d3)
    lam, dl, mu, ga = roots
    internals = dict(A=A, B=B, C=C, D=D, **extra)
    return OffsetSpectrum((lam, -lam), (dl, -dl), (mu, -mu), (ga, -ga), internals, mode)


# ---------------------------------------------------------------------------
# Rabi scheme at phi = pi/4

@dataclass(frozen=True)
class RotatingSpectrum:
    Lambda: tuple[float, ...]
    kappa: float
    alpha: float


def _require_quarter_pi(phi: float) -> None:
    if abs(phi - math.pi / 4) > 1e-12:
        raise ValueError("closed forms hold only at phi = pi/4")


def mixing_angle(omega2: float, omega3: float, J1: float, J: float) -> float:
    """kappa with ``tan kappa = omega2/(2 J1) + omega3/(2 J)``.

    Either coupling at zero sends the tangent to infinity; kappa = pi/2 is
    returned there, which is also the t = 0 value of a Rabi schedule.
    """
    if min(omega2, omega3, J1, J) < 0:
        raise ValueError("mixing_angle takes nonnegative amplitudes")
    if J1 == 0 or J == 0:
        return math.pi / 2
    return math.atan(omega2 / (2 * J1) + omega3 / (2 * J))


def closed_form_rotating_spectrum(p: ham.RotatingParams) -> RotatingSpectrum:
    _require_quarter_pi(p.phi)
    J, J1, o2, o3 = p.J, p.J1, p.omega2, p.omega3
    a = (o3 - J) ** 2 + J1**2 + o2**2
    r = math.sqrt(2 * (o3 - J) ** 2 * (J1 - o2) ** 2)
    b = 5 * o3**2 + 2 * J * o3 + J**2 + J1**2 + o2**2
    s = math.sqrt(2 * o3**2 * (9 * o2**2 + 2 * J1 * o2 + 9 * J1**2) + 2 * J * (J1 + o2) ** 2 * (2 * o3 + J))
    l0 = math.sqrt(a + r)
    l2 = math.sqrt(max(a - r, 0.0))
    l4 = math.sqrt(b + s)
    l6 = math.sqrt(max(b - s, 0.0))
    kappa = mixing_angle(o2, o3, J1, J)
    return RotatingSpectrum((l0, -l0, l2, -l2, l4, -l4, l6, -l6), kappa, math.pi / 4 - kappa)


_ALPHA_SLOTS = np.array([0, 1, 4, 5])


def rotating_eigenvectors(p: ham.RotatingParams) -> np.ndarray:
    """Columns are the closed-form vectors |Lambda_0>..|Lambda_7>.

    Each is a Fourier mode with ``exp(-+ i alpha)`` on the down-spin-2
    components (indices 0, 1, 4, 5): minus for even i, plus for odd i.
    These are exact eigenvectors only at alpha = 0; elsewhere the residual is
    measurable and reported by the closed-form comparison script.
    """
    _require_quarter_pi(p.phi)
    alpha = math.pi / 4 - mixing_angle(p.omega2, p.omega3, p.J1, p.J)
    vecs = fourier_modes().copy()
    for i in range(DIM):
        vecs[_ALPHA_SLOTS, i] *= cmath.exp((1j if i % 2 else -1j) * alpha)
    return vecs


def kappa_rate(s, t: float) -> float:
    """Rate of the mixing angle along a Rabi schedule, as a closed-form rate expression.

    Note the sign: this expression is the derivative of
    ``(atan(J01/omega2) + atan(J0/omega3)) / 2`` and is nonnegative, while
    :func:`mixing_angle` decreases along the schedule.
    """
    from .schedules import sweep_factors

    sin2, _, sin_double = sweep_factors(s, t)
    w, J01, J0, u, up = s.omega_prime, s.J01, s.J0, s.upsilon0, s.upsilon0p
    a = w * J01 * (J01 + u) * sin_double / (J01**2 * sin2**2 + (u * sin2 - (J01 + u)) ** 2) if J01 + u else 0.0
    b = w * J0 * (J0 + up) * sin_double / (J0**2 * sin2**2 + (up * sin2 - (J0 + up)) ** 2) if J0 + up else 0.0
    return 0.5 * (a + b)


def mixing_angle_at(s, t: float) -> float:
    from .schedules import rabi_at

    J, J1, o2, o3 = rabi_at(s, t)
    return mixing_angle(o2, o3, J1, J)


# ---------------------------------------------------------------------------
# numerical tracking

@dataclass
class SpectrumBranches:
    """``values[b, t]`` and ``vectors[b, t, :]``, branch b continuous in t."""

    times: np.ndarray
    values: np.ndarray
    vectors: np.ndarray
    min_gaps: np.ndarray
    warnings: list[str] = field(default_factory=list)


def track_spectrum(hamiltonian_at, grid) -> SpectrumBranches:
    """Follow the eight eigenbranches of ``hamiltonian_at(t)`` across ``grid``.

    Branches are labelled by descending eigenvalue at ``grid[0]``.  Each later
    eigenvector goes to the still-free branch it overlaps most (greedy, largest
    overlaps first) and is rephased so that the overlap with its predecessor
    is real and nonnegative.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2 or np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing with at least 2 points")
    hs = np.array([hamiltonian_at(t) for t in grid])
    eig = hermitian_eigensystem(hs)
    n = grid.size
    values = np.empty((DIM, n))
    vectors = np.empty((DIM, n, DIM), dtype=complex)
    min_gaps = np.empty(n)
    notes: list[str] = []

    values[:, 0] = eig.values[0][::-1]
    vectors[:, 0] = eig.vectors[0][:, ::-1].T
    for m in range(n):
        if m:
            w, v = eig.values[m], eig.vectors[m]
            overlap = np.abs(vectors[:, m - 1].conj() @ v)   # [branch, new column]
            assign = _greedy_assignment(overlap)
            newv = v[:, assign].T
            ph = np.einsum("bk,bk->b", vectors[:, m - 1].conj(), newv)
            newv *= np.where(np.abs(ph) > 0, np.conj(ph) / np.maximum(np.abs(ph), 1e-300), 1.0)[:, None]
            values[:, m] = w[assign]
            vectors[:, m] = newv
        srt = np.sort(values[:, m])
        min_gaps[m] = np.min(np.diff(srt))
        if min_gaps[m] <= DEGENERACY_TOL * max(max_norm(hs[m]), 1e-300):
            notes.append(f"near-degenerate spectrum at t={grid[m]:.6g} ms (gap {min_gaps[m]:.3g})")
    if len(notes) > 5:
        notes = notes[:5] + [f"... {len(notes) - 5} more degenerate samples"]
    return SpectrumBranches(grid, values, vectors, min_gaps, notes)


def _greedy_assignment(overlap: np.ndarray) -> np.ndarray:
    """``assign[b]`` = column taken by branch b, largest overlaps claimed first."""
    order = np.argsort(-overlap, axis=None, kind="stable")
    assign = np.full(DIM, -1)
    used = np.zeros(DIM, bool)
    for flat in order:
        b, c = divmod(int(flat), DIM)
        if assign[b] < 0 and not used[c]:
            assign[b] = c
            used[c] = True
    return assign


@dataclass(frozen=True)
class AdiabaticityReport:
    gaps: np.ndarray        # [i, j, t]
    couplings: np.ndarray   # [i, j, t]
    margins: np.ndarray     # [i, j, t], inf where the coupling vanishes
    min_margin: float


def adiabaticity_report(b: SpectrumBranches) -> AdiabaticityReport:
    """Gap, nonadiabatic coupling and their ratio for every branch pair."""
    dv = np.gradient(b.vectors, b.times, axis=1, edge_order=1)
    couplings = np.abs(np.einsum("itk,jtk->ijt", dv.conj(), b.vectors))
    gaps = np.abs(b.values[:, None, :] - b.values[None, :, :])
    with np.errstate(divide="ignore", invalid="ignore"):
        margins = np.where(couplings > 0, gaps / couplings, np.inf)
    off = ~np.eye(DIM, dtype=bool)
    return AdiabaticityReport(gaps, couplings, margins, float(np.min(margins[off])))


# ---------------------------------------------------------------------------
# rotating computational states

def rotating_states(phi: float = math.pi / 4) -> np.ndarray:
    """Columns are the rotated product states a Rabi-scheme run starts from.

    Spins 1 and 3 use ``(|d> +- |u>)/sqrt 2``; spin 2 carries the drive phase,
    ``(e^{i phi}|d> +- |u>)/sqrt 2``.  Column index bits give the signs with
    bit 1 meaning +, so column 0 is |- - -> and column 7 is |+ + +>.
    """
    dn, up = np.array([1.0, 0.0]), np.array([0.0, 1.0])
    outer = {0: (dn - up) / math.sqrt(2), 1: (dn + up) / math.sqrt(2)}
    mid = {0: (cmath.exp(1j * phi) * dn - up) / math.sqrt(2), 1: (cmath.exp(1j * phi) * dn + up) / math.sqrt(2)}
    cols = []
    for i in range(DIM):
        b1, b2, b3 = (i >> 2) & 1, (i >> 1) & 1, i & 1
        cols.append(np.kron(np.kron(outer[b1], mid[b2]), outer[b3]))
    return np.array(cols).T


def match_rotating_states(b: SpectrumBranches, phi: float = math.pi / 4) -> np.ndarray:
    """``order[i]`` = branch whose t = 0 vector overlaps rotating state i most."""
    overlap = np.abs(rotating_states(phi).conj().T @ b.vectors[:, 0].T)   # [state, branch]
    return _greedy_assignment(overlap)
