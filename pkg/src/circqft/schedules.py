"""sin^2 / cos^2 control schedules, adiabatic phase integrals and detuning tuning."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from . import hamiltonians as ham

TWO_PI = 2.0 * math.pi
_T_SLACK = 1e-12


def khz(value: float) -> float:
    """Caption value ``X/2pi = value kHz`` as an angular frequency in rad/ms."""
    return TWO_PI * value


@dataclass(frozen=True)
class OffsetSchedule:
    J0: float
    J01: float
    d1: float
    d2: float
    d3: float
    omega_prime: float
    phi: float = math.pi / 2

    def __post_init__(self):
        if not self.omega_prime > 0:
            raise ValueError("omega_prime must be > 0")
        if min(self.J0, self.J01) < 0:
            raise ValueError("coupling amplitudes must be >= 0")

    @property
    def t_max(self) -> float:
        return math.pi / (2.0 * self.omega_prime)

    @property
    def detunings(self) -> tuple[float, float, float]:
        return (self.d1, self.d2, self.d3)

    def scaled(self, factor: float) -> "OffsetSchedule":
        return replace(self, d1=self.d1 * factor, d2=self.d2 * factor, d3=self.d3 * factor)


@dataclass(frozen=True)
class RabiSchedule:
    J0: float
    J01: float
    upsilon0: float
    upsilon0p: float
    omega_prime: float
    phi: float = math.pi / 4

    def __post_init__(self):
        if not self.omega_prime > 0:
            raise ValueError("omega_prime must be > 0")
        if min(self.J0, self.J01, self.upsilon0, self.upsilon0p) < 0:
            raise ValueError("amplitudes must be >= 0")

    @property
    def t_max(self) -> float:
        return math.pi / (2.0 * self.omega_prime)


@dataclass(frozen=True)
class PhaseSet:
    scheme: str                 # "offset" (alpha_1..alpha_4) or "rabi" (beta_0..beta_7)
    values: tuple[float, ...]
    branch_integrals: tuple[float, ...] = ()
    warnings: tuple[str, ...] = ()


def _check_time(s, t: float) -> float:
    t = float(t)
    if t < -_T_SLACK * s.t_max or t > s.t_max * (1 + _T_SLACK):
        raise ValueError(f"t = {t} ms outside [0, {s.t_max}] ms")
    return min(max(t, 0.0), s.t_max)


def sweep_factors(s, t: float) -> tuple[float, float, float]:
    """``(sin^2 w't, cos^2 w't, sin 2w't)`` with exact zeros at both ends.

    Works through the fraction ``u = t / t_max`` and reflects about the
    midpoint, so ``t = t_max`` gives cos^2 = 0 and sin 2w't = 0 exactly.
    """
    t = _check_time(s, t)
    u = t / s.t_max
    half = 0.5 * math.pi
    sin2 = math.sin(half * u) ** 2 if u <= 0.5 else 1.0 - math.sin(half * (1.0 - u)) ** 2
    cos2 = math.sin(half * (1.0 - u)) ** 2 if u >= 0.5 else 1.0 - math.sin(half * u) ** 2
    sin_double = math.sin(math.pi * min(u, 1.0 - u))
    return sin2, cos2, sin_double


def offset_at(s: OffsetSchedule, t: float) -> tuple[float, float, float, float, float]:
    """``(J, J1, d1, d2, d3)`` at time t."""
    sin2, cos2, _ = sweep_factors(s, t)
    return (s.J0 * sin2, s.J01 * sin2, s.d1 * cos2, s.d2 * cos2, s.d3 * cos2)


def rabi_at(s: RabiSchedule, t: float) -> tuple[float, float, float, float]:
    """``(J, J1, omega2, omega3)`` at time t."""
    sin2, cos2, _ = sweep_factors(s, t)
    return (s.J0 * sin2, s.J01 * sin2, s.J01 + s.upsilon0 * cos2, s.J0 + s.upsilon0p * cos2)


def offset_hamiltonian(s: OffsetSchedule) -> Callable[[float], np.ndarray]:
    def h(t: float) -> np.ndarray:
        J, J1, d1, d2, d3 = offset_at(s, t)
        return ham.build_circulant(ham.CirculantParams(1, J=J, J1=J1, phi=s.phi)) + ham.build_offset(
            ham.OffsetParams(d1, d2, d3)
        )

    return h


def rabi_hamiltonian(s: RabiSchedule, counter_driving: bool = False) -> Callable[[float], np.ndarray]:
    from .spectra import kappa_rate

    def h(t: float) -> np.ndarray:
        J, J1, o2, o3 = rabi_at(s, t)
        out = ham.build_rotating(ham.RotatingParams(J=J, J1=J1, omega2=o2, omega3=o3, phi=s.phi))
        if counter_driving:
            out = out + ham.build_counter_driving(kappa_rate(s, t))
        return out

    return h


def adiabatic_phases(schedule, steps: int = 2000) -> PhaseSet:
    """Dynamical phases accumulated along the tracked eigenbranches.

    Offset schedules give alpha_1..alpha_4: the integrals of the branches
    that start on |ddd>, |ddu>, |dud> and |duu>.  Rabi schedules give
    beta_0..beta_7, one per rotating initial state, using the same
    state-to-branch matching as :func:`circqft.dynamics.simulate_adiabatic`.
    """
    from . import spectra

    if steps < 100:
        raise ValueError("steps must be >= 100")
    grid = np.linspace(0.0, schedule.t_max, steps + 1)
    if isinstance(schedule, OffsetSchedule):
        branches = spectra.track_spectrum(offset_hamiltonian(schedule), grid)
        integrals = np.trapezoid(branches.values, grid, axis=1)
        # lambda+, delta+, mu+, gamma+ start on |ddd>, |ddu>, |dud>, |duu>
        start = spectra._greedy_assignment(np.abs(branches.vectors[:, 0, :].T))
        return PhaseSet("offset", tuple(float(x) for x in integrals[start[:4]]),
                        tuple(float(x) for x in integrals), tuple(branches.warnings))
    if isinstance(schedule, RabiSchedule):
        branches = spectra.track_spectrum(rabi_hamiltonian(schedule), grid)
        order = spectra.match_rotating_states(branches, schedule.phi)
        integrals = np.trapezoid(branches.values, grid, axis=1)
        return PhaseSet("rabi", tuple(float(x) for x in integrals[order]),
                        tuple(float(x) for x in integrals), tuple(branches.warnings))
    raise TypeError(f"unsupported schedule type {type(schedule).__name__}")


def phase_residuals(phases) -> tuple[np.ndarray, np.ndarray]:
    """Distance of each phase to the nearest multiple of 2 pi, and that multiple."""
    phases = np.asarray(phases, dtype=float)
    k = np.round(phases / TWO_PI)
    return np.abs(phases - TWO_PI * k), k.astype(int)


@dataclass(frozen=True)
class TuneResult:
    schedule: OffsetSchedule
    scale: float
    residuals: tuple[float, ...]
    multiples: tuple[int, ...]      # (p, m, n, k)
    converged: bool
    history: list = field(default_factory=list, compare=False, repr=False)


def tune_detunings(
    s: OffsetSchedule,
    tolerance: float = 1e-3,
    steps: int = 2000,
    bracket: tuple[float, float] = (0.5, 2.0),
) -> TuneResult:
    """Rescale the detuning amplitudes so alpha_1..alpha_4 land on 2 pi multiples.

    The three amplitudes keep their ratios; the only knob is a common factor
    searched in ``bracket``.  For every 2 pi multiple crossed by alpha_1 in
    the bracket, the factor hitting it exactly is found with Brent's method
    and the remaining three residuals are evaluated.  The factor with the
    smallest worst-case residual wins.  Four conditions against one knob
    need not be simultaneously solvable, hence the ``converged`` flag.
    """
    if not any(s.detunings):
        raise ValueError("schedule has no detunings to tune")
    history: list[tuple[float, float]] = []
    cache: dict[float, tuple[float, ...]] = {}

    def alphas(f: float) -> tuple[float, ...]:
        if f not in cache:
            cache[f] = adiabatic_phases(s.scaled(f), steps).values
        return cache[f]

    def worst(f: float) -> float:
        res, _ = phase_residuals(alphas(f))
        history.append((f, float(res.max())))
        return float(res.max())

    if worst(1.0) < tolerance:
        res, k = phase_residuals(alphas(1.0))
        return TuneResult(s, 1.0, tuple(map(float, res)), tuple(map(int, k)), True, history)

    lo, hi = bracket
    grid = np.linspace(lo, hi, 25)
    a1 = np.array([alphas(f)[0] for f in grid])
    candidates = [1.0]
    for i in range(len(grid) - 1):
        k_lo, k_hi = a1[i] / TWO_PI, a1[i + 1] / TWO_PI
        for k in range(math.ceil(min(k_lo, k_hi)), math.floor(max(k_lo, k_hi)) + 1):
            target = TWO_PI * k
            g = lambda f: alphas(f)[0] - target  # noqa: E731
            if g(grid[i]) == 0.0:
                candidates.append(float(grid[i]))
                continue
            if g(grid[i]) * g(grid[i + 1]) > 0:
                continue
            candidates.append(brentq(g, grid[i], grid[i + 1], xtol=1e-12))
    best = min(candidates, key=worst)
    res, k = phase_residuals(alphas(best))
    return TuneResult(
        s.scaled(best), float(best), tuple(map(float, res)), tuple(map(int, k)),
        bool(res.max() < tolerance), history,
    )
