"""Gate construction, time evolution scenarios and fidelity measures."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import schedules as sc
from . import spectra as sp
from .numerics import DIM, hermitian_asymmetry, hermitian_eigensystem, propagator_series, unitarity_drift

DEFAULT_SAMPLES = 2000
STATE_TOL = 1e-10
_EIG_FLOOR = 1e-13


@dataclass
class FidelitySeries:
    times: np.ndarray
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def at(self, t: float) -> float:
        """Value at the sample nearest to ``t``."""
        return float(self.values[int(np.argmin(np.abs(self.times - t)))])


def qft_gate() -> np.ndarray:
    """The three-qubit QFT gate with the -pi/2 phase carried by column 1."""
    g = sp.fourier_modes().copy()
    g[:, 1] *= -1j
    return g


def gate_fidelity(g: np.ndarray, u: np.ndarray) -> np.ndarray:
    """``|Tr(G^dagger U)|^2 / 64``; broadcasts over a leading stack axis of ``u``."""
    tr = np.einsum("ij,...ij->...", np.conj(g), u)
    return np.abs(tr) ** 2 / DIM**2


def _grid(t_end: float, samples: int) -> np.ndarray:
    if samples < 2:
        raise ValueError("samples must be >= 2")
    return np.linspace(0.0, t_end, samples)


def simulate_offset_gate(s: sc.OffsetSchedule, samples: int = DEFAULT_SAMPLES, steps: int | None = None):
    """Propagators and gate fidelity along an offset-scheme sweep over [0, t_max]."""
    times = _grid(s.t_max, samples)
    us = propagator_series(sc.offset_hamiltonian(s), times, steps=steps)
    return us, FidelitySeries(times, gate_fidelity(qft_gate(), us), dict(unitarity_drift=unitarity_drift(us)))


@dataclass
class _RabiRun:
    times: np.ndarray
    propagators: np.ndarray
    initial: np.ndarray        # column i: starting vector for rotating state i
    order: np.ndarray          # order[i]: tracked branch followed from state i
    beta: np.ndarray           # [i, t] running dynamical phase of that branch
    branches: sp.SpectrumBranches


def _rabi_run(s: sc.RabiSchedule, t_end: float, samples: int, counter_driving: bool,
              steps: int | None) -> _RabiRun:
    times = _grid(t_end, samples)
    branches = sp.track_spectrum(sc.rabi_hamiltonian(s), times)
    order = sp.match_rotating_states(branches, s.phi)
    start = branches.vectors[order, 0, :].T                  # [k, i]
    ref = sp.rotating_states(s.phi)
    ph = np.einsum("ki,ki->i", np.conj(ref), start)
    start = start * (np.conj(ph) / np.abs(ph))[None, :]      # <s_i|v_i> real positive
    vals = branches.values[order]
    dt = np.diff(times)
    beta = np.concatenate([np.zeros((DIM, 1)), np.cumsum(0.5 * dt * (vals[:, 1:] + vals[:, :-1]), axis=1)], axis=1)
    us = propagator_series(sc.rabi_hamiltonian(s, counter_driving), times, steps=steps)
    return _RabiRun(times, us, start, order, beta, branches)


def simulate_adiabatic(s: sc.RabiSchedule, with_counter_driving: bool = False,
                       samples: int = DEFAULT_SAMPLES, steps: int | None = None) -> FidelitySeries:
    """Average transfer fidelity of the eight rotating states onto the Fourier modes.

    Each starting vector is the t = 0 eigenvector closest to a rotating
    product state.  After evolution the dynamical phase of its tracked branch
    is divided out and the result is compared with psi_i.  ``meta`` holds the
    per-branch instantaneous overlaps with the tracked eigenvectors and the
    final per-state overlaps with the Fourier modes.  ``final_mode_assignment[i]``
    is the Fourier mode state i actually ends closest to, which exposes a
    permuted landing that the pairing with psi_i cannot see.
    """
    run = _rabi_run(s, s.t_max, samples, with_counter_driving, steps)
    evolved = run.propagators @ run.initial                 # [t, k, i]
    evolved = evolved * np.exp(1j * run.beta.T)[:, None, :]
    modes = sp.fourier_modes()
    overlaps = np.einsum("ki,tki->ti", np.conj(modes), evolved)
    values = np.abs(overlaps.sum(axis=1)) ** 2 / DIM**2
    tracked = run.branches.vectors[run.order]                # [i, t, k]
    inst = np.abs(np.einsum("itk,tki->it", np.conj(tracked), evolved))
    meta = dict(
        branch_overlaps=inst,
        final_mode_overlaps=np.abs(overlaps[-1]),
        final_mode_assignment=np.argmax(np.abs(np.einsum("kj,ki->ji", np.conj(modes), evolved[-1])), axis=0),
        branch_order=run.order,
        tracking_warnings=run.branches.warnings,
        counter_driving=with_counter_driving,
        unitarity_drift=unitarity_drift(run.propagators),
    )
    return FidelitySeries(run.times, values, meta)


def prepare_superposition(phases, scheme: str = "offset", phi: float = math.pi / 4) -> np.ndarray:
    """Equal-weight superposition of the first four (rotated) basis states with given phases."""
    phases = np.asarray(phases, dtype=float)
    if phases.shape != (4,):
        raise ValueError("need exactly four phases")
    if scheme == "offset":
        basis = np.eye(DIM, dtype=complex)[:, :4]
    elif scheme == "rabi":
        basis = sp.rotating_states(phi)[:, :4]
    else:
        raise ValueError("scheme must be 'offset' or 'rabi'")
    return 0.5 * basis @ np.exp(1j * phases)


def entangled_target() -> np.ndarray:
    return 0.5 * sp.fourier_modes()[:, :4].sum(axis=1)


def superposition_fidelity(states: np.ndarray, target: np.ndarray | None = None) -> np.ndarray:
    """``|<target| (1/2) sum_i states[..., :, i]>|^2`` for four columns of states."""
    target = entangled_target() if target is None else target
    combo = 0.5 * states.sum(axis=-1)
    return np.abs(np.einsum("k,...k->...", np.conj(target), combo)) ** 2


def entangle_fidelity(s: sc.RabiSchedule, samples: int = DEFAULT_SAMPLES, t_eval: float | None = None,
                      steps: int | None = None) -> FidelitySeries:
    """Fidelity of the four-state superposition with (psi0 + psi1 + psi2 + psi3)/2.

    The series runs from 0 to ``t_eval`` (default t_max).  The initial state
    is the superposition of the starting vectors for |---> .. |-++>, each
    carrying the phase that cancels its own dynamical phase at time t.
    """
    t_end = s.t_max if t_eval is None else float(t_eval)
    if not 0 < t_end <= s.t_max * (1 + 1e-12):
        raise ValueError(f"t_eval = {t_end} ms outside (0, t_max = {s.t_max}] ms")
    run = _rabi_run(s, min(t_end, s.t_max), samples, False, steps)
    evolved = run.propagators @ run.initial[:, :4]
    evolved = evolved * np.exp(1j * run.beta[:4].T)[:, None, :]
    return FidelitySeries(run.times, superposition_fidelity(evolved),
                          dict(tracking_warnings=run.branches.warnings,
                               unitarity_drift=unitarity_drift(run.propagators)))


def entangle_sweep(base: sc.RabiSchedule, omega_primes, t_eval: float, samples: int = 400,
                   steps: int | None = None) -> np.ndarray:
    """Entangling fidelity at ``t_eval`` for each sweep rate; nan where t_eval > t_max."""
    out = []
    for w in omega_primes:
        s = sc.RabiSchedule(base.J0, base.J01, base.upsilon0, base.upsilon0p, float(w), base.phi)
        if t_eval > s.t_max * (1 + 1e-12):
            out.append(float("nan"))
            continue
        out.append(entangle_fidelity(s, samples, t_eval, steps).values[-1])
    return np.array(out)


# ---------------------------------------------------------------------------
# mixed-state fidelity

class InvalidStateError(ValueError):
    pass


def validate_density_matrix(rho: np.ndarray, tol: float = STATE_TOL) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InvalidStateError("density matrix must be square")
    if hermitian_asymmetry(rho) > tol:
        raise InvalidStateError("density matrix is not Hermitian")
    tr = np.trace(rho)
    if abs(tr - 1) > tol:
        raise InvalidStateError(f"trace {tr.real:.12g} differs from 1")
    w = hermitian_eigensystem(rho).values
    if w.min() < -tol:
        raise InvalidStateError(f"negative eigenvalue {w.min():.3e}")
    return rho


def _floored(w: np.ndarray) -> np.ndarray:
    # eigenvalues at rounding level would enter as their square roots
    # (1e-16 -> 1e-8), so anything below the noise floor is set to zero
    return np.where(w > _EIG_FLOOR * max(w.max(), 0.0), w, 0.0)


def _psd_sqrt(m: np.ndarray) -> np.ndarray:
    w, v = hermitian_eigensystem(0.5 * (m + m.conj().T))
    return (v * np.sqrt(_floored(w))) @ v.conj().T


def uhlmann_fidelity(rho0: np.ndarray, rho: np.ndarray) -> float:
    """``(Tr sqrt(sqrt(rho0) rho sqrt(rho0)))^2`` for two density matrices."""
    rho0 = validate_density_matrix(rho0)
    rho = validate_density_matrix(rho)
    r = _psd_sqrt(rho0)
    inner = r @ rho @ r
    w = hermitian_eigensystem(0.5 * (inner + inner.conj().T)).values
    return float(np.sum(np.sqrt(_floored(w))) ** 2)


def pure_state(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, psi.conj())
