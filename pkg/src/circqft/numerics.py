"""Fixed-size complex linear algebra and Schrödinger propagation.

Everything here works on 8x8 complex arrays (one three-qubit operator) or on
stacks of them with shape ``(n, 8, 8)``.  Units follow the rest of the
package: time in ms, angular frequencies in rad/ms, hbar = 1.
"""

from __future__ import annotations

import math
from typing import Callable, NamedTuple

import numpy as np

DIM = 8

HERMITIAN_TOL = 1e-10
JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100
MIN_STEPS = 4000
STEPS_PER_PERIOD = 40
DRIFT_FAIL = 1e-6

HamiltonianFn = Callable[[float], np.ndarray]


class NonHermitianError(ValueError):
    def __init__(self, asymmetry: float):
        super().__init__(f"matrix is not Hermitian: max |M - M^dagger| = {asymmetry:.3e}")
        self.asymmetry = asymmetry


class PropagationError(RuntimeError):
    """Raised when the propagator drifts away from unitarity."""

    def __init__(self, drift: float, steps: int):
        super().__init__(f"unitarity drift {drift:.3e} after {steps} steps")
        self.drift = drift
        self.steps = steps


class EigenSystem(NamedTuple):
    values: np.ndarray   # (..., 8) ascending
    vectors: np.ndarray  # (..., 8, 8), column i pairs with values[..., i]


def max_norm(m: np.ndarray) -> float:
    return float(np.max(np.abs(m))) if m.size else 0.0


def hermitian_asymmetry(m: np.ndarray) -> float:
    return max_norm(m - np.conj(np.swapaxes(m, -1, -2)))


def unitarity_drift(u: np.ndarray) -> float:
    """``max |U^dagger U - I|`` over a single matrix or a stack."""
    uu = np.conj(np.swapaxes(u, -1, -2)) @ u
    return max_norm(uu - np.eye(u.shape[-1]))


def check_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> None:
    asym = hermitian_asymmetry(m)
    if asym > tol * (1.0 + max_norm(m)):
        raise NonHermitianError(asym)


_NEGLIGIBLE = 1e-30


def _jacobi_batch(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic complex Jacobi on a stack of Hermitian matrices.

    Each (p, q) rotation is applied to the whole stack at once; matrices that
    are already diagonal in that slot get the identity rotation.  The stack
    axis is moved last so every row/column slice is contiguous.
    """
    n, d, _ = h.shape
    a = np.ascontiguousarray(np.moveaxis(0.5 * (h + np.conj(np.swapaxes(h, 1, 2))), 0, -1))
    v = np.zeros((d, d, n), dtype=complex)
    v[np.arange(d), np.arange(d)] = 1.0
    scale = np.sqrt(np.sum(np.abs(a) ** 2, axis=(0, 1)))
    tiny = np.finfo(float).tiny
    scale_floor = np.maximum(scale, tiny)
    offmask = ~np.eye(d, dtype=bool)

    for _ in range(JACOBI_MAX_SWEEPS):
        off = np.sqrt(np.sum(np.abs(a[offmask]) ** 2, axis=0))
        if np.all(off <= np.maximum(JACOBI_TOL * scale, _NEGLIGIBLE * scale_floor * d)):
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = a[p, q]
                mag = np.abs(apq)
                # entries this small cannot move the spectrum; rotating on them
                # only invites overflow in zeta and the phase
                live = mag > _NEGLIGIBLE * scale_floor
                if not live.any():
                    continue
                safe = np.where(live, mag, 1.0)
                zeta = (a[q, q].real - a[p, p].real) / (2.0 * safe)
                t = np.where(zeta >= 0, 1.0, -1.0) / (np.abs(zeta) + np.hypot(1.0, zeta))
                t = np.where(live, t, 0.0)
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                ph = np.where(live, np.conj(apq) / safe, 1.0)  # e^{-i arg a_pq}
                r10 = -s * ph
                r11 = c * ph

                cp = a[:, p].copy()
                cq = a[:, q]
                a[:, p] = cp * c + cq * r10
                a[:, q] = cp * s + cq * r11
                rp = a[p].copy()
                rq = a[q]
                a[p] = rp * c + rq * np.conj(r10)
                a[q] = rp * s + rq * np.conj(r11)
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real

                vp = v[:, p].copy()
                vq = v[:, q]
                v[:, p] = vp * c + vq * r10
                v[:, q] = vp * s + vq * r11

    values = np.real(np.diagonal(a, axis1=0, axis2=1))  # (n, d)
    vectors = np.moveaxis(v, -1, 0)
    order = np.argsort(values, axis=1, kind="stable")
    values = np.take_along_axis(values, order, axis=1)
    vectors = np.take_along_axis(vectors, order[:, None, :], axis=2)
    return values, vectors


def hermitian_eigensystem(h: np.ndarray) -> EigenSystem:
    """Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.

    Accepts one matrix or a stack ``(n, d, d)``.  Ties keep their original
    diagonal order.
    """
    h = np.asarray(h, dtype=complex)
    check_hermitian(h)
    if h.ndim == 2:
        vals, vecs = _jacobi_batch(h[None])
        return EigenSystem(vals[0], vecs[0])
    if h.shape[0] == 0:
        return EigenSystem(np.zeros(h.shape[:2]), np.zeros(h.shape, dtype=complex))
    return EigenSystem(*_jacobi_batch(h))


def expm_hermitian(h: np.ndarray, dt: float) -> np.ndarray:
    """``exp(-i h dt)`` for one Hermitian matrix or a stack, via the eigensystem."""
    vals, vecs = hermitian_eigensystem(h)
    phases = np.exp(-1j * vals * dt)
    return (vecs * phases[..., None, :]) @ np.conj(np.swapaxes(vecs, -1, -2))


def default_steps(hamiltonian_at: HamiltonianFn, t0: float, t1: float, probes: int = 65) -> int:
    """Step budget: 40 steps per fastest oscillation period, never below 4000."""
    hmax = max(max_norm(hamiltonian_at(t)) for t in np.linspace(t0, t1, probes))
    return max(MIN_STEPS, math.ceil(STEPS_PER_PERIOD * (t1 - t0) * hmax / (2 * math.pi)))


def propagator_series(
    hamiltonian_at: HamiltonianFn,
    times,
    steps: int | None = None,
    check: bool = True,
) -> np.ndarray:
    """Propagators ``U(times[k], times[0])`` for every entry of ``times``.

    Midpoint exponential stepping: ``U <- exp(-i H(t + dt/2) dt) U``.  The
    total budget ``steps`` is spread over the sample intervals (at least one
    step per interval).  Returns an array of shape ``(len(times), 8, 8)``.
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size < 1:
        raise ValueError("times must be a non-empty 1-D grid")
    if times.size > 1 and np.any(np.diff(times) <= 0):
        raise ValueError("times must be strictly increasing")
    out = np.empty((times.size, DIM, DIM), dtype=complex)
    out[0] = np.eye(DIM)
    if times.size == 1:
        return out
    if steps is None:
        steps = default_steps(hamiltonian_at, times[0], times[-1])
    if steps < 1:
        raise ValueError("steps must be >= 1")
    per = max(1, math.ceil(steps / (times.size - 1)))

    mids, dts = [], []
    for a, b in zip(times[:-1], times[1:]):
        dt = (b - a) / per
        mids.extend(a + (j + 0.5) * dt for j in range(per))
        dts.extend([dt] * per)
    hs = np.array([hamiltonian_at(t) for t in mids], dtype=complex)
    step_ops = _step_ops(hs, np.asarray(dts))

    u = np.eye(DIM, dtype=complex)
    k = 0
    for i in range(1, times.size):
        for _ in range(per):
            u = step_ops[k] @ u
            k += 1
        out[i] = u
    if check:
        drift = unitarity_drift(out)
        if drift > DRIFT_FAIL:
            raise PropagationError(drift, k)
    return out


def _step_ops(hs: np.ndarray, dts: np.ndarray) -> np.ndarray:
    vals, vecs = hermitian_eigensystem(hs)
    phases = np.exp(-1j * vals * dts[:, None])
    return (vecs * phases[:, None, :]) @ np.conj(np.swapaxes(vecs, 1, 2))


def evolve_propagator(
    hamiltonian_at: HamiltonianFn, t0: float, t1: float, steps: int | None = None
) -> np.ndarray:
    """Unitary ``U(t1, t0)`` solving ``dU/dt = -i H(t) U`` with ``U(t0) = I``."""
    if not t1 > t0:
        raise ValueError("need t1 > t0")
    if steps is None:
        steps = default_steps(hamiltonian_at, t0, t1)
    return propagator_series(hamiltonian_at, [t0, t1], steps=steps)[-1]
