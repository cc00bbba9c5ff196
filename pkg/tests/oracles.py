"""Independent reference constructions used only by the tests.

Nothing here imports the package's builders: Hamiltonians are assembled
from spin-flip operators with Kronecker products, spectra come from
``numpy.linalg.eigh`` and propagators from ``scipy.linalg.expm``.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import expm

DOWN = np.array([1.0, 0.0])
UP = np.array([0.0, 1.0])
SP = np.outer(UP, DOWN).astype(complex)   # |u><d|
SM = SP.conj().T
I2 = np.eye(2, dtype=complex)
W = np.exp(1j * np.pi / 4)


def on(site: int, op: np.ndarray) -> np.ndarray:
    ops = [I2, I2, I2]
    ops[site] = op
    return np.kron(np.kron(ops[0], ops[1]), ops[2])


def flip(site: int, phase_plus: float) -> np.ndarray:
    """``sigma+ e^{i a} + sigma- e^{-i a}`` on one site."""
    return on(site, SP * np.exp(1j * phase_plus) + SM * np.exp(-1j * phase_plus))


def model_operator(J1=0, J2=0, J3=0, J=0, omega1=0, omega2=0, omega3=0, theta1=0, theta2=0, theta3=0,
                   phi12=0, phi21=0, phi23=0, phi32=0, phi13=0, phi31=0, phi1=0, phi2=0, phi3=0):
    """Three-spin model written with spin-flip operators (sigma+ = |u><d|)."""
    return (
        J1 * flip(0, -phi12) @ flip(1, -phi21)
        + J2 * flip(1, -phi23) @ flip(2, -phi32)
        + J3 * flip(0, -phi13) @ flip(2, -phi31)
        + omega1 * flip(0, theta1) + omega2 * flip(1, theta2) + omega3 * flip(2, theta3)
        + J * flip(0, -phi1) @ flip(1, -phi2) @ flip(2, -phi3)
    )


def rabi_operator(J, J1, omega2, omega3, phi):
    """Rabi-controlled Hamiltonian in spin-flip form."""
    return (
        J1 * flip(0, 0) @ flip(1, -phi)
        + omega3 * flip(1, 0) @ flip(2, -phi)
        + omega3 * flip(0, 0) @ flip(2, phi)
        + omega2 * flip(1, phi)
        + omega3 * flip(2, phi)
        + J * flip(0, 0) @ flip(1, 0) @ flip(2, -phi)
    )


def offset_operator(d1, d2, d3):
    sz = np.diag([1.0, -1.0]).astype(complex)   # down = +1
    return d1 * on(0, sz) + d2 * on(1, sz) + d3 * on(2, sz)


def dft_columns():
    k = np.arange(8)
    return np.array([[np.exp(1j * np.pi * j * m / 4) for j in k] for m in k]) / (2 * np.sqrt(2))


# the reference gate, typed in row by row (common factor 1/(2 sqrt 2) applied below)
_G_ROWS = [
    [1, -1j, 1, 1, 1, 1, 1, 1],
    [1, -1j * W, 1j, 1j * W, -1, -W, -1j, -1j * W],
    [1, 1, -1, -1j, 1, 1j, -1, -1j],
    [1, W, -1j, W, -1, -1j * W, 1j, -W],
    [1, 1j, 1, -1, 1, -1, 1, -1],
    [1, 1j * W, 1j, -1j * W, -1, W, -1j, 1j * W],
    [1, -1, -1, 1j, 1, -1j, -1, 1j],
    [1, -W, -1j, -W, -1, 1j * W, 1j, W],
]
PRINTED_GATE = np.array(_G_ROWS, dtype=complex) / (2 * np.sqrt(2))


def eig(h):
    return np.linalg.eigvalsh(h)


def propagate(h_of_t, t0, t1, steps):
    """Reference propagator: midpoint rule with scipy's Pade ``expm``."""
    dt = (t1 - t0) / steps
    u = np.eye(8, dtype=complex)
    for k in range(steps):
        u = expm(-1j * h_of_t(t0 + (k + 0.5) * dt) * dt) @ u
    return u


def offset_limit_table(d1, d2, d3):
    return np.array([s * (d1 + a * d2 + b * d3) for s in (1, -1) for a in (1, -1) for b in (1, -1)])
