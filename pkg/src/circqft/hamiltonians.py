"""Three-spin Hamiltonians in the computational basis.

Basis order (index k = 4*s1 + 2*s2 + s3 with s=0 for down, 1 for up)::

    |ddd>, |ddu>, |dud>, |duu>, |udd>, |udu>, |uud>, |uuu>

All couplings are angular frequencies in rad/ms, phases in radians.  The
matrices use the conventional row layout of this model entry for entry, the
transpose of what the spin-operator expressions give with
``sigma+ = |u><d|``; the spectra are identical.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numerics import DIM, max_norm

SPIN_SIGNS = np.array([[1 - 2 * ((k >> (2 - j)) & 1) for j in range(3)] for k in range(DIM)])
"""``SPIN_SIGNS[k, j]`` is +1 if spin j+1 is down in basis state k, -1 if up."""


@dataclass(frozen=True)
class FullParams:
    J1: float = 0.0
    J2: float = 0.0
    J3: float = 0.0
    J: float = 0.0
    omega1: float = 0.0
    omega2: float = 0.0
    omega3: float = 0.0
    theta1: float = 0.0
    theta2: float = 0.0
    theta3: float = 0.0
    phi12: float = 0.0
    phi21: float = 0.0
    phi23: float = 0.0
    phi32: float = 0.0
    phi13: float = 0.0
    phi31: float = 0.0
    phi1: float = 0.0
    phi2: float = 0.0
    phi3: float = 0.0

    def __post_init__(self):
        for name in ("J1", "J2", "J3", "J", "omega1", "omega2", "omega3"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")

    def xi(self) -> tuple[float, ...]:
        """The ten combined phase angles, returned as ``(xi1, ..., xi10)``."""
        return (
            self.phi23 + self.phi32,
            self.phi13 + self.phi31,
            self.phi12 + self.phi21,
            self.phi23 - self.phi32,
            self.phi13 - self.phi31,
            self.phi12 - self.phi21,
            self.phi1 + self.phi2 + self.phi3,
            self.phi1 + self.phi2 - self.phi3,
            self.phi1 - self.phi2 + self.phi3,
            self.phi1 - self.phi2 - self.phi3,
        )


@dataclass(frozen=True)
class CirculantParams:
    variant: int = 1
    J: float = 0.0
    J1: float = 0.0
    omega1: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        if self.variant not in (1, 2):
            raise ValueError("variant must be 1 or 2")
        if self.variant == 1 and self.omega1 != 0.0:
            raise ValueError("variant 1 requires omega1 == 0")
        if min(self.J, self.J1, self.omega1) < 0:
            raise ValueError("couplings must be >= 0")


@dataclass(frozen=True)
class OffsetParams:
    d1: float = 0.0
    d2: float = 0.0
    d3: float = 0.0


@dataclass(frozen=True)
class RotatingParams:
    J: float = 0.0
    J1: float = 0.0
    omega2: float = 0.0
    omega3: float = 0.0
    phi: float = np.pi / 4

    def __post_init__(self):
        if min(self.J, self.J1, self.omega2, self.omega3) < 0:
            raise ValueError("couplings must be >= 0")


def configuration_1(J: float, J1: float, phi: float) -> FullParams:
    """Full-model parameters that collapse to the first circulant form."""
    return FullParams(
        J1=J1, J2=J, J3=J, J=J, omega1=0.0, omega2=J1, omega3=J,
        theta2=phi, theta3=phi, phi32=phi, phi3=phi, phi21=phi, phi31=-phi,
    )


def configuration_2(J: float, J1: float, omega1: float, phi: float) -> FullParams:
    """As :func:`configuration_1` but keeping a nonzero ``omega1``."""
    return FullParams(
        J1=J1, J2=J, J3=J, J=J, omega1=omega1, omega2=J1, omega3=J,
        theta2=phi, theta3=phi, phi32=phi, phi3=phi, phi21=phi, phi31=-phi,
    )


def build_full(p: FullParams) -> np.ndarray:
    x1, x2, x3, x4, x5, x6, x7, x8, x9, x10 = p.xi()
    a = p.omega1 * np.exp(1j * p.theta1)
    b = p.omega2 * np.exp(1j * p.theta2)
    c = p.omega3 * np.exp(1j * p.theta3)

    # upper triangle only; the lower one is filled by conjugation
    upper = {
        (0, 1): c, (0, 2): b, (0, 3): p.J2 * np.exp(-1j * x1), (0, 4): a,
        (0, 5): p.J3 * np.exp(-1j * x2), (0, 6): p.J1 * np.exp(-1j * x3), (0, 7): p.J * np.exp(-1j * x7),
        (1, 2): p.J2 * np.exp(-1j * x4), (1, 3): b, (1, 4): p.J3 * np.exp(-1j * x5), (1, 5): a,
        (1, 6): p.J * np.exp(-1j * x8), (1, 7): p.J1 * np.exp(-1j * x3),
        (2, 3): c, (2, 4): p.J1 * np.exp(-1j * x6), (2, 5): p.J * np.exp(-1j * x9), (2, 6): a,
        (2, 7): p.J3 * np.exp(-1j * x2),
        (3, 4): p.J * np.exp(-1j * x10), (3, 5): p.J1 * np.exp(-1j * x6), (3, 6): p.J3 * np.exp(-1j * x5),
        (3, 7): a,
        (4, 5): c, (4, 6): b, (4, 7): p.J2 * np.exp(-1j * x1),
        (5, 6): p.J2 * np.exp(-1j * x4), (5, 7): b,
        (6, 7): c,
    }
    return _hermitian_from_upper(upper)


def _hermitian_from_upper(upper: dict) -> np.ndarray:
    h = np.zeros((DIM, DIM), dtype=complex)
    for (r, col), val in upper.items():
        h[r, col] = val
        h[col, r] = np.conj(val)
    return h


def circulant_first_row(p: CirculantParams) -> np.ndarray:
    e = np.exp(1j * p.phi)
    ec = np.conj(e)
    omega1 = p.omega1 if p.variant == 2 else 0.0
    return np.array(
        [0.0, p.J * e, p.J1 * e, p.J * ec, omega1, p.J * e, p.J1 * ec, p.J * ec], dtype=complex
    )


def circulant_from_row(row: np.ndarray) -> np.ndarray:
    """Matrix whose row r is row 0 shifted right by r places."""
    idx = (np.arange(DIM)[None, :] - np.arange(DIM)[:, None]) % DIM
    return np.asarray(row)[idx]


def build_circulant(p: CirculantParams) -> np.ndarray:
    return circulant_from_row(circulant_first_row(p))


def build_offset(p: OffsetParams) -> np.ndarray:
    """Diagonal energy offset; ``|ddd>`` sits at +(d1 + d2 + d3)."""
    return np.diag((SPIN_SIGNS @ np.array([p.d1, p.d2, p.d3], dtype=float)).astype(complex))


def build_rotating(p: RotatingParams) -> np.ndarray:
    """Rabi-controlled Hamiltonian with time-dependent omega2, omega3.

    A naive transcription carries ``J e^{-i phi}`` at (5, 4), which breaks
    Hermiticity; the operator form gives ``omega3 e^{-i phi}`` there, and
    that is what is used.
    """
    e = np.exp(1j * p.phi)
    ec = np.conj(e)
    J, J1, o2, o3 = p.J, p.J1, p.omega2, p.omega3
    upper = {
        (0, 1): o3 * e, (0, 2): o2 * e, (0, 3): o3 * ec, (0, 4): 0.0, (0, 5): o3 * e,
        (0, 6): J1 * ec, (0, 7): J * ec,
        (1, 2): o3 * e, (1, 3): o2 * e, (1, 4): o3 * ec, (1, 5): 0.0, (1, 6): J * e, (1, 7): J1 * ec,
        (2, 3): o3 * e, (2, 4): J1 * e, (2, 5): J * ec, (2, 6): 0.0, (2, 7): o3 * e,
        (3, 4): J * e, (3, 5): J1 * e, (3, 6): o3 * ec, (3, 7): 0.0,
        (4, 5): o3 * e, (4, 6): o2 * e, (4, 7): o3 * ec,
        (5, 6): o3 * e, (5, 7): o2 * e,
        (6, 7): o3 * e,
    }
    return _hermitian_from_upper(upper)


_CD_SLOTS = ((0, 4), (4, 0), (1, 5), (5, 1))


def build_counter_driving(kappa_rate: float) -> np.ndarray:
    h = np.zeros((DIM, DIM), dtype=complex)
    for r, c in _CD_SLOTS:
        h[r, c] = -kappa_rate
    return h


def cyclic_shift() -> np.ndarray:
    """Permutation P with (P v)[k] = v[k-1]; circulants commute with it."""
    return np.roll(np.eye(DIM), 1, axis=0)


def is_circulant(m: np.ndarray, tol: float = 1e-12) -> tuple[bool, float]:
    """Check ``m[r, c] == m[0, (c - r) % 8]`` and return the worst deviation."""
    m = np.asarray(m)
    dev = max_norm(m - circulant_from_row(m[0]))
    return dev <= tol, dev
