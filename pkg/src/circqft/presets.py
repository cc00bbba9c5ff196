"""Named parameter bundles for the figure scenarios.

Caption frequencies are quoted as ``X/2pi`` in kHz, so every value below is
stored in rad/ms as ``2 pi X``.  Variants whose name ends in ``-raw`` read a
caption that omits the ``/2pi`` literally (the number itself in rad/ms).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

TWO_PI = 2.0 * math.pi


def _k(x: float) -> float:
    return TWO_PI * x


@dataclass(frozen=True)
class Preset:
    name: str
    scheme: str                      # offset | rabi | ions
    params: dict
    citation: str
    kind: str                        # scenario run when none is requested
    sweep: dict = field(default_factory=dict)
    notes: str = ""


_FIG6_BASE = dict(J0=_k(2.3), J01=_k(2.1), upsilon0=_k(1.8), upsilon0p=_k(1.7), omega_prime=_k(0.3),
                  phi=math.pi / 4)
_FIG6_RAW = dict(J0=2.3, J01=2.1, upsilon0=1.8, upsilon0p=1.7, omega_prime=_k(0.3), phi=math.pi / 4)
_FIG7 = dict(upsilon0=_k(0.5), upsilon0p=_k(2.0), omega_prime=_k(0.3), phi=math.pi / 4)

PRESETS: dict[str, Preset] = {
    p.name: p
    for p in [
        Preset(
            "fig3", "offset",
            dict(J0=_k(1), J01=_k(2), d1=_k(120), d2=_k(60), d3=_k(30), omega_prime=_k(0.15), phi=math.pi / 2),
            "Fig. 3 caption: J0/2pi = 1 kHz, J01/2pi = 2 kHz, Delta/2pi = (120, 60, 30) kHz, "
            "phi = pi/2, omega'/2pi = 0.15 kHz",
            "spectrum",
        ),
        Preset(
            "fig4", "offset",
            dict(J0=_k(1), J01=_k(1), d1=_k(20), d2=_k(10), d3=_k(6), omega_prime=_k(0.505), phi=math.pi / 2),
            "Fig. 4 caption: J0/2pi = J01/2pi = 1 kHz, Delta/2pi = (20, 10, 6) kHz, phi = pi/2, "
            "omega' = 0.505 kHz (read as omega'/2pi)",
            "gate-fidelity",
        ),
        Preset(
            "fig4-raw", "offset",
            dict(J0=_k(1), J01=_k(1), d1=_k(20), d2=_k(10), d3=_k(6), omega_prime=0.505, phi=math.pi / 2),
            "Fig. 4 caption with omega' = 0.505 rad/ms taken literally",
            "gate-fidelity",
        ),
        Preset(
            "fig5", "rabi",
            dict(J0=_k(2.1), J01=_k(2.4), upsilon0=_k(1.9), upsilon0p=_k(2.0), omega_prime=_k(0.3),
                 phi=math.pi / 4),
            "Fig. 5 caption: J0/2pi = 2.1 kHz, Upsilon0/2pi = 1.9 kHz, J01/2pi = 2.4 kHz, "
            "Upsilon0'/2pi = 2 kHz, phi = pi/4, omega'/2pi = 0.3 kHz",
            "adiabatic-fidelity",
        ),
        Preset(
            "fig6a", "rabi", dict(_FIG6_BASE),
            "Fig. 6(A) caption: Upsilon0 = 1.8, Upsilon0' = 1.7, J01 = 2.1, J0 = 2.3 kHz, gate time "
            "t = 0.31 ms, swept over omega'",
            "entangle-sweep",
            dict(variable="omega_prime", start=_k(0.1), stop=_k(0.8), points=15, t_eval=0.31),
        ),
        Preset(
            "fig6a-raw", "rabi", dict(_FIG6_RAW),
            "Fig. 6(A) caption with the kHz values taken literally as rad/ms",
            "entangle-sweep",
            dict(variable="omega_prime", start=_k(0.1), stop=_k(0.8), points=15, t_eval=0.31),
        ),
        Preset(
            "fig6b", "rabi", dict(_FIG6_BASE, omega_prime=_k(0.5)),
            "Fig. 6(B) caption: values of (A), omega'/2pi = 0.5 kHz, J01 varied",
            "entangle-sweep",
            dict(variable="J01", start=_k(0.5), stop=_k(4.0), points=15, t_eval=0.31),
        ),
        Preset(
            "fig6c", "rabi", dict(_FIG6_BASE, omega_prime=_k(0.605)),
            "Fig. 6(C) caption: values of (A), omega'/2pi = 0.605 kHz, J0 varied",
            "entangle-sweep",
            dict(variable="J0", start=_k(0.5), stop=_k(4.0), points=15, t_eval=0.31),
        ),
        Preset(
            "fig7-blue", "rabi", dict(_FIG7, J01=_k(1.5), J0=_k(1.0)),
            "Fig. 7 caption, blue line: Upsilon0/2pi = 0.5 kHz, Upsilon0'/2pi = 2 kHz, J01 = 1.5 kHz, "
            "J0 = 1 kHz (omega' not given; 0.3 kHz assumed)",
            "counter-driving",
        ),
        Preset(
            "fig7-cyan", "rabi", dict(_FIG7, J01=_k(1.9), J0=_k(1.3)),
            "Fig. 7 caption, cyan line: J01 = 1.9 kHz, J0 = 1.3 kHz (omega' not given; 0.3 kHz assumed)",
            "counter-driving",
        ),
        Preset(
            "fig7-red", "rabi", dict(_FIG7, J01=_k(2.0), J0=_k(1.7)),
            "Fig. 7 caption, red line: J01 = 2 kHz, J0 = 1.7 kHz (omega' not given; 0.3 kHz assumed)",
            "counter-driving",
        ),
        Preset(
            "ions-demo", "ions",
            dict(nu=_k(1000.0), omega_x=_k(40.0), omega_z=_k(40.0), omega_alpha=_k(40.0),
                 mode_omegas=(_k(1020.0), _k(1050.0), _k(1100.0)),
                 eta1=(0.08, 0.06, 0.03), eta2=(0.08, -0.02, 0.05), eta3=(0.08, 0.05, -0.04)),
            "synthetic three-mode crystal, not from a caption",
            "ion-couplings",
        ),
    ]
}


def get(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; available: {', '.join(PRESETS)}") from None
