"""Compare the closed-form spectra with the numerical eigensystem.

    python3 scripts/closed_form_report.py [--points N]

Prints, along the fig3 offset sweep, the distance between the quartic
radicals (printed resolvent and corrected resolvent) and the numerical
spectrum; along the fig5 Rabi sweep, the same for the eight rotating
radicals and the residual ||Hv - <v|H|v> v|| of the mixing-angle vectors; and
the gap between kappa_rate and the derivative of the mixing angle.
"""

import argparse
import math

import numpy as np

from circqft import hamiltonians as ham
from circqft import presets as pr
from circqft import schedules as sc
from circqft import spectra as sp
from circqft.numerics import hermitian_eigensystem, max_norm


def offset_table(points):
    s = sc.OffsetSchedule(**pr.get("fig3").params)
    h = sc.offset_hamiltonian(s)
    print("offset scheme (fig3): multiset distance / max|E|")
    print(f"{'t/t_max':>8} {'corrected':>12} {'printed':>12}")
    for u in np.linspace(0, 1, points):
        t = u * s.t_max
        num = hermitian_eigensystem(h(t)).values
        scale = max(max_norm(h(t)), 1e-300)
        row = []
        for mode in ("corrected", "printed"):
            try:
                cf = sp.closed_form_offset_spectrum(*sc.offset_at(s, t), mode=mode)
                row.append(f"{sp.multiset_distance(cf.values(), num) / scale:12.2e}")
            except sp.FormulaDomainError:
                row.append(f"{'domain':>12}")
        print(f"{u:8.3f} " + " ".join(row))
    print()


def rotating_table(points):
    s = sc.RabiSchedule(**pr.get("fig5").params)
    h = sc.rabi_hamiltonian(s)
    print("Rabi scheme (fig5): eigenvalue distance and max eigenvector residual")
    print(f"{'t/t_max':>8} {'values':>12} {'vectors':>12} {'alpha':>9}")
    for u in np.linspace(0, 1, points):
        t = u * s.t_max
        J, J1, w2, w3 = sc.rabi_at(s, t)
        p = ham.RotatingParams(J, J1, w2, w3, s.phi)
        cf = sp.closed_form_rotating_spectrum(p)
        ht = h(t)
        num = hermitian_eigensystem(ht).values
        dist = sp.multiset_distance(cf.Lambda, num)
        v = sp.rotating_eigenvectors(p)
        hv = ht @ v
        rayleigh = np.einsum("ki,ki->i", v.conj(), hv).real
        res = np.linalg.norm(hv - v * rayleigh, axis=0).max()
        print(f"{u:8.3f} {dist:12.2e} {res:12.2e} {cf.alpha:9.4f}")
    print()


def rate_table(points):
    print("kappa_rate against the central difference of the mixing angle (fig7 presets)")
    for name in ("fig7-blue", "fig7-cyan", "fig7-red"):
        s = sc.RabiSchedule(**pr.get(name).params)
        h = 1e-5
        worst = 0.0
        for t in np.linspace(0.02, 0.98, points) * s.t_max:
            fd = (sp.mixing_angle_at(s, t + h) - sp.mixing_angle_at(s, t - h)) / (2 * h)
            worst = max(worst, abs(sp.kappa_rate(s, t) - fd))
        mid = s.t_max / 2
        fd_mid = (sp.mixing_angle_at(s, mid + h) - sp.mixing_angle_at(s, mid - h)) / (2 * h)
        print(f"  {name}: max gap {worst:.3f} rad/ms; at t_max/2 rate {sp.kappa_rate(s, mid):+.4f}, "
              f"derivative {fd_mid:+.4f}")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=11)
    args = ap.parse_args(argv)
    offset_table(args.points)
    rotating_table(args.points)
    rate_table(args.points)
    a = sp.closed_form_offset_spectrum(0, 0, 1, 2, 4, mode="printed").values()
    b = sp.closed_form_offset_spectrum(0, 0, 1, 2, 4).values()
    print(f"\nno couplings, detunings (1, 2, 4): corrected {np.round(b, 12).tolist()}")
    print(f"                                   printed   {np.round(a, 6).tolist()}")


if __name__ == "__main__":
    main()
