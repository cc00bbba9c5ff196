"""Recompute the regression baselines stored under tests/baselines/.

Run after an intentional numerical change; the regression tests compare
against these files to 1e-9.

    python3 scripts/update_baselines.py
"""

import json
import math
from pathlib import Path

import numpy as np

from circqft import dynamics as dy
from circqft import presets as pr
from circqft import schedules as sc

TUNE_STEPS = 600
OUT = Path(__file__).resolve().parent.parent / "tests" / "baselines"


def fig6a_sweep():
    p = pr.get("fig6a")
    sw = p.sweep
    base = sc.RabiSchedule(**p.params)
    w = np.linspace(sw["start"], sw["stop"], sw["points"])
    f = dy.entangle_sweep(base, w, sw["t_eval"], samples=400)
    return dict(omega_prime=w.tolist(), f_entangle=[None if math.isnan(x) else x for x in f],
                t_eval=sw["t_eval"], samples=400)


def fig5_adiabatic():
    s = sc.RabiSchedule(**pr.get("fig5").params)
    plain = dy.simulate_adiabatic(s, False, 2000)
    cd = dy.simulate_adiabatic(s, True, 2000)
    return dict(samples=2000, f_ad=plain.values[-1], f_ad_cd=cd.values[-1],
                landing=plain.meta["final_mode_assignment"].tolist())


def fig4_tuning():
    s = sc.OffsetSchedule(**pr.get("fig4").params)
    ph = sc.adiabatic_phases(s, 2000)
    res = sc.tune_detunings(s, steps=TUNE_STEPS)
    return dict(phases=list(ph.values), tune_steps=TUNE_STEPS, tuned_scale=res.scale, tuned_residuals=list(res.residuals),
                tuned_multiples=[int(k) for k in res.multiples], converged=bool(res.converged))


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for name, fn in [("fig6a_sweep", fig6a_sweep), ("fig5_adiabatic", fig5_adiabatic),
                     ("fig4_tuning", fig4_tuning)]:
        data = fn()
        (OUT / f"{name}.json").write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
        print(f"wrote {name}.json")


if __name__ == "__main__":
    main()
