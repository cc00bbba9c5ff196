"""Write the CSV series behind every figure preset into one directory.

    python3 scripts/reproduce_figures.py [OUTDIR] [--samples N]

Each preset runs its default scenario kind through the same code path as
the ``sim`` command; fig5 is also run with the counter-driving term.
"""

import argparse
import json
from pathlib import Path

from circqft import cli
from circqft import presets as pr


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("outdir", nargs="?", default="figures", type=Path)
    ap.add_argument("--samples", type=int, default=None)
    args = ap.parse_args(argv)

    jobs = [(name, p.kind, False) for name, p in pr.PRESETS.items()]
    jobs.append(("fig5", "adiabatic-fidelity", True))
    for name, kind, cd in jobs:
        cfg = cli.ScenarioConfig.from_preset(pr.get(name))
        table = cli.run_scenario(kind, cfg, args.samples, with_cd=cd)
        out = args.outdir / f"{name}-{kind}{'-cd' if cd else ''}.csv"
        cli.write_atomic(out, cli.format_csv(table))
        summary = {k: v for k, v in cli._jsonable(table.summary).items() if k != "warnings"}
        print(f"{out.name}: {json.dumps(summary, sort_keys=True)}")


if __name__ == "__main__":
    main()
