"""``sim``: run figure scenarios and write CSV series.

    sim <kind> --preset NAME | --config FILE [--samples N] [--out PATH] [--with-cd] [--seed N]
    sim presets [NAME]
    sim export-config NAME [--json]

Exit status: 0 success, 2 configuration error, 3 precondition violation,
4 numerical failure.  Failures print one JSON object on stderr.
"""

from __future__ import annotations

import argparse
import configparser
import io
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import dynamics as dy
from . import ioncoup as ic
from . import presets as pr
from . import schedules as sc
from . import spectra as sp
from .numerics import NonHermitianError, PropagationError

KINDS = ("spectrum", "gate-fidelity", "adiabatic-fidelity", "entangle-sweep", "counter-driving", "ion-couplings")
DEFAULT_SEED = 20240601
EXIT_OK, EXIT_CONFIG, EXIT_PRECONDITION, EXIT_NUMERIC = 0, 2, 3, 4

_SCHEME_KEYS = {
    "offset": ("J0", "J01", "d1", "d2", "d3", "omega_prime", "phi"),
    "rabi": ("J0", "J01", "upsilon0", "upsilon0p", "omega_prime", "phi"),
    "ions": ("nu", "omega_x", "omega_z", "omega_alpha", "mode_omegas", "eta1", "eta2", "eta3"),
}
_LIST_KEYS = {"mode_omegas", "eta1", "eta2", "eta3"}
_SWEEP_KEYS = ("variable", "start", "stop", "points", "t_eval")


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# configuration

@dataclass
class ScenarioConfig:
    name: str
    scheme: str
    params: dict
    sweep: dict = field(default_factory=dict)
    kind: str | None = None
    samples: int | None = None

    @classmethod
    def from_preset(cls, p: pr.Preset) -> "ScenarioConfig":
        return cls(p.name, p.scheme, dict(p.params), dict(p.sweep), p.kind)

    def to_ini(self) -> str:
        cp = configparser.ConfigParser(interpolation=None)
        cp.optionxform = str
        head = {"name": self.name, "scheme": self.scheme}
        if self.kind:
            head["kind"] = self.kind
        if self.samples is not None:
            head["samples"] = str(self.samples)
        cp["scenario"] = head
        cp["parameters"] = {k: _fmt(v) for k, v in self.params.items()}
        if self.sweep:
            cp["sweep"] = {k: _fmt(v) for k, v in self.sweep.items()}
        buf = io.StringIO()
        cp.write(buf)
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps(
            dict(scenario=dict(name=self.name, scheme=self.scheme, kind=self.kind, samples=self.samples),
                 parameters={k: list(v) if isinstance(v, tuple) else v for k, v in self.params.items()},
                 sweep=self.sweep),
            indent=2, sort_keys=True,
        )

    @classmethod
    def from_ini(cls, text: str) -> "ScenarioConfig":
        cp = configparser.ConfigParser(interpolation=None)
        cp.optionxform = str
        try:
            cp.read_string(text)
        except configparser.Error as exc:
            raise ConfigError(f"unreadable config: {exc}") from exc
        if "scenario" not in cp or "parameters" not in cp:
            raise ConfigError("config needs [scenario] and [parameters] sections")
        head = cp["scenario"]
        scheme = head.get("scheme", "")
        if scheme not in _SCHEME_KEYS:
            raise ConfigError(f"unknown scheme {scheme!r}")
        params = {}
        for key in _SCHEME_KEYS[scheme]:
            if key not in cp["parameters"]:
                raise ConfigError(f"missing parameter {key!r}")
            params[key] = _parse(key, cp["parameters"][key])
        extra = set(cp["parameters"]) - set(_SCHEME_KEYS[scheme])
        if extra:
            raise ConfigError(f"unknown parameters {sorted(extra)}")
        sweep = {}
        if "sweep" in cp:
            for key in _SWEEP_KEYS:
                if key not in cp["sweep"]:
                    raise ConfigError(f"sweep is missing {key!r}")
            sweep = dict(
                variable=cp["sweep"]["variable"],
                start=_num(cp["sweep"]["start"]),
                stop=_num(cp["sweep"]["stop"]),
                points=int(_num(cp["sweep"]["points"])),
                t_eval=_num(cp["sweep"]["t_eval"]),
            )
        samples = head.get("samples")
        return cls(head.get("name", "config"), scheme, params, sweep, head.get("kind"),
                   int(samples) if samples else None)


def _fmt(v) -> str:
    if isinstance(v, (tuple, list)):
        return " ".join(repr(float(x)) for x in v)
    if isinstance(v, str):
        return v
    if isinstance(v, int) and not isinstance(v, bool):
        return str(v)
    return repr(float(v))


def _num(text: str) -> float:
    try:
        return float(text)
    except ValueError as exc:
        raise ConfigError(f"not a number: {text!r}") from exc


def _parse(key: str, text: str):
    if key in _LIST_KEYS:
        return tuple(_num(x) for x in text.split())
    return _num(text)


# ---------------------------------------------------------------------------
# scenario execution

def build_schedule(cfg: ScenarioConfig):
    p = cfg.params
    if cfg.scheme == "offset":
        return sc.OffsetSchedule(p["J0"], p["J01"], p["d1"], p["d2"], p["d3"], p["omega_prime"], p["phi"])
    if cfg.scheme == "rabi":
        return sc.RabiSchedule(p["J0"], p["J01"], p["upsilon0"], p["upsilon0p"], p["omega_prime"], p["phi"])
    raise ValueError(f"scheme {cfg.scheme!r} has no schedule")


def _require(cfg: ScenarioConfig, *schemes: str, kind: str) -> None:
    if cfg.scheme not in schemes:
        raise ValueError(f"{kind} needs a {' or '.join(schemes)} scenario, got {cfg.scheme}")


@dataclass
class Table:
    header: list[str]
    rows: np.ndarray
    summary: dict = field(default_factory=dict)


def run_scenario(kind: str, cfg: ScenarioConfig, samples: int | None = None, with_cd: bool = False) -> Table:
    if kind not in KINDS:
        raise ConfigError(f"unknown kind {kind!r}; choose from {', '.join(KINDS)}")
    n = samples or cfg.samples or dy.DEFAULT_SAMPLES
    if n < 2:
        raise ValueError("samples must be >= 2")

    if kind == "spectrum":
        _require(cfg, "offset", "rabi", kind=kind)
        s = build_schedule(cfg)
        h = sc.offset_hamiltonian(s) if cfg.scheme == "offset" else sc.rabi_hamiltonian(s)
        b = sp.track_spectrum(h, np.linspace(0.0, s.t_max, n))
        rows = np.column_stack([b.times, b.values.T])
        return Table(["time_ms"] + [f"branch{i}" for i in range(8)], rows,
                     dict(t_max_ms=s.t_max, min_gap=float(b.min_gaps.min()), warnings=b.warnings))

    if kind == "gate-fidelity":
        _require(cfg, "offset", kind=kind)
        s = build_schedule(cfg)
        _, f = dy.simulate_offset_gate(s, n)
        return Table(["time_ms", "f_gate"], np.column_stack([f.times, f.values]),
                     dict(t_max_ms=s.t_max, f_gate_final=float(f.values[-1]), f_gate_max=float(f.values.max()),
                          f_gate_at_0_4875_ms=f.at(0.4875) if s.t_max >= 0.4875 else None,
                          unitarity_drift=f.meta["unitarity_drift"]))

    if kind == "adiabatic-fidelity":
        _require(cfg, "rabi", kind=kind)
        s = build_schedule(cfg)
        f = dy.simulate_adiabatic(s, with_cd, n)
        return Table(["time_ms", "f_ad"], np.column_stack([f.times, f.values]),
                     dict(t_max_ms=s.t_max, f_ad_final=float(f.values[-1]), counter_driving=with_cd,
                          unitarity_drift=f.meta["unitarity_drift"]))

    if kind == "counter-driving":
        _require(cfg, "rabi", kind=kind)
        s = build_schedule(cfg)
        t = np.linspace(0.0, s.t_max, n)
        k = np.array([sp.kappa_rate(s, x) for x in t])
        return Table(["time_ms", "kappa_rate"], np.column_stack([t, k]),
                     dict(t_max_ms=s.t_max, kappa_rate_max=float(k.max())))

    if kind == "entangle-sweep":
        _require(cfg, "rabi", kind=kind)
        if not cfg.sweep:
            raise ConfigError("entangle-sweep needs a [sweep] section")
        sw = cfg.sweep
        if sw["variable"] not in ("omega_prime", "J0", "J01", "upsilon0", "upsilon0p"):
            raise ConfigError(f"cannot sweep {sw['variable']!r}")
        values = np.linspace(sw["start"], sw["stop"], int(sw["points"]))
        per_run = samples or cfg.samples or 400
        fids = []
        for v in values:
            s = build_schedule(ScenarioConfig(cfg.name, cfg.scheme, dict(cfg.params, **{sw["variable"]: float(v)})))
            if sw["t_eval"] > s.t_max * (1 + 1e-12):
                fids.append(float("nan"))
            else:
                fids.append(dy.entangle_fidelity(s, per_run, sw["t_eval"]).values[-1])
        fids = np.array(fids)
        col = f"{sw['variable']}_rad_per_ms"
        return Table([col, "f_entangle"], np.column_stack([values, fids]),
                     dict(t_eval_ms=sw["t_eval"], f_entangle_max=float(np.nanmax(fids)) if np.isfinite(fids).any()
                          else None))

    # ion-couplings
    _require(cfg, "ions", kind=kind)
    p = cfg.params
    modes = ic.ModeSet(np.array(p["mode_omegas"]), np.array([p["eta1"], p["eta2"], p["eta3"]]))
    drive = ic.DriveParams(p["nu"], p["omega_x"], p["omega_z"], p["omega_alpha"])
    raw = ic.effective_couplings(modes, drive)
    best = ic.circulant_point_search(modes, drive)
    rows = np.array([
        [1.0, raw.J1, raw.J2, raw.J3, raw.J, ic.circulant_residual(raw)],
        [best.scale, best.couplings.J1, best.couplings.J2, best.couplings.J3, best.couplings.J, best.residual],
    ])
    return Table(["drive_scale", "J1", "J2", "J3", "J", "residual"], rows, dict(advisories=list(best.advisories)))


def format_csv(t: Table) -> str:
    lines = [",".join(t.header)]
    for row in t.rows:
        lines.append(",".join(_cell(x) for x in row))
    return "\n".join(lines) + "\n"


def _cell(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    if x == 0.0:
        x = 0.0  # drop the sign of negative zero
    return format(x, ".12g")


def write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj


# ---------------------------------------------------------------------------
# presets listing

def describe_preset(p: pr.Preset) -> str:
    lines = [f"{p.name}  [{p.scheme}, default kind: {p.kind}]", f"  source: {p.citation}"]
    for key, val in p.params.items():
        if key == "phi":
            lines.append(f"  phi = {val / math.pi:.6g} pi")
        elif isinstance(val, tuple):
            lines.append(f"  {key} = {', '.join(f'{v:.6g}' for v in val)}")
        elif p.scheme != "ions":
            lines.append(f"  {key}/2pi = {val / (2 * math.pi):.6g} kHz")
        else:
            lines.append(f"  {key} = {val:.6g} rad/ms")
    if p.scheme in ("offset", "rabi"):
        lines.append(f"  t_max = {math.pi / (2 * p.params['omega_prime']):.6g} ms (computed)")
    if p.sweep:
        sw = p.sweep
        lines.append(f"  t = {sw['t_eval']:g} ms sweep over {sw['variable']} from {sw['start'] / (2 * math.pi):.6g}"
                     f" to {sw['stop'] / (2 * math.pi):.6g} kHz ({sw['points']} points)")
    return "\n".join(lines)


def list_presets(name: str | None = None) -> str:
    if name is not None:
        return describe_preset(pr.get(name))
    return "\n\n".join(describe_preset(p) for p in pr.PRESETS.values())


# ---------------------------------------------------------------------------
# entry point

def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sim", description="Three-qubit circulant QFT scenarios")
    sub = ap.add_subparsers(dest="command", required=True)
    for kind in KINDS:
        p = sub.add_parser(kind, help=f"run the {kind} scenario")
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--preset")
        src.add_argument("--config", type=Path)
        p.add_argument("--samples", type=int)
        p.add_argument("--out", type=Path)
        p.add_argument("--with-cd", action="store_true", help="add the counter-driving term")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p = sub.add_parser("presets", help="list presets")
    p.add_argument("name", nargs="?")
    p = sub.add_parser("export-config", help="print a preset as a config file")
    p.add_argument("name")
    p.add_argument("--json", action="store_true")
    return ap


def _fail(status: int, exc: BaseException) -> int:
    record = dict(status=status, error=type(exc).__name__, message=str(exc))
    print(json.dumps(record), file=sys.stderr)
    return status


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "presets":
            print(list_presets(args.name))
            return EXIT_OK
        if args.command == "export-config":
            cfg = ScenarioConfig.from_preset(pr.get(args.name))
            print(cfg.to_json() if args.json else cfg.to_ini(), end="" if not args.json else "\n")
            return EXIT_OK

        if args.preset:
            cfg = ScenarioConfig.from_preset(pr.get(args.preset))
        else:
            try:
                text = args.config.read_text(encoding="utf-8")
            except OSError as exc:
                raise ConfigError(f"cannot read {args.config}: {exc}") from exc
            cfg = ScenarioConfig.from_ini(text)
        if args.samples is not None and args.samples < 2:
            raise ValueError("--samples must be >= 2")
        table = run_scenario(args.command, cfg, args.samples, args.with_cd)
        out = args.out or Path(f"{cfg.name}-{args.command}.csv")
        write_atomic(out, format_csv(table))
        meta = dict(kind=args.command, scenario=cfg.name, scheme=cfg.scheme, samples=args.samples or cfg.samples,
                    with_cd=args.with_cd, seed=args.seed, parameters=cfg.params, sweep=cfg.sweep,
                    columns=table.header, summary=table.summary)
        write_atomic(out.with_name(out.name + ".meta.json"), json.dumps(_jsonable(meta), indent=2, sort_keys=True) + "\n")
        print(json.dumps(_jsonable(dict(out=str(out), **table.summary)), sort_keys=True))
        return EXIT_OK
    except (ConfigError, KeyError) as exc:
        return _fail(EXIT_CONFIG, exc)
    except (PropagationError, NonHermitianError, ArithmeticError, FloatingPointError) as exc:
        return _fail(EXIT_NUMERIC, exc)
    except ValueError as exc:
        return _fail(EXIT_PRECONDITION, exc)


if __name__ == "__main__":
    sys.exit(main())
