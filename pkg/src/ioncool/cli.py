"""Command-line front end: TOML/JSON config in, CSV + JSON artifacts out.

Every subcommand validates its configuration against a strict schema
(unknown keys are rejected), runs one study or building block, writes
``<study>_<hash>.csv`` and ``<study>_<hash>.json`` into the output
directory, and prints the headline metric.  Identical configurations
produce byte-identical CSV.

Exit codes: 0 success, 2 configuration/schema error, 3 solver
non-convergence, 4 combinatorial guard exceeded, 1 anything else.
"""

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import __version__
from .dynamics import (DutyCycleSchedule, FidelityModel, evolve,
                       mean_gate_fidelity, total_fidelity)
from .errors import (CalibrationError, ConfigError, ConvergenceError,
                     GuardError, InstabilityError)
from .heating import HeatingModel, with_d
from .limit import cooling_limit, quadratic_upper_bound
from .modes import com_mode_index, spectrum_for
from .optimize import (RABI_GAMMA, SweepSpec, enumerate_placements,
                       reference_heating_model, reference_kappa, spec_hash,
                       sweep_coolant_count, sweep_duty_cycle,
                       sweep_duty_cycle_with_radial, sweep_frequency_fill)
from .potential import (REFERENCE_POTENTIAL, TrapPotential, build_chain,
                        calibrate_equispacing, inner_spacings)
from .units import frequency_to_si, normalization_for_amu

# schema: section -> key -> type (None in a tuple admits string sentinels)
_SCHEMA = {
    "mass_amu": float,
    "potential": {"x2": float, "x4": float, "spacing_um": float},
    "chain": {"n_ions": int, "n_coolants": int, "n_qubits": int,
              "coolant_labels": list},
    "heating": {"alpha": float, "a0": float, "b0": float, "d": (float, str)},
    "damping": {"gamma": float, "rabi_khz": float},
    "schedule": {"gate_time_us": float, "gates_per_cycle": int,
                 "cooling_time_us": float, "total_gates": int,
                 "radial_overhead_us": float, "radial_factor": float,
                 "n_init": float},
    "fidelity": {"t2_s": float, "kappa": (float, str)},
    "sweep": {"cooling_time_us_min": float, "cooling_time_us_max": float,
              "cooling_time_us_step": float, "gates_per_cycle": list,
              "coolant_counts": list, "com_freq_khz": list,
              "fill_counts": list, "recalibrate": bool},
    "calibrate": {"reference_n0": float, "optimum_cooling_us": float},
}


def _check_schema(cfg, schema=_SCHEMA, path=""):
    for key, value in cfg.items():
        where = f"{path}.{key}" if path else key
        if key not in schema:
            raise ConfigError(f"unknown configuration key: {where}")
        expected = schema[key]
        if isinstance(expected, dict):
            if not isinstance(value, dict):
                raise ConfigError(f"{where} must be a table")
            _check_schema(value, expected, where)
            continue
        kinds = expected if isinstance(expected, tuple) else (expected,)
        if float in kinds and isinstance(value, (int, float)) \
                and not isinstance(value, bool):
            continue
        if int in kinds and isinstance(value, int) and not isinstance(value, bool):
            continue
        if not isinstance(value, tuple(k for k in kinds if isinstance(k, type))):
            raise ConfigError(f"{where} has invalid type {type(value).__name__}")
    return cfg


def load_config(path):
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {path}")
    if p.suffix == ".json":
        cfg = json.loads(p.read_text(encoding="utf-8"))
    else:
        with open(p, "rb") as fh:
            cfg = tomllib.load(fh)
    if not isinstance(cfg, dict):
        raise ConfigError("config root must be a table")
    return _check_schema(cfg)


def _parse_scalar(text):
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    if text.lower() in ("true", "false"):
        return text.lower() == "true"
    if text.startswith("["):
        try:
            return json.loads(text)
        except json.JSONDecodeError:
            pass
    return text


def apply_overrides(cfg, pairs):
    for raw in pairs:
        if "=" not in raw:
            raise ConfigError(f"--set expects key=value, got {raw!r}")
        key, value = raw.split("=", 1)
        parts = key.split(".")
        node = cfg
        for part in parts[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise ConfigError(f"cannot override through scalar {part}")
        node[parts[-1]] = _parse_scalar(value)
    return _check_schema(cfg)


# ---------------------------------------------------------------------------
# config resolution helpers

def _positive(cfg, where, value):
    if not value > 0:
        raise ConfigError(f"{where} must be positive")
    return value


def resolve_potential(cfg, n_ions, mass_amu):
    pot_cfg = cfg.get("potential", {})
    if "x2" in pot_cfg or "x4" in pot_cfg:
        try:
            return TrapPotential(float(pot_cfg.get("x2", 0.0)),
                                 float(pot_cfg.get("x4", 0.0)))
        except ValueError as err:
            raise ConfigError(str(err))
    if "spacing_um" in pot_cfg:
        spacing = _positive(cfg, "potential.spacing_um",
                            float(pot_cfg["spacing_um"])) * 1e-6
        pot, _ = calibrate_equispacing(n_ions, spacing, mass_amu)
        return pot
    return REFERENCE_POTENTIAL


def resolve_gamma(cfg):
    damp = cfg.get("damping", {})
    if "gamma" in damp:
        return _positive(cfg, "damping.gamma", float(damp["gamma"]))
    if "rabi_khz" in damp:
        rabi = float(damp["rabi_khz"]) * 1e3
        if rabi not in RABI_GAMMA:
            raise ConfigError(
                f"no damping rate tabulated for {damp['rabi_khz']} kHz; "
                "give damping.gamma explicitly")
        return RABI_GAMMA[rabi]
    return RABI_GAMMA[640e3]


def resolve_heating(cfg):
    h = cfg.get("heating", {})
    base = HeatingModel(alpha=float(h.get("alpha", 0.8)),
                        a0=float(h.get("a0", 8.2e17)),
                        b0=float(h.get("b0", 0.9)))
    d = h.get("d", "auto")
    if d == "auto":
        return with_d(base, reference_heating_model().d)
    if isinstance(d, str):
        raise ConfigError("heating.d must be a number or 'auto'")
    return with_d(base, _positive(cfg, "heating.d", float(d)))


def resolve_kappa(cfg):
    k = cfg.get("fidelity", {}).get("kappa", "auto")
    if k == "auto":
        return reference_kappa()
    if isinstance(k, str):
        raise ConfigError("fidelity.kappa must be a number or 'auto'")
    if k < 0:
        raise ConfigError("fidelity.kappa must be non-negative")
    return float(k)


def resolve_chain(cfg, mass_amu):
    ch = cfg.get("chain", {})
    n_coolants = int(ch.get("n_coolants", 2))
    n_qubits = int(ch.get("n_qubits", 14))
    if "n_ions" in ch:
        n_qubits = int(ch["n_ions"]) - n_coolants - 2
        if n_qubits < 0:
            raise ConfigError("chain.n_ions too small for the coolant count")
    labels = ch.get("coolant_labels")
    if labels is not None:
        labels = [int(l) for l in labels]
    pot = resolve_potential(cfg, n_coolants + n_qubits + 2, mass_amu)
    try:
        return build_chain(pot, n_coolants, n_qubits, mass_amu,
                           coolant_labels=labels)
    except ValueError as err:
        raise ConfigError(str(err))


def resolve_schedule(cfg):
    s = cfg.get("schedule", {})
    tau = float(s.get("cooling_time_us", 487.0)) * 1e-6
    radial = float(s.get("radial_overhead_us", 0.0)) * 1e-6
    if "radial_factor" in s:
        radial = float(s["radial_factor"]) * tau
    try:
        return DutyCycleSchedule(
            gate_time=float(s.get("gate_time_us", 250.0)) * 1e-6,
            gates_per_cycle=int(s.get("gates_per_cycle", 1)),
            cooling_time_per_cycle=tau,
            total_gates=int(s.get("total_gates", 500)),
            radial_overhead=radial)
    except ValueError as err:
        raise ConfigError(str(err))


def _cooling_grid(cfg):
    s = cfg.get("sweep", {})
    lo = float(s.get("cooling_time_us_min", 25.0))
    hi = float(s.get("cooling_time_us_max", 3500.0))
    step = float(s.get("cooling_time_us_step", 25.0))
    if not (lo > 0 and hi >= lo and step > 0):
        raise ConfigError("invalid cooling-time grid")
    n = int(round((hi - lo) / step)) + 1
    return tuple((lo + i * step) * 1e-6 for i in range(n))


# ---------------------------------------------------------------------------
# output

def _fmt(value):
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (dict, list, tuple)):
        return json.dumps(value, sort_keys=True, default=repr)
    return str(value)


def write_csv(path, columns, rows, config_hash):
    lines = [f"# ioncool {__version__} config_hash={config_hash}"]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(row[c]) for c in columns))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def write_json(path, payload, config_hash):
    payload = dict(payload)
    payload["tool_version"] = __version__
    payload["config_hash"] = config_hash
    path.write_text(json.dumps(payload, sort_keys=True, indent=2,
                               default=repr) + "\n", encoding="utf-8")


def emit(args, study, columns, rows, summary, cfg):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    h = spec_hash(cfg)
    written = []
    if args.format == "csv":
        csv_path = out / f"{study}_{h}.csv"
        write_csv(csv_path, columns, rows, h)
        written.append(csv_path)
    else:
        rec_path = out / f"{study}_{h}_records.json"
        write_json(rec_path, {"columns": list(columns),
                              "records": [dict(r) for r in rows]}, h)
        written.append(rec_path)
    json_path = out / f"{study}_{h}.json"
    write_json(json_path, summary, h)
    written.append(json_path)
    return written


# ---------------------------------------------------------------------------
# subcommands

def cmd_equilibrium(args, cfg):
    mass = float(cfg.get("mass_amu", 171.0))
    chain = resolve_chain(cfg, mass)
    norm = normalization_for_amu(mass)
    n = chain.n_ions
    rows = []
    for i, u in enumerate(chain.positions):
        role = ("coolant" if i in chain.coolant_indices else
                "endcap" if i in chain.endcap_indices else "qubit")
        rows.append({"index": i,
                     "label": _label_of(n, i),
                     "u_normalized": float(u),
                     "x_um": float(u * norm.d0 * 1e6),
                     "role": role})
    sp = inner_spacings(chain.positions)
    summary = {
        "n_ions": n,
        "mean_inner_spacing_um": float(np.mean(sp) * norm.d0 * 1e6),
        "inner_spacing_spread": float(np.std(sp) / np.mean(sp)),
        "x2": chain.potential.x2, "x4": chain.potential.x4,
    }
    files = emit(args, "equilibrium", ("index", "label", "u_normalized",
                                       "x_um", "role"), rows, summary, cfg)
    print(f"equilibrium: {n} ions, mean inner spacing "
          f"{summary['mean_inner_spacing_um']:.4f} um -> {files[0]}")
    return 0


def _label_of(n, i):
    from .potential import index_to_label
    return index_to_label(n, i)


def cmd_modes(args, cfg):
    mass = float(cfg.get("mass_amu", 171.0))
    chain = resolve_chain(cfg, mass)
    spectrum = spectrum_for(chain.potential, chain.positions)
    com = com_mode_index(spectrum)
    rows = []
    for i, w in enumerate(spectrum.frequencies):
        row = {"mode": i,
               "freq_normalized": float(w),
               "freq_hz": float(frequency_to_si(w) / (2.0 * np.pi))}
        for k in range(chain.n_ions):
            row[f"v_ion{k}"] = float(spectrum.mode_matrix[k, i])
        rows.append(row)
    summary = {"com_mode": com,
               "com_freq_hz": rows[com]["freq_hz"],
               "n_modes": len(rows)}
    columns = tuple(rows[0].keys())
    files = emit(args, "modes", columns, rows, summary, cfg)
    print(f"modes: COM at {summary['com_freq_hz']/1e3:.2f} kHz -> {files[0]}")
    return 0


def cmd_cooling_limit(args, cfg):
    mass = float(cfg.get("mass_amu", 171.0))
    chain = resolve_chain(cfg, mass)
    gamma = resolve_gamma(cfg)
    heating_model = resolve_heating(cfg)
    rows = []
    for method in ("exact-eigen", "perturbative", "linearized"):
        rep = cooling_limit(chain, heating_model, gamma, method)
        rows.append({"method": method, "n0": rep.n0, "h_quanta_per_s": rep.h,
                     "c_per_s": rep.c,
                     "omega0_hz": rep.omega0_si / (2.0 * np.pi),
                     "participation": rep.participation})
    if chain.potential.x2 > 0:
        bound = quadratic_upper_bound(chain.n_ions, len(chain.coolant_indices),
                                      chain.potential.x2, gamma, heating_model)
        rows.append({"method": bound.method, "n0": bound.n0,
                     "h_quanta_per_s": bound.h, "c_per_s": bound.c,
                     "omega0_hz": bound.omega0_si / (2.0 * np.pi),
                     "participation": bound.participation})
    summary = {"n0": rows[0]["n0"], "method": "exact-eigen",
               "gamma": gamma, "d": heating_model.d}
    files = emit(args, "cooling-limit", tuple(rows[0].keys()), rows, summary, cfg)
    print(f"cooling-limit: n0 = {rows[0]['n0']:.2f} quanta (exact) -> {files[0]}")
    return 0


def cmd_trajectory(args, cfg):
    mass = float(cfg.get("mass_amu", 171.0))
    chain = resolve_chain(cfg, mass)
    gamma = resolve_gamma(cfg)
    heating_model = resolve_heating(cfg)
    schedule = resolve_schedule(cfg)
    model = FidelityModel(t2=float(cfg.get("fidelity", {}).get("t2_s", 0.5)),
                          kappa=resolve_kappa(cfg))
    rep = cooling_limit(chain, heating_model, gamma, "exact-eigen")
    n_init = float(cfg.get("schedule", {}).get("n_init", rep.n0))
    traj = evolve(n_init, schedule, rep.h, rep.c, fidelity=model)
    rows = [{"t_seconds": t, "n_quanta": n, "phase_label": p}
            for t, n, p in traj.csv_rows()]
    summary = {"n0": rep.n0,
               "mean_gate_fidelity": mean_gate_fidelity(traj),
               "total_fidelity": total_fidelity(traj),
               "wall_time_s": schedule.total_wall_time(),
               "duty_cycle": schedule.duty_cycle}
    files = emit(args, "trajectory", ("t_seconds", "n_quanta", "phase_label"),
                 rows, summary, cfg)
    print(f"trajectory: mean gate fidelity {summary['mean_gate_fidelity']:.6f}, "
          f"total {summary['total_fidelity']:.4f} -> {files[0]}")
    return 0


def cmd_placement_scan(args, cfg):
    mass = float(cfg.get("mass_amu", 171.0))
    ch = cfg.get("chain", {})
    n_ions = int(ch.get("n_ions", 15))
    n_coolants = int(ch.get("n_coolants", 2))
    gamma = resolve_gamma(cfg)
    pot = resolve_potential(cfg, n_ions, mass)
    heating_model = resolve_heating(cfg)
    records = enumerate_placements(n_ions, n_coolants, gamma, potential=pot,
                                   heating_model=heating_model,
                                   threads=args.threads)
    rows = [{"rank": i, "coolant_labels": r["coolant_labels"],
             "participation": r["participation"],
             "cooling_rate_si": r["cooling_rate_si"], "n0": r["n0"]}
            for i, r in enumerate(records)]
    summary = {"best_labels": list(records[0]["coolant_labels"]),
               "best_n0": records[0]["n0"],
               "worst_labels": list(records[-1]["coolant_labels"]),
               "worst_n0": records[-1]["n0"],
               "n_configurations": len(records)}
    files = emit(args, "placement-scan",
                 ("rank", "coolant_labels", "participation",
                  "cooling_rate_si", "n0"), rows, summary, cfg)
    print(f"placement-scan: best {summary['best_labels']} with n0 = "
          f"{summary['best_n0']:.2f} -> {files[0]}")
    return 0


def _sweep_spec_from(cfg, study):
    s = cfg.get("sweep", {})
    return SweepSpec(
        study=study,
        gamma=resolve_gamma(cfg),
        n_coolants=int(cfg.get("chain", {}).get("n_coolants", 6)),
        n_qubits=int(cfg.get("chain", {}).get("n_qubits", 14)),
        total_gates=int(cfg.get("schedule", {}).get("total_gates", 500)),
        gate_time=float(cfg.get("schedule", {}).get("gate_time_us", 250.0)) * 1e-6,
        t2=float(cfg.get("fidelity", {}).get("t2_s", 0.5)),
        kappa=resolve_kappa(cfg),
        heating=resolve_heating(cfg),
        cooling_times=_cooling_grid(cfg),
        gates_per_cycle=tuple(int(g) for g in s.get("gates_per_cycle", [1])),
        coolant_counts=tuple(int(c) for c in s.get("coolant_counts",
                                                   list(range(1, 11)))),
        com_frequencies_si=tuple(2.0 * np.pi * float(f) * 1e3
                                 for f in s.get("com_freq_khz",
                                                [150, 200, 250, 300, 350, 400])),
        fill_counts=tuple(int(c) for c in s.get("fill_counts",
                                                list(range(1, 22, 2)))),
        recalibrate=bool(s.get("recalibrate", True)),
    )


def _emit_sweep(args, cfg, result):
    rows = [r for r in result.records if "failed" not in r]
    summary = {"argmax": result.argmax, "objective": result.objective,
               "provenance": result.provenance}
    files = emit(args, result.study, result.columns, rows, summary, cfg)
    return files


def cmd_duty_scan(args, cfg):
    spec = _sweep_spec_from(cfg, "duty-scan")
    result = sweep_duty_cycle(spec, threads=args.threads)
    files = _emit_sweep(args, cfg, result)
    best = result.argmax
    print(f"duty-scan: optimum {best['cooling_time_s']*1e6:.0f} us cooling "
          f"({best['axial_duty_cycle']*100:.2f}% duty) at "
          f"{best['gates_per_cycle']} gate(s)/cycle, total fidelity "
          f"{best['total_fidelity']:.4f} -> {files[0]}")
    return 0


def cmd_duty_scan_radial(args, cfg):
    factor = float(cfg.get("schedule", {}).get("radial_factor", 1.0))
    spec = _sweep_spec_from(cfg, "duty-scan-radial")
    result = sweep_duty_cycle_with_radial(spec, overhead_factor=factor,
                                          threads=args.threads)
    files = _emit_sweep(args, cfg, result)
    best = result.argmax
    print(f"duty-scan-radial: optimum {best['cooling_time_s']*1e6:.0f} us "
          f"({best['axial_duty_cycle']*100:.2f}% axial duty) -> {files[0]}")
    return 0


def cmd_coolant_scan(args, cfg):
    spec = _sweep_spec_from(cfg, "coolant-scan")
    sched = cfg.get("schedule", {})
    if "cooling_time_us" in sched:
        spec = _replace_cooling(spec, (float(sched["cooling_time_us"]) * 1e-6,))
    result = sweep_coolant_count(spec)
    files = _emit_sweep(args, cfg, result)
    best = result.argmax
    print(f"coolant-scan: best N_C = {best['n_coolants']} with mean gate "
          f"fidelity {best['mean_fidelity']:.6f} -> {files[0]}")
    return 0


def _replace_cooling(spec, taus):
    from dataclasses import replace
    return replace(spec, cooling_times=taus)


def cmd_freq_fill_scan(args, cfg):
    spec = _sweep_spec_from(cfg, "freq-fill-scan")
    result = sweep_frequency_fill(spec)
    files = _emit_sweep(args, cfg, result)
    best = result.argmax
    print(f"freq-fill-scan: minimum n0 = {best['n0']:.2f} at "
          f"{best['omega0_si']/(2*np.pi*1e3):.0f} kHz, fill "
          f"{best['fill_fraction']:.2f} -> {files[0]}")
    return 0


def cmd_calibrate(args, cfg):
    cal = cfg.get("calibrate", {})
    heating_model = reference_heating_model()
    target = float(cal.get("optimum_cooling_us", 487.0)) * 1e-6
    kappa = reference_kappa(target)
    rows = [{"quantity": "heating_d", "value": heating_model.d},
            {"quantity": "kappa", "value": kappa}]
    summary = {"heating_d": heating_model.d, "kappa": kappa,
               "reference_n0": float(cal.get("reference_n0", 29.0)),
               "optimum_cooling_us": target * 1e6}
    files = emit(args, "calibrate", ("quantity", "value"), rows, summary, cfg)
    print(f"calibrate: D = {heating_model.d:.6e}, kappa = {kappa:.6e} "
          f"-> {files[0]}")
    return 0


_COMMANDS = {
    "equilibrium": cmd_equilibrium,
    "modes": cmd_modes,
    "cooling-limit": cmd_cooling_limit,
    "trajectory": cmd_trajectory,
    "placement-scan": cmd_placement_scan,
    "coolant-scan": cmd_coolant_scan,
    "duty-scan": cmd_duty_scan,
    "duty-scan-radial": cmd_duty_scan_radial,
    "freq-fill-scan": cmd_freq_fill_scan,
    "calibrate": cmd_calibrate,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ioncool",
        description="Sympathetic-cooling studies for trapped-ion chains")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", default=None,
                       help="TOML or JSON configuration file")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VAL",
                       help="override a config value (repeatable)")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--threads", type=int,
                       default=int(os.environ.get("IONCOOL_THREADS", "1")),
                       help="worker threads for sweep grids (0 = auto)")
        p.add_argument("--format", choices=("csv", "json"), default="csv",
                       help="records format (a JSON summary is always written)")
    return parser


def _error_json(kind, message, code):
    return json.dumps({"error": {"type": kind, "message": message,
                                 "exit_code": code}}, sort_keys=True)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else {}
        cfg = apply_overrides(cfg, args.set)
        return _COMMANDS[args.command](args, cfg)
    except ConfigError as err:
        print(_error_json("config", str(err), 2), file=sys.stderr)
        return 2
    except (ConvergenceError, CalibrationError, InstabilityError) as err:
        print(_error_json("convergence", str(err), 3), file=sys.stderr)
        return 3
    except GuardError as err:
        print(_error_json("guard", str(err), 4), file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
