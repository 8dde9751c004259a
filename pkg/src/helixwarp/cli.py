"""Config-driven command line front end.

    helixwarp <flux-window|trace|geometry|profile|identities>
              --config <path> [--out <dir>] [--threads N]

Runs are deterministic given a config: no wall-clock state enters any output,
the resolved configuration (defaults filled in) is written next to the
artifacts, and every output embeds the sha256 of that resolved config.

Exit codes: 0 success, 2 configuration error, 3 empty flux window,
4 exact-solution residual gate failed.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import diagnostics, geometry, streamline
from .errors import ConfigError, EmptyWindowError, HelixwarpError, InvertibilityError
from .field import AxisymmetricField, CylinderDomain, field_from_config
from .flux import find_flux_windows, flux_from_config
from .trajectory import (CSV_COLUMNS, Curve, Seed, integrate_time,
                         reparam_arc_length)

GATE_TOLERANCE = 1e-8

# ---------------------------------------------------------------------------
# configuration schema
# ---------------------------------------------------------------------------

_FLUX_KEYS = {
    "uniform": {"kind", "value"},
    "power_law": {"kind", "beta"},
    "oscillating": {"kind", "beta1", "beta2"},
}
_SWIRL_KEYS = {
    "linear": {"kind", "slope"},
    "gaussian": {"kind", "amp", "width"},
}
_FIELD_KEYS = {
    "uniform_axial": {"kind"},
    "swirl_column": {"kind", "swirl"},
    "stream_function": {"kind", "amplitude", "z_center", "z_decay",
                        "amp_mode", "swirl"},
}

DEFAULT_CONFIG = {
    "domain": {"r_max": 1.0, "z_min": 0.0, "z_max": 4.0, "t_max": 1.0},
    "flux": {"kind": "oscillating", "beta1": 1.0, "beta2": 2.0},
    "field": {"kind": "swirl_column", "swirl": {"kind": "linear", "slope": 1.0}},
    "seeds": [[0.5, 0.0, 0.5]],
    "epsilon": 0.1,
    "tolerances": {
        "integrator_tol": 1e-10,
        "fd_step": 1e-4,
        "resolution": 200_000,
        "profile_drbar_lo": 0.5,
        "profile_drbar_hi": 2.0,
        "profile_max_norm": 10.0,
    },
    "outputs": "out",
    "trace": {"t_end": 0.9, "n_samples": 200},
    "geometry": {"t_end": 0.9, "n_samples": 257, "stencil": 5},
    "profile": {"t_list": [0.2, 0.4, 0.6], "n_rbar0": 17, "n_z": 25,
                "rbar0_lo": 0.15, "rbar0_hi": 0.85},
    "identities": {"t_probes": [0.5], "dominance": True,
                   "n_dominance": 8, "match_tol": 1e-4},
}


def _check_keys(section: dict, allowed, where: str) -> None:
    unknown = set(section) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown keys in {where}: {sorted(unknown)}")


def _merged(defaults: dict, given: dict, where: str) -> dict:
    _check_keys(given, defaults, where)
    out = dict(defaults)
    out.update(given)
    return out


def resolve_config(raw: dict) -> dict:
    """Validate a raw config mapping and fill defaults. Unknown keys reject."""
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    _check_keys(raw, DEFAULT_CONFIG, "config root")
    cfg = {}
    cfg["domain"] = _merged(DEFAULT_CONFIG["domain"], raw.get("domain", {}), "domain")

    for name, kind_keys in (("flux", _FLUX_KEYS),):
        section = raw.get(name, DEFAULT_CONFIG[name])
        kind = section.get("kind")
        if kind not in kind_keys:
            raise ConfigError(f"{name}.kind must be one of {sorted(kind_keys)}")
        _check_keys(section, kind_keys[kind], name)
        cfg[name] = dict(section)

    fld = raw.get("field", DEFAULT_CONFIG["field"])
    kind = fld.get("kind")
    if kind not in _FIELD_KEYS:
        raise ConfigError(f"field.kind must be one of {sorted(_FIELD_KEYS)}")
    _check_keys(fld, _FIELD_KEYS[kind], "field")
    fld = dict(fld)
    if "swirl" in fld and fld["swirl"] is not None:
        skind = fld["swirl"].get("kind")
        if skind not in _SWIRL_KEYS:
            raise ConfigError(f"swirl.kind must be one of {sorted(_SWIRL_KEYS)}")
        _check_keys(fld["swirl"], _SWIRL_KEYS[skind], "field.swirl")
    cfg["field"] = fld

    seeds = raw.get("seeds", DEFAULT_CONFIG["seeds"])
    if (not isinstance(seeds, list) or not seeds
            or any(not isinstance(s, list) or len(s) != 3 for s in seeds)):
        raise ConfigError("seeds must be a non-empty list of [r0, theta0, z0]")
    cfg["seeds"] = [[float(x) for x in s] for s in seeds]

    eps = float(raw.get("epsilon", DEFAULT_CONFIG["epsilon"]))
    if not 0.0 < eps < 1.0:
        raise ConfigError("epsilon must lie in (0, 1)")
    cfg["epsilon"] = eps

    cfg["tolerances"] = _merged(DEFAULT_CONFIG["tolerances"],
                                raw.get("tolerances", {}), "tolerances")
    cfg["outputs"] = str(raw.get("outputs", DEFAULT_CONFIG["outputs"]))
    for name in ("trace", "geometry", "profile", "identities"):
        cfg[name] = _merged(DEFAULT_CONFIG[name], raw.get(name, {}), name)
    return cfg


def config_hash(cfg: dict) -> str:
    return hashlib.sha256(
        json.dumps(cfg, sort_keys=True).encode("utf-8")).hexdigest()


def load_config(path: str | Path) -> dict:
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {p}")
    try:
        raw = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return resolve_config(raw)


def build_objects(cfg: dict) -> tuple[CylinderDomain, AxisymmetricField]:
    d = cfg["domain"]
    domain = CylinderDomain(r_max=float(d["r_max"]), z_min=float(d["z_min"]),
                            z_max=float(d["z_max"]), t_max=float(d["t_max"]))
    flux = flux_from_config(cfg["flux"])
    field = field_from_config(cfg["field"], domain, flux)
    return domain, field


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------

def _write_json(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")


def _write_csv(path: Path, header: list[str], rows, sha: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        fh.write(f"# config_sha256={sha}\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(x) if isinstance(x, float) else x for x in row])


def _prepare_run(cfg: dict, out_dir: Path) -> str:
    sha = config_hash(cfg)
    resolved = dict(cfg)
    resolved["config_sha256"] = sha
    _write_json(out_dir / "resolved_config.json", resolved)
    return sha


def _seeds(cfg: dict) -> list[Seed]:
    return [Seed(r0=s[0], theta0=s[1], z0=s[2]) for s in cfg["seeds"]]


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_flux_window(cfg: dict, out_dir: Path, threads: int = 1) -> int:
    sha = _prepare_run(cfg, out_dir)
    flux = flux_from_config(cfg["flux"])
    window = find_flux_windows(flux, cfg["epsilon"],
                               int(cfg["tolerances"]["resolution"]))
    _write_json(out_dir / "windows.json", {
        "config_sha256": sha,
        "epsilon": window.epsilon,
        "samples_per_unit": window.samples_per_unit,
        "count": len(window.intervals),
        "intervals": [list(iv) for iv in window.intervals],
    })
    return 3 if window.is_empty else 0


def _trace_one(field: AxisymmetricField, seed: Seed, t_end: float, tol: float,
               n_samples: int) -> tuple[Curve | None, str | None]:
    try:
        return integrate_time(field, seed, t_end, tol=tol,
                              n_samples=n_samples), None
    except HelixwarpError as exc:
        return None, f"{type(exc).__name__}: {exc}"


def cmd_trace(cfg: dict, out_dir: Path, threads: int = 1) -> int:
    sha = _prepare_run(cfg, out_dir)
    _, field = build_objects(cfg)
    seeds = _seeds(cfg)
    t_end = float(cfg["trace"]["t_end"])
    tol = float(cfg["tolerances"]["integrator_tol"])
    n_samples = int(cfg["trace"]["n_samples"])

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(
                lambda s: _trace_one(field, s, t_end, tol, n_samples), seeds))
    else:
        results = [_trace_one(field, s, t_end, tol, n_samples) for s in seeds]

    manifest = []
    for i, (seed, (curve, error)) in enumerate(zip(seeds, results)):
        entry: dict = {"seed_index": i,
                       "seed": [seed.r0, seed.theta0, seed.z0]}
        if error is not None:
            entry["status"] = "error"
            entry["error"] = error
        else:
            name = f"trajectory_{i:03d}.csv"
            _write_csv(out_dir / name, CSV_COLUMNS, curve.csv_rows(), sha)
            entry["status"] = curve.status
            entry["file"] = name
            entry["n_samples"] = len(curve)
            entry["min_r"] = float(np.min(curve.r))
        manifest.append(entry)
    _write_json(out_dir / "manifest.json",
                {"config_sha256": sha, "traces": manifest})
    return 0


FRAME_COLUMNS = ["seed_index", "s", "tau_x", "tau_y", "tau_z", "n_x", "n_y",
                 "n_z", "b_x", "b_y", "b_z", "kappa", "torsion", "ds_kappa",
                 "degenerate_flag"]


def cmd_geometry(cfg: dict, out_dir: Path, threads: int = 1) -> int:
    sha = _prepare_run(cfg, out_dir)
    _, field = build_objects(cfg)
    tol = float(cfg["tolerances"]["integrator_tol"])
    t_end = float(cfg["geometry"]["t_end"])
    n_samples = int(cfg["geometry"]["n_samples"])
    stencil = int(cfg["geometry"]["stencil"])

    rows = []
    notes = []
    for i, seed in enumerate(_seeds(cfg)):
        try:
            curve = integrate_time(field, seed, t_end, tol=tol,
                                   n_samples=n_samples)
            arc = reparam_arc_length(curve, field, n_samples=n_samples)
            frames = geometry.frenet_from_curve(arc, stencil=stencil)
        except HelixwarpError as exc:
            notes.append({"seed_index": i, "error": f"{type(exc).__name__}: {exc}"})
            continue
        for s, fr in zip(arc.grid, frames):
            rows.append([i, float(s), *map(float, fr.tau), *map(float, fr.n),
                         *map(float, fr.b), fr.kappa, fr.torsion, fr.ds_kappa,
                         int(fr.degenerate)])
    _write_csv(out_dir / "frames.csv", FRAME_COLUMNS, rows, sha)
    if notes:
        _write_json(out_dir / "geometry_errors.json",
                    {"config_sha256": sha, "errors": notes})
    return 0


def cmd_profile(cfg: dict, out_dir: Path, threads: int = 1) -> int:
    sha = _prepare_run(cfg, out_dir)
    _, field = build_objects(cfg)
    prof = cfg["profile"]
    tols = cfg["tolerances"]
    rbar0 = np.linspace(float(prof["rbar0_lo"]), float(prof["rbar0_hi"]),
                        int(prof["n_rbar0"]))
    z_grid = np.linspace(field.domain.z_min, field.domain.z_max,
                         int(prof["n_z"]))
    thresholds = streamline.ProfileThresholds(
        drbar_lo=float(tols["profile_drbar_lo"]),
        drbar_hi=float(tols["profile_drbar_hi"]),
        max_norm=float(tols["profile_max_norm"]))
    payload: dict = {"config_sha256": sha, "reports": []}
    try:
        reports = streamline.profile_report(
            field, [float(t) for t in prof["t_list"]], rbar0, z_grid,
            thresholds=thresholds, tol=float(tols["integrator_tol"]))
        payload["reports"] = [r.to_dict() for r in reports]
    except InvertibilityError as exc:
        payload["error"] = f"InvertibilityError: {exc}"
    _write_json(out_dir / "profile_report.json", payload)
    return 0


def cmd_identities(cfg: dict, out_dir: Path, threads: int = 1) -> int:
    sha = _prepare_run(cfg, out_dir)
    _, field = build_objects(cfg)
    idc = cfg["identities"]
    tols = cfg["tolerances"]
    tol = float(tols["integrator_tol"])
    fd = diagnostics.FdSpec(h=float(tols["fd_step"]))
    pressure = field.exact_pressure()
    seeds = _seeds(cfg)
    probes = [float(t) for t in idc["t_probes"]]
    match_tol = float(idc["match_tol"])

    entries = []
    gates_pass = True
    for i, seed in enumerate(seeds):
        for t_probe in probes:
            entry: dict = {"seed_index": i, "t_probe": t_probe}
            try:
                rot = diagnostics.rotation_residual(field, seed, t_probe,
                                                    fd=fd, tol=tol)
                entry["rotation"] = {
                    "term_1": rot.term_1, "term_2": rot.term_2,
                    "term_3": rot.term_3,
                    "residual_a": rot.residual_a, "residual_b": rot.residual_b,
                    "direct_fd": rot.direct_fd,
                    "measured_combination": rot.measured_combination,
                    "n_dot_etheta": rot.n_dot_etheta,
                    "ds_kappa": rot.ds_kappa,
                    "kappa_T_b_etheta": rot.kappa_T_b_etheta,
                    "agrees": rot.agreement(match_tol),
                    "degenerate": rot.degenerate,
                }
                if pressure is None:
                    entry["tangential"] = "skipped"
                    entry["frame_derivative"] = "skipped"
                else:
                    tan = diagnostics.tangential_rate_check(
                        field, pressure, seed, t_probe, tol=tol)
                    frm = diagnostics.frame_derivative_check(
                        field, pressure, seed, t_probe, fd=fd, tol=tol)
                    entry["tangential"] = {
                        "grad_p_tau": tan.grad_p_tau, "rate": tan.rate,
                        "residual_paper_literal": tan.residual_paper_literal,
                        "residual_euler_consistent": tan.residual_euler_consistent,
                    }
                    entry["frame_derivative"] = {
                        "kappa": frm.kappa, "torsion": frm.torsion,
                        "ds_kappa": frm.ds_kappa,
                        "lhs_r": frm.lhs_r, "rhs_r": frm.rhs_r,
                        "lhs_z": frm.lhs_z, "rhs_z": frm.rhs_z,
                        "residual_r": frm.residual_r,
                        "residual_z": frm.residual_z,
                        "grad_p_b": frm.grad_p_b,
                        "normal_balance": frm.normal_balance,
                        "sign_convention": frm.sign_convention.value,
                        "fd_h": frm.fd.h, "richardson": frm.fd.richardson,
                        "degenerate": frm.degenerate,
                    }
                    gates_pass &= (
                        tan.residual_euler_consistent <= GATE_TOLERANCE
                        and frm.grad_p_b <= GATE_TOLERANCE
                        and frm.normal_balance <= GATE_TOLERANCE)
            except HelixwarpError as exc:
                entry["error"] = f"{type(exc).__name__}: {exc}"
            entries.append(entry)

    payload: dict = {"config_sha256": sha, "probes": entries,
                     "gates": {"tolerance": GATE_TOLERANCE,
                               "passed": bool(gates_pass),
                               "skipped": pressure is None}}

    if idc["dominance"]:
        flux = flux_from_config(cfg["flux"])
        window = find_flux_windows(flux, cfg["epsilon"],
                                   int(tols["resolution"]))
        try:
            table = diagnostics.dominance_table(
                field, seeds[0], window,
                n_per_interval=int(idc["n_dominance"]), tol=tol)
            _write_csv(out_dir / "terms.csv", diagnostics.DOMINANCE_COLUMNS,
                       table.rows(), sha)
            payload["dominance"] = {"file": "terms.csv",
                                    "window_count": len(window.intervals)}
        except (EmptyWindowError, HelixwarpError) as exc:
            payload["dominance"] = {"notice": f"{type(exc).__name__}: {exc}"}
    _write_json(out_dir / "identities.json", payload)
    return 0 if (gates_pass or pressure is None) else 4


COMMANDS = {
    "flux-window": cmd_flux_window,
    "trace": cmd_trace,
    "geometry": cmd_geometry,
    "profile": cmd_profile,
    "identities": cmd_identities,
}


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="helixwarp",
        description="Trajectory-geometry diagnostics for axisymmetric "
                    "swirling flows with oscillating through-flow.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, metavar="PATH")
        p.add_argument("--out", default=None, metavar="DIR")
        p.add_argument("--threads", type=int, default=1, metavar="N")
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    out_dir = Path(args.out) if args.out else Path(cfg["outputs"])
    try:
        return COMMANDS[args.command](cfg, out_dir, threads=args.threads)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
