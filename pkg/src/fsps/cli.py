"""Command-line front end: ``fsps simulate|region|sweep|gronwall``.

Exit codes: 0 success, 1 gronwall violations, 2 blow-up detected,
3 numeric failure, 64 usage error, 65 invalid configuration.
"""
from __future__ import annotations

import argparse
import configparser
import hashlib
import itertools
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

from . import __version__
from .config import InitialCondition, SimConfig
from .dynamics import run_simulation
from .errors import FSPSError
from .exponents import as_number, region_raster
from .gronwall import INF, exp_bound, gamma_bound, run_ensembles
from .io import fmt, write_diagnostics, write_snapshot
from .riesz import BACKENDS
from .spectral import Grid1D

log = logging.getLogger("fsps")

EXIT_OK, EXIT_VIOLATION, EXIT_BLOWUP, EXIT_NUMERIC = 0, 1, 2, 3
EXIT_USAGE, EXIT_DATAERR = 64, 65
STATUS_EXIT = {"completed": EXIT_OK, "blowup_detected": EXIT_BLOWUP,
               "numeric_failure": EXIT_NUMERIC}

# section -> key -> (default or REQUIRED, description)
REQUIRED = object()
SCHEMA = {
    "problem": {
        "sigma": (REQUIRED, "Riesz order, strictly inside (0,1); fractions like 1/3 allowed"),
        "gamma": (REQUIRED, "power exponent, > 1 (values above 5 run but are flagged)"),
        "alpha": (REQUIRED, "+1 defocusing or -1 focusing"),
        "local_term": ("true", "include alpha |Psi|^(gamma-1) Psi"),
        "nonlocal_term": ("true", "include the Riesz potential term"),
    },
    "grid": {
        "L": (REQUIRED, "half length, domain [-L, L)"),
        "N": (REQUIRED, "number of points, power of two >= 8"),
    },
    "time": {
        "dt": (REQUIRED, "time step, > 0"),
        "t_end": (REQUIRED, "final time, > dt"),
        "record_every": ("1", "steps between recorded diagnostics/snapshots"),
    },
    "initial": {
        "kind": ("gaussian", "gaussian | plane_modulated | from_file"),
        "amplitude": ("1.0", "profile amplitude"),
        "width": ("1.0", "Gaussian width w in exp(-(x-c)^2/w^2)"),
        "chirp": ("0.0", "quadratic phase coefficient (gaussian)"),
        "center": ("0.0", "profile center c"),
        "wavenumber": ("0.0", "carrier wavenumber (plane_modulated)"),
        "l2_norm": ("", "if set, rescale the profile to this L2 norm"),
        "path": ("", "snapshot file (from_file)"),
    },
    "numerics": {
        "backend": ("spectral", "Poisson backend: spectral | quadrature"),
        "blowup_h1_cap": ("1e4", "H1 norm that triggers the blow-up detector"),
        "tol": ("1e-8", "allowed mass fraction in the outer tenth of the box"),
        "confirm_blowup": ("true", "rerun at dt/2 before reporting blow-up"),
    },
}


class UsageError(Exception):
    pass


class ConfigError(Exception):
    pass


def defaults_help() -> str:
    lines = ["configuration keys (INI sections):"]
    for sec, keys in SCHEMA.items():
        lines.append(f"  [{sec}]")
        for key, (default, desc) in keys.items():
            d = "required" if default is REQUIRED else f"default {default!r}"
            lines.append(f"    {key:<14} {desc} ({d})")
    return "\n".join(lines)


def _parser_from_text(text: str) -> configparser.ConfigParser:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    return cp


def canonical_text(cp: configparser.ConfigParser) -> str:
    """Sorted, whitespace-normalized rendering used for hashing."""
    out = []
    for sec in sorted(cp.sections()):
        out.append(f"[{sec}]")
        for key in sorted(cp[sec]):
            out.append(f"{key}={cp[sec][key].strip()}")
    return "\n".join(out) + "\n"


def config_hash(cp: configparser.ConfigParser) -> str:
    return hashlib.sha256(canonical_text(cp).encode("utf-8")).hexdigest()


def _num(sec, key, raw):
    try:
        return float(as_number(raw))
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"{sec}.{key}: expected a number, got {raw!r}") from None


def _bool(sec, key, raw):
    v = raw.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{sec}.{key}: expected true/false, got {raw!r}")


def _int(sec, key, raw):
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{sec}.{key}: expected an integer, got {raw!r}") from None


def config_from_parser(cp: configparser.ConfigParser) -> SimConfig:
    for sec in cp.sections():
        if sec not in SCHEMA:
            raise ConfigError(f"unknown section [{sec}]; accepted: {', '.join(SCHEMA)}")
        for key in cp[sec]:
            if key not in SCHEMA[sec]:
                raise ConfigError(
                    f"unknown key {sec}.{key}; accepted: {', '.join(SCHEMA[sec])}")
    vals = {}
    for sec, keys in SCHEMA.items():
        for key, (default, _) in keys.items():
            if cp.has_option(sec, key):
                vals[sec, key] = cp[sec][key].strip()
            elif default is REQUIRED:
                raise ConfigError(f"missing required key {sec}.{key}")
            else:
                vals[sec, key] = default

    sigma = _num("problem", "sigma", vals["problem", "sigma"])
    gamma = _num("problem", "gamma", vals["problem", "gamma"])
    alpha = _num("problem", "alpha", vals["problem", "alpha"])
    if not 0 < sigma < 1:
        raise ConfigError(f"problem.sigma: sigma must lie strictly inside (0,1), got {sigma!r}")
    if not gamma > 1:
        raise ConfigError(f"problem.gamma: gamma must exceed 1, got {gamma!r}")
    if alpha not in (1.0, -1.0):
        raise ConfigError(f"problem.alpha: alpha must be +1 or -1, got {alpha!r}")
    l2 = vals["initial", "l2_norm"]
    initial = InitialCondition(
        kind=vals["initial", "kind"],
        amplitude=_num("initial", "amplitude", vals["initial", "amplitude"]),
        width=_num("initial", "width", vals["initial", "width"]),
        chirp=_num("initial", "chirp", vals["initial", "chirp"]),
        center=_num("initial", "center", vals["initial", "center"]),
        wavenumber=_num("initial", "wavenumber", vals["initial", "wavenumber"]),
        l2_norm=_num("initial", "l2_norm", l2) if l2 else None,
        path=vals["initial", "path"] or None,
    )
    backend = vals["numerics", "backend"]
    if backend not in BACKENDS:
        raise ConfigError(f"numerics.backend: must be one of {BACKENDS}, got {backend!r}")
    return SimConfig(
        sigma=sigma, gamma=gamma, alpha=int(alpha),
        grid=Grid1D(_num("grid", "L", vals["grid", "L"]), _int("grid", "N", vals["grid", "N"])),
        dt=_num("time", "dt", vals["time", "dt"]),
        t_end=_num("time", "t_end", vals["time", "t_end"]),
        record_every=_int("time", "record_every", vals["time", "record_every"]),
        initial=initial,
        poisson_backend=backend,
        blowup_h1_cap=_num("numerics", "blowup_h1_cap", vals["numerics", "blowup_h1_cap"]),
        boundary_tol=_num("numerics", "tol", vals["numerics", "tol"]),
        confirm_blowup=_bool("numerics", "confirm_blowup", vals["numerics", "confirm_blowup"]),
        local_on=_bool("problem", "local_term", vals["problem", "local_term"]),
        nonlocal_on=_bool("problem", "nonlocal_term", vals["problem", "nonlocal_term"]),
    )


def parse_config(text: str) -> SimConfig:
    """Parse INI text into a validated SimConfig.

    Raises ``ConfigError`` (or an FSPSError from validation) with the offending key.
    """
    return config_from_parser(_parser_from_text(text))


def _now():
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def simulate_to_dir(cp: configparser.ConfigParser, out_dir: Path) -> dict:
    """Run one configuration and write its artifacts; returns the manifest."""
    started = _now()
    cfg = config_from_parser(cp)
    traj = run_simulation(cfg)
    out_dir.mkdir(parents=True, exist_ok=True)
    snap_dir = out_dir / "snapshots"
    snap_dir.mkdir(exist_ok=True)
    artifacts = [write_diagnostics(out_dir / "diagnostics.csv", traj.diagnostics)]
    for i, (t, f) in enumerate(zip(traj.times, traj.snapshots)):
        artifacts.append(write_snapshot(snap_dir / f"snapshot_{i:05d}.txt", f, t))
    (out_dir / "config.ini").write_text(canonical_text(cp), encoding="utf-8")
    manifest = {
        "config_hash": config_hash(cp),
        "tool_version": __version__,
        "start": started,
        "end": _now(),
        "status": traj.status.kind,
        "status_t": traj.status.t,
        "status_message": traj.status.message,
        "boundary_mass": traj.boundary_mass,
        "notes": traj.notes,
        "energy_gauge": "mean_free" if cfg.poisson_backend == "spectral" else "free_space",
        "artifacts": [str(p.relative_to(out_dir)) for p in artifacts] + ["config.ini"],
    }
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n",
                                           encoding="utf-8")
    d = traj.diagnostics
    if not d:
        manifest["_summary"] = {"final_t": None, "mass_drift": None, "energy_drift": None,
                                "max_h1": None}
        return manifest
    manifest["_summary"] = {
        "final_t": d[-1].t,
        "mass_drift": abs(d[-1].mass - d[0].mass) / d[0].mass if d[0].mass else 0.0,
        "energy_drift": abs(d[-1].energy - d[0].energy),
        "max_h1": max(r.h1 for r in d),
    }
    return manifest


def _read_config(path) -> configparser.ConfigParser:
    if path is None:
        raise UsageError("--config is required")
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"config file not found: {path}")
    return _parser_from_text(p.read_text(encoding="utf-8"))


def cmd_simulate(config_path, out_dir) -> int:
    cp = _read_config(config_path)
    manifest = simulate_to_dir(cp, Path(out_dir))
    log.info("status %s", manifest["status"])
    return STATUS_EXIT[manifest["status"]]


def parse_grid_spec(spec: str):
    """``start:stop:count`` (inclusive, exact rational spacing) or a comma list."""
    spec = spec.strip()
    try:
        if ":" in spec:
            a, b, n = spec.split(":")
            a, b, n = Fraction(a), Fraction(b), int(n)
            if n < 1:
                raise ValueError
            if n == 1:
                return [a]
            return [a + (b - a) * i / (n - 1) for i in range(n)]
        return [as_number(s) for s in spec.split(",") if s.strip()]
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"bad grid spec {spec!r}; use start:stop:count or a,b,c") from None


def region_svg(raster, cell=8) -> str:
    ns, ng = len(raster.sigma), len(raster.gamma)
    pad = 40
    w, h = ns * cell + 2 * pad, ng * cell + 2 * pad
    feas = raster.feasible
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
             f'viewBox="0 0 {w} {h}">',
             f'<rect width="{w}" height="{h}" fill="white"/>']
    for gi in range(ng):
        y = pad + (ng - 1 - gi) * cell  # gamma increases upwards
        for si in range(ns):
            color = "#3a9d5d" if feas[gi, si] else "#e4e4e4"
            parts.append(f'<rect x="{pad + si * cell}" y="{y}" width="{cell}" '
                         f'height="{cell}" fill="{color}"/>')
    s0, s1 = float(raster.sigma[0]), float(raster.sigma[-1])
    g0, g1 = float(raster.gamma[0]), float(raster.gamma[-1])
    parts += [
        f'<text x="{w / 2}" y="{h - 8}" text-anchor="middle" font-size="12">sigma</text>',
        f'<text x="{pad}" y="{h - pad + 14}" font-size="10">{s0:g}</text>',
        f'<text x="{w - pad}" y="{h - pad + 14}" text-anchor="end" font-size="10">{s1:g}</text>',
        f'<text x="12" y="{h / 2}" font-size="12" transform="rotate(-90 12 {h / 2})" '
        f'text-anchor="middle">gamma</text>',
        f'<text x="{pad - 4}" y="{h - pad}" text-anchor="end" font-size="10">{g0:g}</text>',
        f'<text x="{pad - 4}" y="{pad + 8}" text-anchor="end" font-size="10">{g1:g}</text>',
        "</svg>",
    ]
    return "\n".join(parts) + "\n"


def _csv_value(x):
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    return fmt(x)


def cmd_region(sigma_spec, gamma_spec, out_dir) -> int:
    raster = region_raster(parse_grid_spec(sigma_spec), parse_grid_spec(gamma_spec))
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    lines = ["sigma,gamma,feasible,interval_lo,interval_hi,lo_open,hi_open"]
    lines += [",".join(_csv_value(v) for v in row) for row in raster.rows()]
    (out / "region.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    (out / "region.svg").write_text(region_svg(raster), encoding="utf-8")
    bad = raster.monotonicity_counterexamples()
    if bad:
        log.warning("monotonicity counterexamples (gamma, sigma): %s", bad)
    return EXIT_OK


def parse_param(spec: str):
    """``section.key=v1,v2,...`` -> (section, key, [values])."""
    if "=" not in spec or "." not in spec.split("=", 1)[0]:
        raise UsageError(f"bad --param {spec!r}; use section.key=v1,v2")
    name, values = spec.split("=", 1)
    sec, key = name.split(".", 1)
    vals = [v.strip() for v in values.split(",") if v.strip()]
    if not vals:
        raise UsageError(f"--param {spec!r} lists no values")
    return sec.strip(), key.strip(), vals


def _sweep_one(job):
    index, text, out_dir, params = job
    cp = _parser_from_text(text)
    row = {"run": index, **params}
    try:
        m = simulate_to_dir(cp, Path(out_dir))
    except (ConfigError, FSPSError) as exc:
        row.update(status="config_error", exit_code=EXIT_DATAERR, message=str(exc))
        return row
    s = m["_summary"]
    row.update(status=m["status"], exit_code=STATUS_EXIT[m["status"]],
               config_hash=m["config_hash"], final_t=s["final_t"],
               mass_drift=s["mass_drift"], energy_drift=s["energy_drift"],
               max_h1=s["max_h1"], message=m["status_message"])
    return row


def resolve_workers(flag):
    if flag is not None:
        n = flag
    elif os.environ.get("FSPS_WORKERS"):
        try:
            n = int(os.environ["FSPS_WORKERS"])
        except ValueError:
            raise UsageError("FSPS_WORKERS must be an integer") from None
    else:
        n = os.cpu_count() or 1
    if n < 1:
        raise UsageError(f"worker count must be >= 1, got {n}")
    return n


SWEEP_COLUMNS = ("status", "exit_code", "config_hash", "final_t", "mass_drift",
                 "energy_drift", "max_h1", "message")


def cmd_sweep(config_path, param_specs, out_dir, workers=None) -> int:
    base = _read_config(config_path)
    params = [parse_param(s) for s in param_specs]
    if not params:
        raise UsageError("sweep needs at least one --param")
    n_workers = resolve_workers(workers)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    names = [f"{s}.{k}" for s, k, _ in params]
    jobs = []
    for i, combo in enumerate(itertools.product(*(v for _, _, v in params))):
        cp = _parser_from_text(canonical_text(base))
        for (sec, key, _), val in zip(params, combo):
            if not cp.has_section(sec):
                cp.add_section(sec)
            cp[sec][key] = val
        jobs.append((i, canonical_text(cp), str(out / f"run_{i:04d}"), dict(zip(names, combo))))
    if n_workers == 1:
        rows = [_sweep_one(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=n_workers) as ex:
            rows = list(ex.map(_sweep_one, jobs))
    rows.sort(key=lambda r: r["run"])
    header = ["run", *names, *SWEEP_COLUMNS]

    def cell(v):
        if isinstance(v, float):
            return fmt(v)
        s = "" if v is None else str(v)
        return '"' + s.replace('"', '""') + '"' if ("," in s or '"' in s) else s

    lines = [",".join(header)]
    lines += [",".join(cell(r.get(c)) for c in header) for r in rows]
    (out / "summary.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    worst = max(r["exit_code"] for r in rows)
    return worst


GRONWALL_DEFAULTS = {"instances": 100, "mesh_sizes": [128, 256, 512], "gamma_T": 1.0,
                     "exp_T": 2.0, "substeps": 4, "bounds": []}


def _bound_value(b):
    kind = b.get("kind")
    if kind == "gamma":
        return gamma_bound(float(b["C1"]), float(b["rho"]), float(b["a_norm"]))
    if kind == "exp":
        p = INF if str(b["p"]).lower() in ("inf", "infinity") else float(b["p"])
        return exp_bound(float(b["C2"]), p, float(b["q"]), float(b["a_norm"]))
    raise ConfigError(f"bound kind must be 'gamma' or 'exp', got {kind!r}")


def cmd_gronwall(spec_path, out_dir, seed=0) -> int:
    spec = dict(GRONWALL_DEFAULTS)
    if spec_path is not None:
        p = Path(spec_path)
        if not p.is_file():
            raise UsageError(f"spec file not found: {spec_path}")
        try:
            user = json.loads(p.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{spec_path}: invalid JSON: {exc}") from None
        unknown = set(user) - set(GRONWALL_DEFAULTS)
        if unknown:
            raise ConfigError(f"unknown gronwall spec keys: {sorted(unknown)}")
        spec.update(user)
    report = run_ensembles(instances=int(spec["instances"]),
                           mesh_sizes=tuple(int(n) for n in spec["mesh_sizes"]),
                           seed=seed, gamma_T=float(spec["gamma_T"]),
                           exp_T=float(spec["exp_T"]), substeps=int(spec["substeps"]))
    report["bounds"] = [{**b, "value": _bound_value(b)} for b in spec["bounds"]]
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    text = json.dumps(report, indent=2, default=lambda v: None) + "\n"
    (out / "gronwall_report.json").write_text(text, encoding="utf-8")
    return EXIT_OK if report["passed"] else EXIT_VIOLATION


class _ArgParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def build_parser():
    ap = _ArgParser(prog="fsps", description=__doc__.splitlines()[0],
                    formatter_class=argparse.RawDescriptionHelpFormatter,
                    epilog=defaults_help())
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", parser_class=_ArgParser)
    s = sub.add_parser("simulate", help="run one configuration",
                       formatter_class=argparse.RawDescriptionHelpFormatter,
                       epilog=defaults_help())
    s.add_argument("--config", help="INI configuration file")
    s.add_argument("--out", required=True)
    r = sub.add_parser("region", help="feasibility raster of the working interval")
    r.add_argument("--sigma", default="0.01:0.99:99", help="start:stop:count or list")
    r.add_argument("--gamma", default="1.1:5:40", help="start:stop:count or list")
    r.add_argument("--out", required=True)
    w = sub.add_parser("sweep", help="cartesian parameter sweep")
    w.add_argument("--config", help="template INI configuration")
    w.add_argument("--param", action="append", default=[],
                   help="section.key=v1,v2 (repeatable)")
    w.add_argument("--workers", type=int, help="process count (fallback FSPS_WORKERS)")
    w.add_argument("--out", required=True)
    g = sub.add_parser("gronwall", help="verify both Gronwall bounds on random ensembles")
    g.add_argument("--config", help="optional JSON spec (instances, mesh_sizes, bounds)")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command is None:
        ap.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "simulate":
            return cmd_simulate(args.config, args.out)
        if args.command == "region":
            return cmd_region(args.sigma, args.gamma, args.out)
        if args.command == "sweep":
            return cmd_sweep(args.config, args.param, args.out, args.workers)
        return cmd_gronwall(args.config, args.out, args.seed)
    except UsageError as exc:
        sys.stderr.write(f"fsps: usage error: {exc}\n")
        return EXIT_USAGE
    except (ConfigError, FSPSError) as exc:
        sys.stderr.write(f"fsps: invalid configuration: {exc}\n")
        return EXIT_DATAERR


if __name__ == "__main__":
    sys.exit(main())
