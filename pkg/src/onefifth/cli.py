"""Command-line front end.

Configuration is a flat ``key=value`` text file (``#`` starts a comment),
optionally overridden on the command line with ``--set key=value``.  All
outputs are CSV/JSON with fixed schemas plus a manifest listing every
emitted file with its SHA-256 digest; identical config and seed reproduce
byte-identical outputs.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__, io, seeding
from .algorithm import AlgoParams, run_trajectory
from .chain import consistency_check, run_chain
from .drift import drift_scan, linear_increase_condition
from .errors import ConfigError, ConstructionError
from .estimators import clt_check, compute_cr_bundle
from .objectives import (builtin_catalog, check_homogeneity, euler_residual,
                         estimate_sphere_bounds, parse_function_key)

DEFAULTS = {
    "function": "sphere",
    "n": "20",
    "gamma": str(np.exp(1 / 3)),
    "q": "4",
    "x0": "random_sphere:1",
    "sigma0": "1",
    "steps": "20000",
    "chain_steps": "",
    "replicates": "1",
    "burn_in": "",
    "seed": "1",
    "radii": "1e-3,1e-1,10,1e3",
    "drift_samples": "10000",
    "calib_steps": "1000000",
    "synthetic": "false",
}

KNOWN_KEYS = set(DEFAULTS)


def parse_config_file(path: Path) -> dict:
    cfg = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in KNOWN_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        cfg[key] = value.strip()
    return cfg


class ExperimentConfig:
    """Validated experiment configuration."""

    def __init__(self, raw: dict, allow_divergent: bool = False):
        self.raw = dict(DEFAULTS)
        self.raw.update(raw)
        r = self.raw
        try:
            self.n = int(r["n"])
            self.gamma = float(r["gamma"])
            self.q = float(r["q"])
            self.sigma0 = float(r["sigma0"])
            self.steps = int(r["steps"])
            self.chain_steps = int(r["chain_steps"]) if r["chain_steps"] else self.steps
            self.replicates = int(r["replicates"])
            self.burn_in = int(r["burn_in"]) if r["burn_in"] else None
            self.seed = int(r["seed"])
            self.radii = [float(v) for v in r["radii"].split(",") if v.strip()]
            self.drift_samples = int(r["drift_samples"])
            self.calib_steps = int(r["calib_steps"])
            self.synthetic = r["synthetic"].lower() in ("1", "true", "yes")
        except ValueError as exc:
            raise ConfigError(f"bad field value: {exc}") from exc
        try:
            self.fn = parse_function_key(r["function"], self.n)
        except ConstructionError as exc:
            raise ConfigError(f"field 'function': {exc}") from exc
        if self.sigma0 <= 0:
            raise ConfigError("field 'sigma0': must be positive")
        if self.steps < 0 or self.replicates < 0:
            raise ConfigError("steps and replicates must be >= 0")
        self.allow_divergent = allow_divergent
        if self.gamma <= 1 and not allow_divergent:
            raise ConfigError("gamma must be > 1 (use --allow-divergent to override)")
        if self.fn.core.positive:
            cond = linear_increase_condition(self.gamma, self.q, self.fn.core.degree)
            if cond >= 1 and not allow_divergent:
                raise ConfigError(
                    f"step-size increase condition is {cond:.6g} >= 1; the theory "
                    "predicts divergence (use --allow-divergent to run anyway)")
        self.params = AlgoParams(self.n, self.gamma, self.q,
                                 allow_divergent=allow_divergent)
        self.x0 = self._parse_x0(r["x0"])

    def _parse_x0(self, text: str) -> np.ndarray:
        if text.startswith("random_sphere:"):
            radius = float(text.split(":", 1)[1])
            rng = np.random.default_rng(
                np.random.SeedSequence(self.seed, spawn_key=(0x0F1F5,)))
            v = rng.standard_normal(self.n)
            return radius * v / np.linalg.norm(v)
        x0 = np.array([float(v) for v in text.split(",")])
        if x0.shape != (self.n,):
            raise ConfigError(f"x0 has {len(x0)} entries, expected n={self.n}")
        return x0

    def echo(self) -> dict:
        return dict(self.raw)


def _digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def write_manifest(out_dir: Path, cfg: ExperimentConfig, files: list[Path],
                   substreams: list[str]) -> Path:
    manifest = {
        "config": cfg.echo(),
        "version": __version__,
        "substreams": substreams,
        "outputs": {f.name: _digest(f) for f in files},
    }
    path = out_dir / "manifest.json"
    path.write_text(json.dumps(manifest, indent=1, sort_keys=True) + "\n")
    return path


def cmd_run(cfg: ExperimentConfig, out_dir: Path, full_state: bool,
            stride: int) -> int:
    files, substreams = [], []
    for i in range(cfg.replicates):
        rng = seeding.substream(cfg.seed, i)
        substreams.append(seeding.substream_id(cfg.seed, i))
        traj = run_trajectory(cfg.params, cfg.fn, cfg.x0, cfg.sigma0, cfg.steps,
                              seed=cfg.seed, stride=stride,
                              keep_vectors=full_state, rng=rng)
        path = out_dir / f"trajectory_{i:03d}.csv"
        io.write_trajectory_csv(traj, path, with_z=True)
        files.append(path)
        if full_state:
            jpath = out_dir / f"trajectory_{i:03d}.json"
            io.write_trajectory_json(traj, jpath)
            files.append(jpath)
    write_manifest(out_dir, cfg, files, substreams)
    return 0


def cmd_estimate(cfg: ExperimentConfig, out_dir: Path) -> int:
    bundle = compute_cr_bundle(cfg.params, cfg.fn, cfg.x0, cfg.sigma0,
                               traj_steps=cfg.steps, chain_steps=cfg.chain_steps,
                               seed=cfg.seed, burn_in=cfg.burn_in)
    doc = bundle.to_dict()
    identity_gap = abs(bundle.cr_timeavg.value - bundle.cr_from_ps)
    combined = np.hypot(bundle.cr_timeavg.std_error, bundle.cr_f_ratio.std_error)
    doc["checks"] = {
        "cr_identity_gap": identity_gap,
        "cr_identity_ok": bool(identity_gap <= 1e-14),
        "cr_routes_gap": abs(bundle.cr_timeavg.value - bundle.cr_f_ratio.value),
        "cr_routes_ok": bool(
            abs(bundle.cr_timeavg.value - bundle.cr_f_ratio.value) <= 3 * combined),
    }
    warnings = []
    if not cfg.fn.core.positive:
        warnings.append(
            "function is outside the proven convergence class (linear level sets); "
            "expect success probability 1/2 and no convergence")
    doc["warnings"] = warnings
    path = out_dir / "estimate.json"
    path.write_text(json.dumps(doc, indent=1) + "\n")
    write_manifest(out_dir, cfg, [path], [seeding.substream_id(cfg.seed, 0)])
    return 0


def cmd_drift(cfg: ExperimentConfig, out_dir: Path) -> int:
    if not cfg.radii:
        raise ConfigError("field 'radii': must be non-empty for drift scans")
    scan = drift_scan(cfg.params, cfg.fn, cfg.radii, samples=cfg.drift_samples,
                      seed=cfg.seed)
    csv_path = out_dir / "drift_scan.csv"
    io.write_drift_csv(scan, csv_path)
    summary = {
        "drift_holds_empirically": scan.drift_holds_empirically,
        "limit_at_infinity": linear_increase_condition(cfg.gamma, cfg.q,
                                                       cfg.fn.core.degree),
        "limit_at_zero": cfg.gamma ** (-cfg.fn.core.degree / cfg.q),
    }
    json_path = out_dir / "drift_summary.json"
    json_path.write_text(json.dumps(summary, indent=1) + "\n")
    write_manifest(out_dir, cfg, [csv_path, json_path], [])
    return 0


def cmd_clt(cfg: ExperimentConfig, out_dir: Path) -> int:
    gamma_g_sq, pvalue = clt_check(
        cfg.params, cfg.fn, cfg.x0 / cfg.sigma0, steps=cfg.steps,
        replicates=cfg.replicates, seed=cfg.seed, calib_steps=cfg.calib_steps,
        synthetic=cfg.synthetic)
    doc = {
        "gamma_g_sq": {"value": gamma_g_sq.value, "stderr": gamma_g_sq.std_error,
                       "count": gamma_g_sq.count, "method": gamma_g_sq.method},
        "ks_pvalue": pvalue,
        "replicates": cfg.replicates,
        "steps": cfg.steps,
        "synthetic": cfg.synthetic,
    }
    path = out_dir / "clt_report.json"
    path.write_text(json.dumps(doc, indent=1) + "\n")
    write_manifest(out_dir, cfg, [path], [seeding.substream_id(cfg.seed, 1)])
    return 0


def cmd_validate_fn(cfg: ExperimentConfig, out_dir: Path) -> int:
    core = cfg.fn.core
    doc = {"function": cfg.fn.label}
    if not core.positive:
        doc["skipped"] = "outside the homogeneous-positive class"
        ok = True
    else:
        hom = check_homogeneity(core, trials=10_000, rtol=1e-8, seed=cfg.seed)
        rng = seeding.stream(cfg.seed)
        pts = rng.standard_normal((1000, core.dim))
        euler_worst = max(euler_residual(core, p) for p in pts)
        bounds = estimate_sphere_bounds(core, samples=100_000, seed=cfg.seed)
        doc.update({
            "homogeneity": {"passed": hom.passed,
                            "worst_relative_residual": hom.worst_relative_residual,
                            "trials": hom.trials},
            "euler_worst_residual": euler_worst,
            "euler_passed": bool(euler_worst <= 1e-6),
            "sphere_bounds": {"m": bounds.m, "M": bounds.M,
                              "samples": bounds.samples},
        })
        ok = hom.passed and euler_worst <= 1e-6
    path = out_dir / "validate_fn.json"
    path.write_text(json.dumps(doc, indent=1) + "\n")
    write_manifest(out_dir, cfg, [path], [])
    print(json.dumps(doc, indent=1))
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="onefifth",
        description="(1+1)-ES with generalized one-fifth success rule: "
                    "runs, estimators, drift scans, CLT checks")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("run", "estimate", "drift", "clt", "validate-fn"):
        p = sub.add_parser(name)
        p.add_argument("--config", type=Path, help="key=value config file")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override a config field")
        p.add_argument("--seed", type=int, help="override the seed")
        p.add_argument("--out", type=Path, default=Path("."),
                       help="output directory")
        p.add_argument("--allow-divergent", action="store_true",
                       help="permit parameters outside the convergence theory")
        if name == "run":
            p.add_argument("--full-state", action="store_true",
                           help="also emit JSON with full mean vectors")
            p.add_argument("--stride", type=int, default=1,
                           help="record every K-th iteration")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        raw = parse_config_file(args.config) if args.config else {}
        for item in args.set:
            if "=" not in item:
                raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
            key, _, value = item.partition("=")
            if key not in KNOWN_KEYS:
                raise ConfigError(f"--set: unknown key {key!r}")
            raw[key] = value
        if args.seed is not None:
            raw["seed"] = str(args.seed)
        cfg = ExperimentConfig(raw, allow_divergent=args.allow_divergent)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    out_dir = args.out
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        if args.command == "run":
            return cmd_run(cfg, out_dir, args.full_state, args.stride)
        if args.command == "estimate":
            return cmd_estimate(cfg, out_dir)
        if args.command == "drift":
            return cmd_drift(cfg, out_dir)
        if args.command == "clt":
            return cmd_clt(cfg, out_dir)
        if args.command == "validate-fn":
            return cmd_validate_fn(cfg, out_dir)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
