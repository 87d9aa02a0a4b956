"""Fixed-schema CSV/JSON emission.

Floats are written with 17 significant digits so files round-trip
bit-exactly and can be golden-tested.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .algorithm import Trajectory
from .chain import ChainRecord
from .drift import DriftScan

LN10 = np.log(10.0)


def fmt(x) -> str:
    return f"{float(x):.17g}"


def trajectory_rows(traj: Trajectory, with_z: bool = False):
    log10_x = traj.log_norm_x / LN10
    log10_s = traj.log_sigma / LN10
    for i, t in enumerate(traj.t):
        row = [str(int(t)), fmt(traj.f[i]), fmt(log10_x[i]), fmt(log10_s[i])]
        if with_z:
            row.append(fmt(log10_x[i] - log10_s[i]))
        row.append(str(int(traj.accepted[i])))
        yield row


def write_trajectory_csv(traj: Trajectory, path, with_z: bool = False) -> None:
    header = "t,f,log10_norm_x,log10_sigma,accepted"
    if with_z:
        header = "t,f,log10_norm_x,log10_sigma,log10_norm_z,accepted"
    lines = [header]
    lines += [",".join(row) for row in trajectory_rows(traj, with_z)]
    Path(path).write_text("\n".join(lines) + "\n")


def write_trajectory_json(traj: Trajectory, path) -> None:
    """Full-state dump, including the mean vectors when they were recorded."""
    doc = {
        "fn_key": traj.fn_key,
        "seed": traj.seed,
        "params": {"n": traj.params.n, "gamma": traj.params.gamma,
                   "q": traj.params.q},
        "status": traj.status,
        "t": [int(v) for v in traj.t],
        "f": [float(v) for v in traj.f],
        "log_sigma": [float(v) for v in traj.log_sigma],
        "accepted": [bool(v) for v in traj.accepted],
    }
    if traj.xs is not None:
        doc["x"] = [[float(v) for v in row] for row in traj.xs]
    Path(path).write_text(json.dumps(doc, indent=1) + "\n")


def write_chain_csv(rec: ChainRecord, path) -> None:
    lines = ["t,log10_norm_z,success,ln_eta"]
    ln_eta = rec.ln_eta
    log10_z = rec.log_norm_z / LN10
    for i in range(len(rec)):
        t = rec.burn_in + i
        lines.append(f"{t},{fmt(log10_z[i])},{int(rec.successes[i])},{fmt(ln_eta[i])}")
    Path(path).write_text("\n".join(lines) + "\n")


def write_drift_csv(scan: DriftScan, path) -> None:
    lines = ["radius,direction_id,ratio,stderr"]
    for i, r in enumerate(scan.radii):
        for j in range(len(scan.directions)):
            lines.append(f"{fmt(r)},{j},{fmt(scan.ratios[i, j])},"
                         f"{fmt(scan.stderrs[i, j])}")
    Path(path).write_text("\n".join(lines) + "\n")
