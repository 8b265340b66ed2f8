"""File output for trajectories, distributions, field profiles and reports.

Every CSV starts with a `# combwalk <kind> v1` schema comment so files are
self-describing; floats are written with `repr`, which round-trips exactly
and keeps repeated runs byte-identical.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .comb import FieldProfile
from .dynamics import Trajectory

TRAJECTORY_SCHEMA = "combwalk trajectory v1"
DISTRIBUTION_SCHEMA = "combwalk distribution v1"
FIELD_PROFILE_SCHEMA = "combwalk field-profile v1"
SWEEP_SCHEMA = "combwalk sweep v1"
REPORT_SCHEMA = "combwalk report v1"


def _fmt(x) -> str:
    return repr(float(x))


def write_trajectory_csv(path: Path, trajectory: Trajectory) -> None:
    """Long-format rows: one (snapshot_t, J, re_c, im_c, population) per state."""
    with open(path, "w", newline="") as fh:
        fh.write(f"# {TRAJECTORY_SCHEMA}\n")
        writer = csv.writer(fh)
        writer.writerow(["snapshot_t", "J", "re_c", "im_c", "population"])
        for snap in trajectory.snapshots:
            t = _fmt(snap.time)
            for j, c in enumerate(snap.amplitudes):
                writer.writerow(
                    [t, j, _fmt(c.real), _fmt(c.imag), _fmt(abs(c) ** 2)]
                )


def write_trajectory_json(path: Path, trajectory: Trajectory) -> None:
    doc = {
        "schema": TRAJECTORY_SCHEMA,
        "snapshots": [
            {
                "t": float(s.time),
                "re": [float(v) for v in s.amplitudes.real],
                "im": [float(v) for v in s.amplitudes.imag],
                "population": [float(v) for v in s.populations],
            }
            for s in trajectory.snapshots
        ],
        "norm_drift": [float(v) for v in trajectory.norm_drift],
    }
    _write_json(path, doc)


def write_distribution_csv(path: Path, indices, probabilities) -> None:
    """Two columns: site index n and its probability."""
    with open(path, "w", newline="") as fh:
        fh.write(f"# {DISTRIBUTION_SCHEMA}\n")
        writer = csv.writer(fh)
        writer.writerow(["n", "probability"])
        for n, p in zip(indices, probabilities):
            writer.writerow([int(n), _fmt(p)])


def write_field_profile_csv(path: Path, profile: FieldProfile) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(f"# {FIELD_PROFILE_SCHEMA}\n")
        writer = csv.writer(fh)
        writer.writerow(["t", "epsilon"])
        for t, v in zip(profile.times, profile.values):
            writer.writerow([_fmt(t), _fmt(v)])


def write_report_json(path: Path, report: dict) -> None:
    doc = {"schema": REPORT_SCHEMA}
    doc.update(report)
    _write_json(path, doc)


def _write_json(path: Path, doc: dict) -> None:
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_distribution_csv(path: Path):
    """Read (indices, values) from a distribution or trajectory CSV.

    Distribution files yield their single (n, probability) table; trajectory
    files yield the population column of their final snapshot.
    """
    with open(path, newline="") as fh:
        first = fh.readline().strip()
        if not first.startswith("#"):
            fh.seek(0)
        rows = list(csv.reader(fh))
    if not rows:
        raise ValueError(f"{path}: empty file")
    header, data = rows[0], rows[1:]
    if "snapshot_t" in header:
        t_col = header.index("snapshot_t")
        j_col = header.index("J")
        p_col = header.index("population")
        last_t = data[-1][t_col]
        indices = [int(r[j_col]) for r in data if r[t_col] == last_t]
        values = [float(r[p_col]) for r in data if r[t_col] == last_t]
        return np.asarray(indices), np.asarray(values)
    if len(header) < 2:
        raise ValueError(f"{path}: expected at least two columns, got {header}")
    indices = [int(r[0]) for r in data]
    values = [float(r[-1]) for r in data]
    return np.asarray(indices), np.asarray(values)
