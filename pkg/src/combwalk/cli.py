"""Command-line front end: simulate | field-profile | oracle | compare | sweep.

Exit codes: 0 success, 2 configuration error, 3 runtime/integration error.
All file outputs are deterministic for a given config; anything that varies
between runs (timing) goes to stderr or to sweep rows only.
"""

from __future__ import annotations

import argparse
import itertools
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import io as cwio
from .comb import sample_profile
from .config import (
    ConfigError,
    ExperimentConfig,
    build_field,
    build_rotor,
    build_run_config,
    dump_config,
    load_config,
    molecule_is_distorted,
    validate,
)
from .dynamics import IntegrationError, WalkState, propagate
from .metrics import align_supports, compare_distributions
from .oracles import (
    bessel_j_sequence,
    classical_ctrw_distribution,
    ctqw_finite,
    ctqw_infinite_distribution,
)
from .rotor import RotorSpec


def _ladder_oracle(j_max: int, initial_j: int, gamma_t: float) -> np.ndarray:
    """Infinite-lattice walk probabilities mapped onto ladder sites 0..j_max."""
    order = max(initial_j, j_max - initial_j)
    seq = bessel_j_sequence(order, abs(gamma_t))
    offsets = np.abs(np.arange(j_max + 1) - initial_j)
    return seq[offsets] ** 2


def _run_driven(cfg: ExperimentConfig, steps_override: int | None = None):
    """Propagate the configured run; returns (trajectory, rotor, comb, run_config)."""
    rotor = build_rotor(cfg)
    comb = build_field(cfg, rotor)
    run_config = build_run_config(cfg, comb)
    if steps_override is not None:
        run_config = replace(run_config, steps_per_unit_time=steps_override)
    initial = WalkState.delta(rotor.size, run_config.initial_j, run_config.t_start)
    trajectory = propagate(
        initial,
        comb,
        rotor,
        run_config,
        distorted=molecule_is_distorted(cfg),
    )
    return trajectory, rotor, comb, run_config


def _simulate_report(cfg, trajectory, rotor, run_config) -> dict:
    final = trajectory.final
    elapsed = final.time - run_config.t_start
    gamma_t = cfg.comb.gamma * elapsed
    oracle = _ladder_oracle(rotor.j_max, run_config.initial_j, gamma_t)
    report = compare_distributions(final.populations, oracle)
    doc = {
        "preset": cfg.name,
        "parameters": {
            "j_max": rotor.j_max,
            "d_over_b": cfg.rotor.d_over_b,
            "mu": cfg.rotor.mu,
            "m": cfg.rotor.m,
            "gamma": cfg.comb.gamma,
            "comb_distorted": cfg.comb.distorted,
            "initial_j": run_config.initial_j,
            "t_start": run_config.t_start,
            "t_end": run_config.t_end,
            "steps_per_unit_time": run_config.steps_per_unit_time,
        },
        "snapshot_times": [float(t) for t in trajectory.times],
        "final_snapshot_t": float(final.time),
        "gamma_t": gamma_t,
        "comparison": report.to_dict(),
        "norm_drift_max": trajectory.max_norm_drift(),
    }
    if cfg.rotor.b_hz is not None:
        doc["time_unit_s"] = 1.0 / (2.0 * cfg.rotor.b_hz)
    return doc, oracle


def _out_dir(args, cfg: ExperimentConfig) -> Path:
    if args.out is not None:
        return Path(args.out)
    if cfg.output.directory is not None:
        return Path(cfg.output.directory)
    return Path("runs") / cfg.name


def _load_validated(args) -> ExperimentConfig:
    if args.config is None:
        raise ConfigError("config", "this command requires --config")
    cfg = load_config(args.config)
    validate(cfg)
    return cfg


def cmd_simulate(args) -> int:
    cfg = _load_validated(args)
    if cfg.run is None:
        raise ConfigError("run", "simulate needs a [run] section")
    out_dir = _out_dir(args, cfg)
    out_dir.mkdir(parents=True, exist_ok=True)

    trajectory, rotor, comb, run_config = _run_driven(cfg)
    doc, oracle = _simulate_report(cfg, trajectory, rotor, run_config)

    formats = set(cfg.output.formats)
    if args.format is not None:
        formats.add(args.format)
    (out_dir / "config.ini").write_text(dump_config(cfg))
    cwio.write_trajectory_csv(out_dir / "trajectory.csv", trajectory)
    if "json" in formats:
        cwio.write_trajectory_json(out_dir / "trajectory.json", trajectory)
    cwio.write_distribution_csv(
        out_dir / "oracle.csv", np.arange(rotor.size), oracle
    )
    cwio.write_report_json(out_dir / "report.json", doc)
    print(
        f"simulate {cfg.name}: final t={doc['final_snapshot_t']:g}, "
        f"TV={doc['comparison']['total_variation']:.4g}, "
        f"norm drift={doc['norm_drift_max']:.3g} -> {out_dir}",
        file=sys.stderr,
    )
    return 0


def cmd_field_profile(args) -> int:
    cfg = _load_validated(args)
    profile_cfg = cfg.profile
    t0 = args.t0 if args.t0 is not None else (profile_cfg.t0 if profile_cfg else None)
    t1 = args.t1 if args.t1 is not None else (profile_cfg.t1 if profile_cfg else None)
    n = args.samples if args.samples is not None else (
        profile_cfg.n if profile_cfg else None
    )
    if t0 is None or t1 is None or n is None:
        raise ConfigError(
            "profile", "need t0/t1/n from --t0/--t1/--samples or a [profile] section"
        )
    variants = profile_cfg.j_max_variants if profile_cfg else ()
    out_dir = _out_dir(args, cfg)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "config.ini").write_text(dump_config(cfg))

    rotor = build_rotor(cfg)
    targets = variants or (rotor.j_max,)
    for j_max in targets:
        rotor_v = RotorSpec.normalized(
            d_over_b=cfg.rotor.d_over_b, mu=cfg.rotor.mu, m=cfg.rotor.m, j_max=j_max
        )
        comb = build_field(cfg, rotor_v)
        try:
            profile = sample_profile(comb, t0, t1, n)
        except ValueError as exc:
            raise ConfigError("profile", str(exc)) from None
        name = "profile.csv" if len(targets) == 1 else f"profile_jmax{j_max}.csv"
        cwio.write_field_profile_csv(out_dir / name, profile)
    print(f"field-profile {cfg.name}: {len(targets)} file(s) -> {out_dir}", file=sys.stderr)
    return 0


def _oracle_distribution(kind, gamma, t, n_range, size, origin):
    if kind == "ctqw":
        dist = ctqw_infinite_distribution(gamma, t, n_range)
        return dist.offsets, dist.probabilities
    if kind == "classical":
        dist = classical_ctrw_distribution(gamma, t, n_range)
        return dist.offsets, dist.probabilities
    # finite ladder, reported relative to its origin
    if size is None:
        half = int(np.ceil(gamma * t)) + 60
        size = 2 * half + 1
    if origin is None:
        origin = size // 2
    state = ctqw_finite(size, origin, t, gamma)
    return np.arange(size) - origin, state.populations


def cmd_oracle(args) -> int:
    if args.config is not None:
        cfg = _load_validated(args)
        if cfg.oracle is None:
            raise ConfigError("oracle", "config has no [oracle] section")
        kinds = cfg.oracle.kinds
        gamma, t = cfg.oracle.gamma, cfg.oracle.t
        n_range = cfg.oracle.n_range
        size, origin = cfg.oracle.size, cfg.oracle.origin
        out_dir = _out_dir(args, cfg)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "config.ini").write_text(dump_config(cfg))
    else:
        if args.kind is None:
            raise ConfigError("oracle", "need --kind or --config")
        if args.t is None:
            raise ConfigError("oracle.t", "need --t")
        if args.t < 0:
            raise ConfigError("oracle.t", "time must be non-negative")
        kinds = (args.kind,)
        gamma, t = args.gamma, args.t
        n_range = args.range
        size, origin = args.size, args.origin
        out_dir = Path(args.out) if args.out is not None else Path(".")
        out_dir.mkdir(parents=True, exist_ok=True)
    for kind in kinds:
        offsets, probs = _oracle_distribution(kind, gamma, t, n_range, size, origin)
        cwio.write_distribution_csv(out_dir / f"oracle_{kind}.csv", offsets, probs)
    print(
        f"oracle: wrote {', '.join(kinds)} at gamma*t={gamma * t:g} -> {out_dir}",
        file=sys.stderr,
    )
    return 0


def cmd_compare(args) -> int:
    idx_a, val_a = cwio.read_distribution_csv(Path(args.file_a))
    idx_b, val_b = cwio.read_distribution_csv(Path(args.file_b))
    _, a, b = align_supports(idx_a, val_a, idx_b, val_b)
    try:
        report = compare_distributions(a, b)
    except ValueError as exc:
        raise ConfigError("compare", str(exc)) from None
    doc = {
        "file_a": str(args.file_a),
        "file_b": str(args.file_b),
        "comparison": report.to_dict(),
    }
    if args.out is not None:
        cwio.write_report_json(Path(args.out), doc)
    else:
        import json

        json.dump(doc, sys.stdout, indent=2, sort_keys=True)
        print()
    return 0


def _sweep_cell(payload):
    """One sweep cell, run in a worker process; never raises."""
    cfg, gamma, d_over_b, steps = payload
    cell = {
        "gamma": gamma,
        "d_over_b": d_over_b,
        "steps_per_unit_time": steps,
        "status": "ok",
        "error": "",
        "total_variation": None,
        "norm_drift_max": None,
        "wall_time_s": None,
        "final_amplitudes": None,
        "resolved_steps": None,
    }
    started = time.perf_counter()
    try:
        cell_cfg = replace(
            cfg,
            rotor=replace(cfg.rotor, d_over_b=d_over_b),
            comb=replace(cfg.comb, gamma=gamma),
        )
        validate(cell_cfg)
        trajectory, rotor, comb, run_config = _run_driven(
            cell_cfg, steps_override=steps
        )
        doc, _ = _simulate_report(cell_cfg, trajectory, rotor, run_config)
        cell["total_variation"] = doc["comparison"]["total_variation"]
        cell["norm_drift_max"] = doc["norm_drift_max"]
        cell["final_amplitudes"] = trajectory.final.amplitudes
        cell["resolved_steps"] = run_config.steps_per_unit_time
    except Exception as exc:  # cell failures are data, not crashes
        cell["status"] = "failed"
        cell["error"] = f"{type(exc).__name__}: {exc}"
    cell["wall_time_s"] = time.perf_counter() - started
    return cell


def cmd_sweep(args) -> int:
    cfg = _load_validated(args)
    if cfg.sweep is None:
        raise ConfigError("sweep", "sweep needs a [sweep] section")
    gammas = cfg.sweep.gamma or (cfg.comb.gamma,)
    ratios = cfg.sweep.d_over_b or (cfg.rotor.d_over_b,)
    steps_axis = cfg.sweep.steps_per_unit_time or (
        cfg.run.steps_per_unit_time,
    )  # None means the resolution rule
    cells = list(itertools.product(gammas, ratios, steps_axis))
    payloads = [(cfg, g, r, s) for g, r, s in cells]

    workers = args.workers or min(len(cells), os.cpu_count() or 1)
    if workers <= 1 or len(cells) == 1:
        results = [_sweep_cell(p) for p in payloads]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_cell, payloads))

    # RK4 quality column: distance to the finest-step cell of the same
    # physical parameters
    by_params = {}
    for row in results:
        by_params.setdefault((row["gamma"], row["d_over_b"]), []).append(row)
    for group in by_params.values():
        ok = [r for r in group if r["status"] == "ok"]
        if len(ok) < 2:
            continue
        finest = max(ok, key=lambda r: r["resolved_steps"])
        for row in ok:
            if row is finest:
                continue
            diff = row["final_amplitudes"] - finest["final_amplitudes"]
            row["state_error_vs_finest"] = float(np.linalg.norm(diff))

    out_dir = _out_dir(args, cfg)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "config.ini").write_text(dump_config(cfg))
    table = out_dir / "sweep.csv"
    with open(table, "w", newline="") as fh:
        fh.write(f"# {cwio.SWEEP_SCHEMA}\n")
        fh.write(
            "gamma,d_over_b,steps_per_unit_time,total_variation,"
            "norm_drift_max,state_error_vs_finest,wall_time_s,status,error\n"
        )
        for row in results:
            steps_repr = "auto" if row["steps_per_unit_time"] is None else str(
                row["steps_per_unit_time"]
            )
            err_col = row.get("state_error_vs_finest")
            fh.write(
                ",".join(
                    [
                        repr(row["gamma"]),
                        repr(row["d_over_b"]),
                        steps_repr,
                        "" if row["total_variation"] is None else repr(row["total_variation"]),
                        "" if row["norm_drift_max"] is None else repr(row["norm_drift_max"]),
                        "" if err_col is None else repr(err_col),
                        repr(row["wall_time_s"]),
                        row["status"],
                        '"%s"' % row["error"].replace('"', "'"),
                    ]
                )
                + "\n"
            )
    failed = sum(1 for r in results if r["status"] != "ok")
    print(
        f"sweep {cfg.name}: {len(results)} cells, {failed} failed -> {table}",
        file=sys.stderr,
    )
    return 3 if failed else 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="combwalk",
        description=(
            "Quantum walk on a comb-driven molecular rotational ladder: "
            "driven-run simulation, field synthesis and analytic references."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="config file path or bundled preset name")
        p.add_argument("--out", help="output directory (overrides [output])")

    p_sim = sub.add_parser("simulate", help="integrate a driven run, emit run files")
    add_common(p_sim)
    p_sim.add_argument(
        "--format", choices=("csv", "json"), help="additional trajectory format"
    )
    p_sim.set_defaults(func=cmd_simulate)

    p_prof = sub.add_parser("field-profile", help="sample the comb field over a window")
    add_common(p_prof)
    p_prof.add_argument("--t0", type=float, help="window start")
    p_prof.add_argument("--t1", type=float, help="window end")
    p_prof.add_argument("-n", "--samples", type=int, help="number of samples")
    p_prof.set_defaults(func=cmd_field_profile)

    p_oracle = sub.add_parser("oracle", help="emit an analytic walk distribution")
    add_common(p_oracle)
    p_oracle.add_argument("--kind", choices=("ctqw", "classical", "finite"))
    p_oracle.add_argument("--gamma", type=float, default=1.0)
    p_oracle.add_argument("--t", type=float)
    p_oracle.add_argument("--range", type=int, help="half-width of reported offsets")
    p_oracle.add_argument("--size", type=int, help="finite-ladder site count")
    p_oracle.add_argument("--origin", type=int, help="finite-ladder start site")
    p_oracle.set_defaults(func=cmd_oracle)

    p_cmp = sub.add_parser("compare", help="compare two distribution files")
    p_cmp.add_argument("file_a")
    p_cmp.add_argument("file_b")
    p_cmp.add_argument("--out", help="write the report JSON here instead of stdout")
    p_cmp.set_defaults(func=cmd_compare)

    p_sweep = sub.add_parser("sweep", help="run a parameter sweep in parallel")
    add_common(p_sweep)
    p_sweep.add_argument("--workers", type=int, help="parallel worker processes")
    p_sweep.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"combwalk: config error: {exc}", file=sys.stderr)
        return 2
    except IntegrationError as exc:
        print(f"combwalk: integration error: {exc}", file=sys.stderr)
        return 3
    except FileNotFoundError as exc:
        print(f"combwalk: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
