"""Experiment configuration: INI parsing, validation and bundled presets.

A config is a flat sectioned key/value document.  Sections mirror the run
pipeline: [rotor] and [comb] define the system, [run] the integration
window, [output] the emission targets; [profile], [oracle] and [sweep] are
present only for the commands that need them.  `validate` checks every
value against the library preconditions before anything is run and reports
failures as `section.key: message`.
"""

from __future__ import annotations

import configparser
import io as _io
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .comb import CombSpec, build_comb
from .dynamics import RunConfig, default_steps_per_unit_time
from .rotor import RotorSpec


class ConfigError(ValueError):
    """Invalid configuration; `field` names the offending section.key."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass(frozen=True)
class RotorSection:
    d_over_b: float = 0.0
    mu: float = 1.0
    m: int = 0
    j_max: int = 1
    b_hz: float | None = None


@dataclass(frozen=True)
class CombSection:
    gamma: float = 1.0
    distorted: bool = False


@dataclass(frozen=True)
class RunSection:
    t_start: float = 0.0
    t_end: float = 1.0
    initial_j: int = 0
    steps_per_unit_time: int | None = None  # None: resolution rule applies
    snapshots: tuple | str = "each-pulse"


@dataclass(frozen=True)
class OutputSection:
    directory: str | None = None
    formats: tuple = ("csv",)


@dataclass(frozen=True)
class ProfileSection:
    t0: float = 0.0
    t1: float = 1.0
    n: int = 1001
    j_max_variants: tuple = ()


@dataclass(frozen=True)
class OracleSection:
    kinds: tuple = ("ctqw",)
    gamma: float = 1.0
    t: float = 0.0
    n_range: int | None = None
    size: int | None = None
    origin: int | None = None


@dataclass(frozen=True)
class SweepSection:
    gamma: tuple = ()
    d_over_b: tuple = ()
    steps_per_unit_time: tuple = ()


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    rotor: RotorSection = field(default_factory=RotorSection)
    comb: CombSection = field(default_factory=CombSection)
    run: RunSection | None = None
    output: OutputSection = field(default_factory=OutputSection)
    profile: ProfileSection | None = None
    oracle: OracleSection | None = None
    sweep: SweepSection | None = None


_ORACLE_KINDS = ("ctqw", "classical", "finite")
_FORMATS = ("csv", "json")


def _parse_float(raw: str, where: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(where, f"not a number: {raw!r}") from None


def _parse_int(raw: str, where: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(where, f"not an integer: {raw!r}") from None


def _parse_bool(raw: str, where: str) -> bool:
    low = raw.strip().lower()
    if low in ("true", "yes", "on", "1"):
        return True
    if low in ("false", "no", "off", "0"):
        return False
    raise ConfigError(where, f"not a boolean: {raw!r}")


def _parse_list(raw: str):
    return [item.strip() for item in raw.split(",") if item.strip()]


def _section_keys(parser, section, allowed):
    for key in parser[section]:
        if key not in allowed:
            raise ConfigError(f"{section}.{key}", "unknown key")


def parse_config(text: str, name: str) -> ExperimentConfig:
    """Parse an INI document into an ExperimentConfig (syntax-level checks)."""
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError("document", str(exc)) from None

    known_sections = {
        "rotor", "comb", "run", "output", "profile", "oracle", "sweep"
    }
    for section in parser.sections():
        if section not in known_sections:
            raise ConfigError(section, "unknown section")

    rotor = RotorSection()
    if parser.has_section("rotor"):
        _section_keys(parser, "rotor", {"d_over_b", "mu", "m", "j_max", "b_hz"})
        s = parser["rotor"]
        rotor = RotorSection(
            d_over_b=_parse_float(s.get("d_over_b", "0"), "rotor.d_over_b"),
            mu=_parse_float(s.get("mu", "1.0"), "rotor.mu"),
            m=_parse_int(s.get("m", "0"), "rotor.m"),
            j_max=_parse_int(s.get("j_max", "1"), "rotor.j_max"),
            b_hz=(
                _parse_float(s["b_hz"], "rotor.b_hz") if "b_hz" in s else None
            ),
        )

    comb = CombSection()
    if parser.has_section("comb"):
        _section_keys(parser, "comb", {"gamma", "distorted"})
        s = parser["comb"]
        comb = CombSection(
            gamma=_parse_float(s.get("gamma", "1.0"), "comb.gamma"),
            distorted=_parse_bool(s.get("distorted", "false"), "comb.distorted"),
        )

    run = None
    if parser.has_section("run"):
        _section_keys(
            parser,
            "run",
            {"t_start", "t_end", "initial_j", "steps_per_unit_time", "snapshots"},
        )
        s = parser["run"]
        steps_raw = s.get("steps_per_unit_time", "auto").strip()
        steps = None if steps_raw == "auto" else _parse_int(
            steps_raw, "run.steps_per_unit_time"
        )
        snaps_raw = s.get("snapshots", "each-pulse").strip()
        if snaps_raw == "each-pulse":
            snapshots: tuple | str = "each-pulse"
        else:
            snapshots = tuple(
                _parse_float(v, "run.snapshots") for v in _parse_list(snaps_raw)
            )
        run = RunSection(
            t_start=_parse_float(s.get("t_start", "0"), "run.t_start"),
            t_end=_parse_float(s.get("t_end", "1"), "run.t_end"),
            initial_j=_parse_int(s.get("initial_j", "0"), "run.initial_j"),
            steps_per_unit_time=steps,
            snapshots=snapshots,
        )

    output = OutputSection()
    if parser.has_section("output"):
        _section_keys(parser, "output", {"directory", "formats"})
        s = parser["output"]
        formats = tuple(_parse_list(s.get("formats", "csv"))) or ("csv",)
        for fmt in formats:
            if fmt not in _FORMATS:
                raise ConfigError("output.formats", f"unknown format {fmt!r}")
        output = OutputSection(directory=s.get("directory", None), formats=formats)

    profile = None
    if parser.has_section("profile"):
        _section_keys(parser, "profile", {"t0", "t1", "n", "j_max_variants"})
        s = parser["profile"]
        variants = tuple(
            _parse_int(v, "profile.j_max_variants")
            for v in _parse_list(s.get("j_max_variants", ""))
        )
        profile = ProfileSection(
            t0=_parse_float(s.get("t0", "0"), "profile.t0"),
            t1=_parse_float(s.get("t1", "1"), "profile.t1"),
            n=_parse_int(s.get("n", "1001"), "profile.n"),
            j_max_variants=variants,
        )

    oracle = None
    if parser.has_section("oracle"):
        _section_keys(
            parser, "oracle", {"kinds", "gamma", "t", "n_range", "size", "origin"}
        )
        s = parser["oracle"]
        kinds = tuple(_parse_list(s.get("kinds", "ctqw")))
        oracle = OracleSection(
            kinds=kinds,
            gamma=_parse_float(s.get("gamma", "1.0"), "oracle.gamma"),
            t=_parse_float(s.get("t", "0"), "oracle.t"),
            n_range=(
                _parse_int(s["n_range"], "oracle.n_range") if "n_range" in s else None
            ),
            size=_parse_int(s["size"], "oracle.size") if "size" in s else None,
            origin=_parse_int(s["origin"], "oracle.origin") if "origin" in s else None,
        )

    sweep = None
    if parser.has_section("sweep"):
        _section_keys(parser, "sweep", {"gamma", "d_over_b", "steps_per_unit_time"})
        s = parser["sweep"]
        sweep = SweepSection(
            gamma=tuple(
                _parse_float(v, "sweep.gamma") for v in _parse_list(s.get("gamma", ""))
            ),
            d_over_b=tuple(
                _parse_float(v, "sweep.d_over_b")
                for v in _parse_list(s.get("d_over_b", ""))
            ),
            steps_per_unit_time=tuple(
                _parse_int(v, "sweep.steps_per_unit_time")
                for v in _parse_list(s.get("steps_per_unit_time", ""))
            ),
        )

    return ExperimentConfig(
        name=name,
        rotor=rotor,
        comb=comb,
        run=run,
        output=output,
        profile=profile,
        oracle=oracle,
        sweep=sweep,
    )


def dump_config(cfg: ExperimentConfig) -> str:
    """Canonical INI serialization; parse(dump(parse(x))) == parse(x)."""
    parser = configparser.ConfigParser()
    parser["rotor"] = {
        "d_over_b": repr(cfg.rotor.d_over_b),
        "mu": repr(cfg.rotor.mu),
        "m": str(cfg.rotor.m),
        "j_max": str(cfg.rotor.j_max),
    }
    if cfg.rotor.b_hz is not None:
        parser["rotor"]["b_hz"] = repr(cfg.rotor.b_hz)
    parser["comb"] = {
        "gamma": repr(cfg.comb.gamma),
        "distorted": "true" if cfg.comb.distorted else "false",
    }
    if cfg.run is not None:
        snaps = (
            cfg.run.snapshots
            if isinstance(cfg.run.snapshots, str)
            else ", ".join(repr(t) for t in cfg.run.snapshots)
        )
        parser["run"] = {
            "t_start": repr(cfg.run.t_start),
            "t_end": repr(cfg.run.t_end),
            "initial_j": str(cfg.run.initial_j),
            "steps_per_unit_time": (
                "auto"
                if cfg.run.steps_per_unit_time is None
                else str(cfg.run.steps_per_unit_time)
            ),
            "snapshots": snaps,
        }
    out = {"formats": ", ".join(cfg.output.formats)}
    if cfg.output.directory is not None:
        out["directory"] = cfg.output.directory
    parser["output"] = out
    if cfg.profile is not None:
        parser["profile"] = {
            "t0": repr(cfg.profile.t0),
            "t1": repr(cfg.profile.t1),
            "n": str(cfg.profile.n),
        }
        if cfg.profile.j_max_variants:
            parser["profile"]["j_max_variants"] = ", ".join(
                str(v) for v in cfg.profile.j_max_variants
            )
    if cfg.oracle is not None:
        parser["oracle"] = {
            "kinds": ", ".join(cfg.oracle.kinds),
            "gamma": repr(cfg.oracle.gamma),
            "t": repr(cfg.oracle.t),
        }
        if cfg.oracle.n_range is not None:
            parser["oracle"]["n_range"] = str(cfg.oracle.n_range)
        if cfg.oracle.size is not None:
            parser["oracle"]["size"] = str(cfg.oracle.size)
        if cfg.oracle.origin is not None:
            parser["oracle"]["origin"] = str(cfg.oracle.origin)
    if cfg.sweep is not None:
        section = {}
        if cfg.sweep.gamma:
            section["gamma"] = ", ".join(repr(v) for v in cfg.sweep.gamma)
        if cfg.sweep.d_over_b:
            section["d_over_b"] = ", ".join(repr(v) for v in cfg.sweep.d_over_b)
        if cfg.sweep.steps_per_unit_time:
            section["steps_per_unit_time"] = ", ".join(
                str(v) for v in cfg.sweep.steps_per_unit_time
            )
        parser["sweep"] = section
    buf = _io.StringIO()
    parser.write(buf)
    return buf.getvalue()


def preset_names() -> list:
    """Names of the bundled experiment presets."""
    files = resources.files("combwalk").joinpath("presets")
    return sorted(p.name[:-4] for p in files.iterdir() if p.name.endswith(".ini"))


def load_config(source: str | Path) -> ExperimentConfig:
    """Load a config from a file path or a bundled preset name."""
    path = Path(source)
    if path.is_file():
        return parse_config(path.read_text(), path.stem)
    name = str(source)
    candidate = resources.files("combwalk").joinpath("presets", f"{name}.ini")
    if candidate.is_file():
        return parse_config(candidate.read_text(), name)
    raise ConfigError(
        "config",
        f"{source!r} is neither a file nor a bundled preset "
        f"(available: {', '.join(preset_names())})",
    )


def molecule_is_distorted(cfg: ExperimentConfig) -> bool:
    """Driven runs use the distorted frequency law whenever the rotor has D > 0."""
    return cfg.rotor.d_over_b > 0


def build_rotor(cfg: ExperimentConfig) -> RotorSpec:
    try:
        return RotorSpec.normalized(
            d_over_b=cfg.rotor.d_over_b,
            mu=cfg.rotor.mu,
            m=cfg.rotor.m,
            j_max=cfg.rotor.j_max,
        )
    except ValueError as exc:
        raise ConfigError("rotor", str(exc)) from None


def build_field(cfg: ExperimentConfig, rotor: RotorSpec) -> CombSpec:
    try:
        return build_comb(rotor, cfg.comb.gamma, cfg.comb.distorted)
    except ValueError as exc:
        raise ConfigError("comb", str(exc)) from None


def resolve_snapshots(run: RunSection) -> tuple:
    if isinstance(run.snapshots, tuple):
        return run.snapshots
    span = run.t_end - run.t_start
    count = int(math.floor(span + 1e-9)) if span >= 1.0 else 0
    if count < 1:
        raise ConfigError(
            "run.snapshots",
            "each-pulse needs a window of at least one pulse interval; "
            "give explicit snapshot times instead",
        )
    return tuple(run.t_start + k for k in range(1, count + 1))


def build_run_config(cfg: ExperimentConfig, comb: CombSpec) -> RunConfig:
    if cfg.run is None:
        raise ConfigError("run", "this command needs a [run] section")
    steps = cfg.run.steps_per_unit_time
    if steps is None:
        steps = default_steps_per_unit_time(comb)
    try:
        return RunConfig(
            t_start=cfg.run.t_start,
            t_end=cfg.run.t_end,
            steps_per_unit_time=steps,
            snapshot_times=resolve_snapshots(cfg.run),
            initial_j=cfg.run.initial_j,
        )
    except ValueError as exc:
        raise ConfigError("run", str(exc)) from None


def validate(cfg: ExperimentConfig) -> None:
    """Check a parsed config against all module preconditions."""
    rotor = build_rotor(cfg)
    comb = build_field(cfg, rotor)
    if cfg.rotor.b_hz is not None and not cfg.rotor.b_hz > 0:
        raise ConfigError("rotor.b_hz", "physical rotational constant must be positive")
    if cfg.run is not None:
        build_run_config(cfg, comb)
        if not 0 <= cfg.run.initial_j <= rotor.j_max:
            raise ConfigError(
                "run.initial_j",
                f"must lie on the ladder 0..{rotor.j_max}, got {cfg.run.initial_j}",
            )
    if cfg.profile is not None:
        if not cfg.profile.t1 > cfg.profile.t0:
            raise ConfigError("profile.t1", "window must be non-empty")
        if cfg.profile.n < 2:
            raise ConfigError("profile.n", "need at least two samples")
        for variant in cfg.profile.j_max_variants:
            if variant < 1:
                raise ConfigError("profile.j_max_variants", "entries must be >= 1")
    if cfg.oracle is not None:
        if not cfg.oracle.kinds:
            raise ConfigError("oracle.kinds", "need at least one oracle kind")
        for kind in cfg.oracle.kinds:
            if kind not in _ORACLE_KINDS:
                raise ConfigError(
                    "oracle.kinds",
                    f"unknown kind {kind!r}; choose from {', '.join(_ORACLE_KINDS)}",
                )
        if cfg.oracle.t < 0:
            raise ConfigError("oracle.t", "time must be non-negative")
        if "finite" in cfg.oracle.kinds:
            size = cfg.oracle.size
            if size is not None and size < 2:
                raise ConfigError("oracle.size", "finite ladder needs >= 2 sites")
    if cfg.sweep is not None:
        axes = (
            cfg.sweep.gamma,
            cfg.sweep.d_over_b,
            cfg.sweep.steps_per_unit_time,
        )
        if not any(axes):
            raise ConfigError("sweep", "at least one sweep axis is required")
        for g in cfg.sweep.gamma:
            if g < 0:
                raise ConfigError("sweep.gamma", "hopping rates must be non-negative")
        for r in cfg.sweep.d_over_b:
            if r < 0:
                raise ConfigError("sweep.d_over_b", "ratios must be non-negative")
        for s in cfg.sweep.steps_per_unit_time:
            if s < 1:
                raise ConfigError("sweep.steps_per_unit_time", "must be >= 1")
        if cfg.run is None:
            raise ConfigError("run", "sweeps need a [run] section")
