"""Quantum walk on a comb-driven molecular rotational ladder.

Library layout:

- `rotor`: level energies, transition frequencies and dipoles
- `comb`: driving-field synthesis and time-domain sampling
- `dynamics`: RK4 propagation of the driven ladder; spectral hopping reference
- `oracles`: closed-form lattice-walk solutions (Bessel machinery)
- `metrics`: distribution comparison used by the verification suite
- `config` / `cli`: experiment configs, presets and the command-line front end
"""

from .comb import CombSpec, FieldProfile, build_comb, field_amplitude, sample_profile
from .config import ConfigError, ExperimentConfig, load_config
from .dynamics import (
    IntegrationError,
    RunConfig,
    Trajectory,
    WalkState,
    default_steps_per_unit_time,
    derivative,
    propagate,
    propagate_rwa,
)
from .metrics import (
    ComparisonReport,
    Moments,
    align_supports,
    compare_distributions,
    moments,
    total_variation,
)
from .oracles import (
    LatticeDistribution,
    bessel_j,
    bessel_j_sequence,
    classical_ctrw,
    classical_ctrw_distribution,
    ctqw_finite,
    ctqw_infinite,
    ctqw_infinite_distribution,
    scaled_bessel_i_sequence,
)
from .rotor import (
    RotorSpec,
    rotational_energy,
    transition_dipole,
    transition_dipoles,
    transition_frequencies,
    transition_frequency,
)

__version__ = "0.1.0"

__all__ = [
    "CombSpec",
    "ComparisonReport",
    "ConfigError",
    "ExperimentConfig",
    "FieldProfile",
    "IntegrationError",
    "LatticeDistribution",
    "Moments",
    "RotorSpec",
    "RunConfig",
    "Trajectory",
    "WalkState",
    "align_supports",
    "bessel_j",
    "bessel_j_sequence",
    "build_comb",
    "classical_ctrw",
    "classical_ctrw_distribution",
    "compare_distributions",
    "ctqw_finite",
    "ctqw_infinite",
    "ctqw_infinite_distribution",
    "default_steps_per_unit_time",
    "derivative",
    "field_amplitude",
    "load_config",
    "moments",
    "propagate",
    "propagate_rwa",
    "rotational_energy",
    "sample_profile",
    "scaled_bessel_i_sequence",
    "total_variation",
    "transition_dipole",
    "transition_dipoles",
    "transition_frequencies",
    "transition_frequency",
    "__version__",
]
