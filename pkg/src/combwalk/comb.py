"""Frequency-comb field synthesis and time-domain evaluation.

The driving field is a finite sum of zero-phase cosines, one per ladder
transition: component J' has amplitude gamma / mu_J' and sits exactly on the
transition frequency (rigid law, or the distortion-compensated law when the
comb is built "distorted").  In the time domain this is a pulse train with
interval (2B)^-1; the compensated variant is a train of chirped pulses.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rotor import RotorSpec, transition_dipoles, transition_frequencies

# rows per block when evaluating long sample grids, keeps the (n_times x
# n_components) work array small
_CHUNK = 4096


@dataclass(frozen=True, eq=False)
class CombSpec:
    """A synthesized comb: per-component amplitudes/frequencies plus origin.

    amplitudes[k] = gamma / mu_k and frequencies are strictly increasing;
    both arrays have rotor.j_max entries.  gamma = 0 yields the degenerate
    all-zero field used for identity-evolution checks.
    """

    amplitudes: np.ndarray
    frequencies: np.ndarray
    gamma: float
    distorted: bool
    rotor: RotorSpec

    @property
    def component_count(self) -> int:
        return self.amplitudes.size


@dataclass(frozen=True, eq=False)
class FieldProfile:
    """Uniformly sampled field amplitude over a time window."""

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        if self.times.size != self.values.size:
            raise ValueError("times and values must have equal length")
        if self.times.size >= 2 and not np.all(np.diff(self.times) > 0):
            raise ValueError("sample times must be strictly increasing")


def build_comb(rotor: RotorSpec, gamma: float, distorted: bool = False) -> CombSpec:
    """Synthesize the comb addressing every ladder transition of `rotor`.

    Component J' = 0 .. j_max-1 gets amplitude gamma / mu_J' and frequency
    nu_J' (distortion-compensated when `distorted`).
    """
    if gamma < 0:
        raise ValueError(f"hopping rate must be non-negative, got gamma={gamma}")
    mu = transition_dipoles(rotor)
    if np.any(mu <= 0):
        bad = int(np.argmax(mu <= 0))
        raise ValueError(
            f"comb component J'={bad} has vanishing transition dipole "
            f"(M={rotor.m}); cannot normalize amplitudes"
        )
    nu = transition_frequencies(rotor, distorted)
    if np.any(np.diff(nu) <= 0):
        raise ValueError(
            "comb frequencies are not strictly increasing; distortion too "
            "large for this ladder"
        )
    amps = gamma / mu
    amps.flags.writeable = False
    nu.flags.writeable = False
    return CombSpec(
        amplitudes=amps, frequencies=nu, gamma=gamma, distorted=distorted, rotor=rotor
    )


def field_amplitude(comb: CombSpec, t: float) -> float:
    """Field value sum_k A_k cos(2 pi f_k t); pure and deterministic."""
    return float(np.dot(comb.amplitudes, np.cos(2.0 * np.pi * comb.frequencies * t)))


def sample_profile(comb: CombSpec, t0: float, t1: float, n: int) -> FieldProfile:
    """n uniform samples of the field over [t0, t1]."""
    if n < 2:
        raise ValueError(f"need at least 2 samples, got n={n}")
    if not t1 > t0:
        raise ValueError(f"empty window: t0={t0}, t1={t1}")
    times = np.linspace(t0, t1, n)
    values = np.empty(n)
    w = 2.0 * np.pi * comb.frequencies
    for lo in range(0, n, _CHUNK):
        hi = min(lo + _CHUNK, n)
        values[lo:hi] = np.cos(np.outer(times[lo:hi], w)) @ comb.amplitudes
    times.flags.writeable = False
    values.flags.writeable = False
    return FieldProfile(times=times, values=values)
