"""Driven-ladder Schrödinger dynamics and the resonant hopping reference.

The working equation is the interaction-picture amplitude equation for a
dipole ladder under a real driving field eps(t):

    dc_J/dt = i * [ mu_{J-1} eps(t) e^{+2 pi i nu_{J-1} t} c_{J-1}
                  + mu_J     eps(t) e^{-2 pi i nu_J t}     c_{J+1} ]

with the lower term absent at J = 0 and the upper term absent at the top of
the ladder.  Phases use ordinary frequencies, hence the explicit 2 pi.
`propagate` integrates this with fixed-step classical RK4; `propagate_rwa`
evolves under the time-independent nearest-neighbour hopping Hamiltonian
H_{J,J+-1} = -gamma/2 (what the comb drive reduces to once detuned terms
average out) using the closed-form path-graph eigensystem.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .comb import CombSpec
from .rotor import RotorSpec, transition_dipoles, transition_frequencies

_TWO_PI = 2.0 * np.pi

# Half-steps between exact trig refreshes of the incremental phase rotators.
# Drift between refreshes stays near 1e-13, far inside the 1e-10 agreement
# budget against direct evaluation.
_RESYNC_INTERVAL = 512

# Fastest comb period gets at least this many RK4 steps.  32 per period
# resolves the dynamics but leaves ~2e-6 norm drift over a 50-pulse run;
# 64 holds the drift near 1e-7.
_STEPS_PER_PERIOD = 64


class IntegrationError(RuntimeError):
    """Integration produced a non-finite state; `step` is the failing index."""

    def __init__(self, step: int, t: float):
        super().__init__(f"state became non-finite at step {step} (t = {t:g})")
        self.step = step
        self.t = t


@dataclass(frozen=True, eq=False)
class WalkState:
    """Complex amplitudes over the ladder at one instant."""

    amplitudes: np.ndarray
    time: float = 0.0

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.ndim != 1 or amps.size < 2:
            raise ValueError("amplitudes must be a 1-d vector of at least 2 entries")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def delta(cls, size: int, index: int, time: float = 0.0) -> "WalkState":
        """All population on one site."""
        if not 0 <= index < size:
            raise ValueError(f"index {index} outside ladder of size {size}")
        amps = np.zeros(size, dtype=np.complex128)
        amps[index] = 1.0
        return cls(amplitudes=amps, time=time)

    @property
    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def norm(self) -> float:
        return float(np.sum(self.populations))


@dataclass(frozen=True)
class RunConfig:
    """Integration window, resolution and snapshot schedule.

    Snapshot times are snapped to the nearest step-grid point; the natural
    strobe for comb-driven runs is the pulse-interval midpoints.
    """

    t_start: float
    t_end: float
    steps_per_unit_time: int
    snapshot_times: tuple
    initial_j: int = 0

    def __post_init__(self) -> None:
        if not self.t_end > self.t_start:
            raise ValueError(f"empty window: [{self.t_start}, {self.t_end}]")
        if self.steps_per_unit_time < 1:
            raise ValueError("steps_per_unit_time must be at least 1")
        snaps = tuple(float(t) for t in self.snapshot_times)
        if not snaps:
            raise ValueError("at least one snapshot time is required")
        if any(b < a for a, b in zip(snaps, snaps[1:])):
            raise ValueError("snapshot times must be sorted")
        eps = 1e-9
        if snaps[0] < self.t_start - eps or snaps[-1] > self.t_end + eps:
            raise ValueError(
                f"snapshot times must lie within [{self.t_start}, {self.t_end}]"
            )
        if self.initial_j < 0:
            raise ValueError("initial_j must be non-negative")
        object.__setattr__(self, "snapshot_times", snaps)

    @property
    def step_size(self) -> float:
        return 1.0 / self.steps_per_unit_time

    @property
    def n_steps(self) -> int:
        return int(round((self.t_end - self.t_start) * self.steps_per_unit_time))

    def snapshot_steps(self) -> np.ndarray:
        """Step index nearest each requested snapshot time."""
        k = np.rint(
            (np.asarray(self.snapshot_times) - self.t_start) * self.steps_per_unit_time
        ).astype(np.int64)
        return np.clip(k, 0, self.n_steps)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Ordered snapshots of a propagation plus derived per-snapshot data."""

    snapshots: list
    requested_times: tuple
    norm_drift: np.ndarray = field(default=None)

    def __post_init__(self) -> None:
        if self.norm_drift is None:
            drift = np.array([s.norm() - 1.0 for s in self.snapshots])
            object.__setattr__(self, "norm_drift", drift)

    @property
    def times(self) -> np.ndarray:
        return np.array([s.time for s in self.snapshots])

    @property
    def populations(self) -> np.ndarray:
        """Snapshot-major matrix of |c_J|^2."""
        return np.array([s.populations for s in self.snapshots])

    @property
    def final(self) -> WalkState:
        return self.snapshots[-1]

    def max_norm_drift(self) -> float:
        return float(np.max(np.abs(self.norm_drift)))


def default_steps_per_unit_time(comb: CombSpec) -> int:
    """Resolution rule: >= 32 RK4 steps per period of the fastest component."""
    f_max = float(np.max(comb.frequencies))
    return max(_STEPS_PER_PERIOD, int(np.ceil(_STEPS_PER_PERIOD * f_max)))


def derivative(
    state: WalkState,
    t: float,
    comb: CombSpec,
    rotor: RotorSpec,
    distorted: bool = False,
) -> np.ndarray:
    """Right-hand side dc/dt of the amplitude equation at time t.

    Reference implementation; `propagate` runs the same arithmetic in a
    compiled loop.
    """
    c = state.amplitudes
    if c.size != rotor.size:
        raise ValueError(
            f"state dimension {c.size} does not match ladder size {rotor.size}"
        )
    if comb.component_count != rotor.j_max:
        raise ValueError(
            f"comb has {comb.component_count} components, ladder needs {rotor.j_max}"
        )
    eps = float(np.dot(comb.amplitudes, np.cos(_TWO_PI * comb.frequencies * t)))
    nu = transition_frequencies(rotor, distorted)
    mu = transition_dipoles(rotor)
    ph = np.exp(1j * (_TWO_PI * nu * t))
    dc = np.zeros_like(c)
    dc[1:] += 1j * eps * mu * ph * c[:-1]
    dc[:-1] += 1j * eps * mu * np.conj(ph) * c[1:]
    return dc


@njit(cache=True)
def _set_phasors(out, freqs, t):
    for i in range(freqs.size):
        w = _TWO_PI * freqs[i] * t
        out[i] = complex(np.cos(w), np.sin(w))


@njit(cache=True)
def _coupling_rhs(c, eps, mu, ph, out):
    n = c.size
    out[0] = 1j * (mu[0] * eps * np.conj(ph[0]) * c[1])
    for j in range(1, n - 1):
        out[j] = 1j * (
            mu[j - 1] * eps * ph[j - 1] * c[j - 1]
            + mu[j] * eps * np.conj(ph[j]) * c[j + 1]
        )
    out[n - 1] = 1j * (mu[n - 2] * eps * ph[n - 2] * c[n - 2])


@njit(cache=True)
def _rk4_run(c, t_start, h, n_steps, mu, nu, amps, freqs, snap_steps, resync, out):
    """Fixed-step RK4 over n_steps; records `c` at the listed step counts.

    Phase factors and the field are tracked on the half-step grid with
    incremental complex rotators, refreshed exactly every `resync`
    half-steps (resync = 1 reproduces direct trig evaluation everywhere).
    Returns -1 on success, else the 1-based step at which the state went
    non-finite.
    """
    n = c.size
    nb = nu.size
    m = freqs.size
    half = 0.5 * h

    k1 = np.empty(n, np.complex128)
    k2 = np.empty(n, np.complex128)
    k3 = np.empty(n, np.complex128)
    k4 = np.empty(n, np.complex128)
    ctmp = np.empty(n, np.complex128)
    ph = np.empty(nb, np.complex128)
    fz = np.empty(m, np.complex128)
    rot_ph = np.empty(nb, np.complex128)
    rot_fz = np.empty(m, np.complex128)
    _set_phasors(rot_ph, nu, half)
    _set_phasors(rot_fz, freqs, half)
    _set_phasors(ph, nu, t_start)
    _set_phasors(fz, freqs, t_start)

    si = 0
    n_snaps = snap_steps.size
    while si < n_snaps and snap_steps[si] == 0:
        out[si, :] = c
        si += 1

    q = 0  # half-step index of the current integration time
    for step in range(n_steps):
        eps0 = 0.0
        for i in range(m):
            eps0 += amps[i] * fz[i].real
        _coupling_rhs(c, eps0, mu, ph, k1)

        q += 1
        if q % resync == 0:
            t_half = t_start + q * half
            _set_phasors(ph, nu, t_half)
            _set_phasors(fz, freqs, t_half)
        else:
            for i in range(nb):
                ph[i] *= rot_ph[i]
            for i in range(m):
                fz[i] *= rot_fz[i]
        eps1 = 0.0
        for i in range(m):
            eps1 += amps[i] * fz[i].real
        for j in range(n):
            ctmp[j] = c[j] + half * k1[j]
        _coupling_rhs(ctmp, eps1, mu, ph, k2)
        for j in range(n):
            ctmp[j] = c[j] + half * k2[j]
        _coupling_rhs(ctmp, eps1, mu, ph, k3)

        q += 1
        if q % resync == 0:
            t_full = t_start + q * half
            _set_phasors(ph, nu, t_full)
            _set_phasors(fz, freqs, t_full)
        else:
            for i in range(nb):
                ph[i] *= rot_ph[i]
            for i in range(m):
                fz[i] *= rot_fz[i]
        eps2 = 0.0
        for i in range(m):
            eps2 += amps[i] * fz[i].real
        for j in range(n):
            ctmp[j] = c[j] + h * k3[j]
        _coupling_rhs(ctmp, eps2, mu, ph, k4)

        sixth = h / 6.0
        nrm = 0.0
        for j in range(n):
            c[j] = c[j] + sixth * (k1[j] + 2.0 * (k2[j] + k3[j]) + k4[j])
            nrm += c[j].real * c[j].real + c[j].imag * c[j].imag
        if not np.isfinite(nrm):
            return step + 1

        while si < n_snaps and snap_steps[si] == step + 1:
            out[si, :] = c
            si += 1
    return -1


def propagate(
    initial: WalkState,
    comb: CombSpec,
    rotor: RotorSpec,
    config: RunConfig,
    distorted: bool = False,
    phase_eval: str = "rotator",
) -> Trajectory:
    """Integrate the driven ladder over the configured window.

    `phase_eval` selects how the oscillating factors are evaluated on the
    step grid: "rotator" (incremental, periodically refreshed; the default)
    or "direct" (fresh trig at every half-step).  The two agree to better
    than 1e-10 per amplitude and exist so that agreement can be tested.
    """
    c0 = initial.amplitudes
    if c0.size != rotor.size:
        raise ValueError(
            f"initial state has {c0.size} amplitudes, ladder needs {rotor.size}"
        )
    if comb.component_count != rotor.j_max:
        raise ValueError(
            f"comb has {comb.component_count} components, ladder needs {rotor.j_max}"
        )
    if abs(initial.norm() - 1.0) > 1e-8:
        raise ValueError(f"initial state is not normalized (norm = {initial.norm()})")
    if abs(initial.time - config.t_start) > 1e-9:
        raise ValueError(
            f"initial state time {initial.time} does not match window start "
            f"{config.t_start}"
        )
    if phase_eval == "rotator":
        resync = _RESYNC_INTERVAL
    elif phase_eval == "direct":
        resync = 1
    else:
        raise ValueError(f"unknown phase_eval mode: {phase_eval!r}")

    mu = transition_dipoles(rotor)
    nu = transition_frequencies(rotor, distorted)
    snap_steps = config.snapshot_steps()
    h = config.step_size
    out = np.empty((snap_steps.size, c0.size), dtype=np.complex128)
    failed_at = _rk4_run(
        c0.copy(),
        float(config.t_start),
        h,
        config.n_steps,
        mu,
        nu,
        np.ascontiguousarray(comb.amplitudes),
        np.ascontiguousarray(comb.frequencies),
        snap_steps,
        resync,
        out,
    )
    if failed_at >= 0:
        raise IntegrationError(failed_at, config.t_start + failed_at * h)
    snapshots = [
        WalkState(amplitudes=out[i], time=config.t_start + int(k) * h)
        for i, k in enumerate(snap_steps)
    ]
    return Trajectory(snapshots=snapshots, requested_times=config.snapshot_times)


@functools.lru_cache(maxsize=8)
def _path_graph_modes(size: int):
    """Closed-form eigensystem of the size-site path graph hopping matrix.

    Mode k (1-based) has components sin(pi k (J+1) / (size+1)) and hopping
    eigenvalue cos(pi k / (size+1)) per unit off-diagonal element.
    """
    k = np.arange(1, size + 1, dtype=float)
    j = np.arange(1, size + 1, dtype=float)
    vectors = np.sqrt(2.0 / (size + 1)) * np.sin(np.outer(j, k) * np.pi / (size + 1))
    cosines = np.cos(np.pi * k / (size + 1))
    vectors.flags.writeable = False
    cosines.flags.writeable = False
    return vectors, cosines


def propagate_rwa(initial: WalkState, gamma: float, t: float) -> WalkState:
    """Exact evolution under H_{J,J+-1} = -gamma/2 for a duration t.

    Spectral propagation with the closed-form path-graph modes; unitary to
    round-off, so it serves as the resonant (detuning-free) reference for
    the driven runs.
    """
    if t < 0:
        raise ValueError(f"duration must be non-negative, got t={t}")
    v, cosines = _path_graph_modes(initial.amplitudes.size)
    eigenvalues = -gamma * cosines
    weights = v.T @ initial.amplitudes
    amps = v @ (np.exp(-1j * eigenvalues * t) * weights)
    return WalkState(amplitudes=amps, time=initial.time + t)
