"""Diatomic rotor model: level energies, transition frequencies, dipoles.

Everything is expressed in dimensionless units with hbar = h = 1, so an
energy gap and the corresponding (ordinary) transition frequency coincide.
The natural convention for driven-ladder runs is 2B = 1, which makes the
pulse interval of the resonant comb the unit of time; the formulas below
accept any B > 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# D is a perturbative correction; larger ratios indicate a misconfigured
# rotor, not a physical molecule (CsI sits near 1.6e-7).
MAX_DISTORTION_RATIO = 1e-3


@dataclass(frozen=True)
class RotorSpec:
    """Molecular constants and ladder size for one rotational manifold.

    The state ladder spans J = 0 .. j_max (j_max + 1 states); the j_max
    transitions J -> J+1 are the bonds a resonant comb addresses.

    b:     rotational constant (frequency units)
    d:     centrifugal distortion constant (same units)
    mu:    permanent dipole moment (dimensionless scale of mu_j)
    m:     magnetic quantum number, fixed for the run
    j_max: highest comb component index; hence highest ladder state
    """

    b: float
    d: float = 0.0
    mu: float = 1.0
    m: int = 0
    j_max: int = 1

    def __post_init__(self) -> None:
        if not self.b > 0:
            raise ValueError(f"rotational constant must be positive, got b={self.b}")
        if self.d < 0:
            raise ValueError(f"distortion constant must be non-negative, got d={self.d}")
        if self.d > MAX_DISTORTION_RATIO * self.b:
            raise ValueError(
                f"d/b={self.d / self.b:.3g} exceeds {MAX_DISTORTION_RATIO:g}; "
                "not a perturbative centrifugal distortion"
            )
        if not self.mu > 0:
            raise ValueError(f"permanent dipole must be positive, got mu={self.mu}")
        if self.m != int(self.m):
            raise ValueError(f"magnetic quantum number must be an integer, got m={self.m}")
        if self.j_max < 1:
            raise ValueError(f"j_max must be at least 1, got {self.j_max}")

    @classmethod
    def normalized(
        cls, d_over_b: float = 0.0, mu: float = 1.0, m: int = 0, j_max: int = 1
    ) -> "RotorSpec":
        """Rotor in the 2B = 1 convention, distortion given as the ratio D/B."""
        b = 0.5
        return cls(b=b, d=d_over_b * b, mu=mu, m=m, j_max=j_max)

    @property
    def size(self) -> int:
        """Number of ladder states."""
        return self.j_max + 1


def rotational_energy(spec: RotorSpec, j: int, distorted: bool = False) -> float:
    """Energy of level J: B*J(J+1), minus D*J^2(J+1)^2 when distorted."""
    if j < 0:
        raise ValueError(f"rotational quantum number must be non-negative, got J={j}")
    e = spec.b * j * (j + 1)
    if distorted:
        e -= spec.d * (j * (j + 1)) ** 2
    return e


def transition_frequency(spec: RotorSpec, j: int, distorted: bool = False) -> float:
    """Frequency of the J -> J+1 transition.

    Rigid rotor: 2B(J+1).  Distorted: 2B(J+1) - 4D(J+1)^3, which equals the
    gap of the distorted energy law exactly.
    """
    if not 0 <= j <= spec.j_max - 1:
        raise ValueError(
            f"transition index J={j} outside ladder range 0..{spec.j_max - 1}"
        )
    nu = 2.0 * spec.b * (j + 1)
    if distorted:
        nu -= 4.0 * spec.d * (j + 1) ** 3
    return nu


def transition_dipole(spec: RotorSpec, j: int) -> float:
    """Dipole moment of the J -> J+1 transition at fixed M.

    mu_J = mu * sqrt(((J+1)^2 - M^2) / ((2J+1)(2J+3))); vanishes at
    |M| = J+1 and is forbidden beyond that.
    """
    if not 0 <= j <= spec.j_max - 1:
        raise ValueError(
            f"transition index J={j} outside ladder range 0..{spec.j_max - 1}"
        )
    if abs(spec.m) > j + 1:
        raise ValueError(f"transition J={j} -> {j + 1} forbidden for M={spec.m}")
    num = (j + 1) ** 2 - spec.m**2
    den = (2 * j + 1) * (2 * j + 3)
    return spec.mu * np.sqrt(num / den)


def transition_frequencies(spec: RotorSpec, distorted: bool = False) -> np.ndarray:
    """All ladder transition frequencies, J = 0 .. j_max-1."""
    j1 = np.arange(1, spec.j_max + 1, dtype=float)  # J+1
    nu = 2.0 * spec.b * j1
    if distorted:
        nu = nu - 4.0 * spec.d * j1**3
    return nu


def transition_dipoles(spec: RotorSpec) -> np.ndarray:
    """All ladder transition dipoles, J = 0 .. j_max-1."""
    j1 = np.arange(1, spec.j_max + 1, dtype=float)  # J+1
    num = j1**2 - float(spec.m) ** 2
    if np.any(num < 0):
        bad = int(np.argmax(num < 0))
        raise ValueError(f"transition J={bad} -> {bad + 1} forbidden for M={spec.m}")
    den = (2.0 * j1 - 1.0) * (2.0 * j1 + 1.0)
    return spec.mu * np.sqrt(num / den)
