"""Physical parameters and thermal radiation mode energies.

Natural units (hbar = m = omega0 = kB = 1) are the library default; every
constant is an explicit field, so SI values work unchanged.  Zero temperature
is a regular input everywhere: thermal factors are implemented through their
T -> 0 limits, never through a division by T.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ValidityError

# tau*omega0 below this is "weak coupling": the simulator's damping reduction
# (m*tau*x''' -> -m*Gamma*x' with Gamma = tau*omega0^2) is valid.
WEAK_COUPLING_THRESHOLD = 1e-2

# exp() overflows above ~709; beyond this the Planck occupation is exactly 0
# at double precision.
_EXP_ARG_MAX = 700.0


@dataclass(frozen=True)
class OscillatorParams:
    """Constants defining the oscillator and its coupling to radiation.

    Attributes:
        m: particle mass (> 0).
        omega0: oscillator angular frequency (> 0).
        hbar: action scale of the radiation spectrum (> 0).
        kB: Boltzmann constant (> 0).
        tau: radiation damping time (>= 0); enters dynamics only through
            the viscous rate Gamma = tau * omega0**2.
    """

    m: float = 1.0
    omega0: float = 1.0
    hbar: float = 1.0
    kB: float = 1.0
    tau: float = 0.0

    def __post_init__(self) -> None:
        for name in ("m", "omega0", "hbar", "kB"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)}")
        if self.tau < 0:
            raise ValueError(f"tau must be >= 0, got {self.tau}")

    @property
    def gamma(self) -> float:
        """Viscous damping rate Gamma = tau * omega0**2."""
        return self.tau * self.omega0**2

    def weak_coupling_ok(self, threshold: float = WEAK_COUPLING_THRESHOLD) -> bool:
        return self.tau * self.omega0 < threshold

    def require_weak_coupling(self, threshold: float = WEAK_COUPLING_THRESHOLD) -> None:
        if not self.weak_coupling_ok(threshold):
            raise ValidityError(
                f"tau*omega0 = {self.tau * self.omega0:g} exceeds the weak-coupling "
                f"threshold {threshold:g}; simulator results would be biased"
            )


@dataclass(frozen=True)
class ThermalState:
    """Radiation temperature.  T = 0 selects pure zero-point radiation."""

    temperature: float = 0.0

    def __post_init__(self) -> None:
        if not self.temperature >= 0:
            raise ValueError(f"temperature must be >= 0, got {self.temperature}")

    @property
    def is_zero(self) -> bool:
        return self.temperature == 0.0


def theta(params: OscillatorParams, state: ThermalState) -> float:
    """Dimensionless thermal argument hbar*omega0 / (2 kB T); +inf at T = 0."""
    if state.is_zero:
        return math.inf
    return params.hbar * params.omega0 / (2.0 * params.kB * state.temperature)


def coth_theta(params: OscillatorParams, state: ThermalState) -> float:
    """coth(hbar*omega0 / (2 kB T)), the thermal enhancement factor.

    Equals exactly 1 at T = 0 and increases strictly with T (asymptotically
    2 kB T / (hbar*omega0)).  Always >= 1.
    """
    th = theta(params, state)
    if math.isinf(th):
        return 1.0
    return 1.0 / math.tanh(th)


def mode_energy(
    omega: float,
    state: ThermalState,
    params: OscillatorParams,
    *,
    include_zero_point: bool = True,
) -> float:
    """Average thermal-radiation energy per normal mode at frequency omega.

    With the zero-point part included this is (hbar*omega/2) *
    coth(hbar*omega / (2 kB T)); without it, the bare Planck form
    hbar*omega / (exp(hbar*omega / kB T) - 1).  The two differ by exactly
    hbar*omega/2 for every omega > 0 and T >= 0 (the zero-point energy),
    which this implementation preserves to the last bit by computing one
    from the other.

    Raises:
        ValueError: if omega <= 0.
    """
    if not omega > 0:
        raise ValueError(f"omega must be > 0, got {omega}")
    zero_point = 0.5 * params.hbar * omega
    if state.is_zero:
        planck = 0.0
    else:
        arg = params.hbar * omega / (params.kB * state.temperature)
        planck = 0.0 if arg > _EXP_ARG_MAX else params.hbar * omega / math.expm1(arg)
    return planck + zero_point if include_zero_point else planck
