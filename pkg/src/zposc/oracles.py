"""Closed-form thermal expectation values and distributions.

These are the reference truths every other path (symbolic Wick evaluation,
direct sampling, Langevin simulation) is validated against.  All formulas
are written in terms of the thermal factor coth(hbar*omega0 / (2 kB T)) and
the per-mode energy E = (hbar*omega0/2) * coth(...), so T = 0 is an ordinary
input.

Key identities (exact at every temperature):
    <H>  classical = <H> quantum = E
    <H^2> classical - <H^2> quantum = (hbar*omega0/2)^2
    <L^2> classical - <L^2> quantum = (3/2) hbar^2
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import ConvergenceError
from .model import OscillatorParams, ThermalState, coth_theta, theta

_BOLTZMANN_MAX_TERMS = 10**6


class TheorySide(enum.Enum):
    """Which theory an expectation value belongs to."""

    CLASSICAL = "classical"
    QUANTUM = "quantum"

    @classmethod
    def parse(cls, text: str) -> "TheorySide":
        try:
            return cls(text.lower())
        except ValueError:
            raise ValueError(
                f"unknown side {text!r}; expected 'classical' or 'quantum'"
            ) from None


@dataclass(frozen=True)
class QuantitySpec:
    """A named expectation value with its dimensionality.

    kind: sampled quantities 'x_moment', 'p_moment', 'H', 'H2',
          'H2_over_H_sq', 'L2', 'Lx2', 'Ly2', 'Lz2', 'var_x', 'var_p',
          'cov_xp'; oracle-only quantities 'partition_function',
          'phase_density', 'ground_density'.
    order: moment order n for x_moment / p_moment, else 0.
    dims: 1 or 3; angular-momentum quantities require dims = 3.
    """

    kind: str
    order: int = 0
    dims: int = 1

    _ANGULAR = ("L2", "Lx2", "Ly2", "Lz2")
    _ORACLE_ONLY = ("partition_function", "phase_density", "ground_density")
    _KINDS = ("x_moment", "p_moment", "H", "H2", "H2_over_H_sq",
              "var_x", "var_p", "cov_xp") + _ANGULAR + _ORACLE_ONLY

    def __post_init__(self) -> None:
        if self.kind not in self._KINDS:
            raise ValueError(f"unknown quantity kind {self.kind!r}")
        if self.kind in ("x_moment", "p_moment") and self.order < 0:
            raise ValueError("moment order must be >= 0")
        if self.dims not in (1, 3):
            raise ValueError(f"dims must be 1 or 3, got {self.dims}")
        if self.kind in self._ANGULAR and self.dims != 3:
            raise ValueError(f"{self.kind} requires dims = 3")

    @property
    def is_point_estimator(self) -> bool:
        return self.kind not in self._ORACLE_ONLY

    @property
    def label(self) -> str:
        if self.kind == "x_moment":
            return f"x^{self.order}"
        if self.kind == "p_moment":
            return f"p^{self.order}"
        return self.kind


def double_factorial(n: int) -> int:
    """(n)!! with the convention (-1)!! = 1."""
    if n < -1:
        raise ValueError(f"double factorial undefined for {n}")
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def gaussian_moment(n: int, variance: float) -> float:
    """n-th moment of a centered Gaussian: 0 for odd n, (n-1)!! var^(n/2) else."""
    if n < 0:
        raise ValueError(f"moment order must be >= 0, got {n}")
    if n % 2 == 1:
        return 0.0
    return double_factorial(n - 1) * variance ** (n // 2)


def classical_variance_x(params: OscillatorParams, state: ThermalState) -> float:
    """Position variance [hbar/(2 m omega0)] * coth(hbar*omega0/(2 kB T))."""
    return params.hbar / (2.0 * params.m * params.omega0) * coth_theta(params, state)


def classical_variance_p(params: OscillatorParams, state: ThermalState) -> float:
    """Momentum variance [hbar m omega0 / 2] * coth(hbar*omega0/(2 kB T))."""
    return 0.5 * params.hbar * params.m * params.omega0 * coth_theta(params, state)


def energy_mean(
    side: TheorySide, params: OscillatorParams, state: ThermalState, dims: int = 1
) -> float:
    """Mean oscillator energy; identical on both sides: dims * (hbar*omega0/2) coth."""
    del side  # both theories agree exactly
    return dims * 0.5 * params.hbar * params.omega0 * coth_theta(params, state)


def energy_second_moment(
    side: TheorySide, params: OscillatorParams, state: ThermalState
) -> float:
    """<H^2> for the 1-D oscillator.

    Classical: 2 <H>^2 (exponential energy distribution).  Quantum:
    2 <H>^2 - (hbar*omega0/2)^2.  The classical-minus-quantum gap is the
    zero-temperature value (hbar*omega0/2)^2 at every T.
    """
    mean = energy_mean(side, params, state)
    second = 2.0 * mean * mean
    if side is TheorySide.QUANTUM:
        second -= (0.5 * params.hbar * params.omega0) ** 2
    return second


def L2_mean(side: TheorySide, params: OscillatorParams, state: ThermalState) -> float:
    """<L^2> of the 3-D isotropic oscillator.

    Classical: (3/2) hbar^2 coth^2.  Quantum: (3/2) hbar^2 (coth^2 - 1),
    zero in the ground state.  The two always differ by (3/2) hbar^2.
    """
    c = coth_theta(params, state)
    value = 1.5 * params.hbar**2 * c * c
    if side is TheorySide.QUANTUM:
        value -= 1.5 * params.hbar**2
    return value


def L2_component_mean(
    side: TheorySide, params: OscillatorParams, state: ThermalState
) -> float:
    """<L_i^2> for any single axis; one third of L2_mean by isotropy."""
    return L2_mean(side, params, state) / 3.0


def partition_function(params: OscillatorParams, state: ThermalState) -> float:
    """Quantum partition function Z = 1 / (2 sinh(hbar*omega0 / (2 kB T))).

    Undefined at T = 0 (the Boltzmann sum has no normalizable T -> 0 limit
    as a function of temperature alone); raises ValueError there.
    """
    if state.is_zero:
        raise ValueError("partition function requires T > 0")
    return 1.0 / (2.0 * math.sinh(theta(params, state)))


def boltzmann_sum(
    observable: str,
    params: OscillatorParams,
    state: ThermalState,
    rel_tol: float = 1e-10,
) -> float:
    """Independent thermal oracle: Boltzmann-weighted sum over energy levels.

    Sums f(E_n) with E_n = (n + 1/2) hbar*omega0 and f = identity
    (observable 'H') or square ('H2'), weighted by exp(-E_n / kB T) / Z.
    Truncation is controlled by a closed-form geometric tail bound, so the
    result carries a guaranteed relative error below rel_tol.  At T = 0 the
    n = 0 term is returned exactly.

    Raises:
        ValueError: unknown observable or rel_tol outside (0, 1e-3].
        ConvergenceError: tail bound not reached within 10^6 terms.
    """
    if observable not in ("H", "H2"):
        raise ValueError(f"observable must be 'H' or 'H2', got {observable!r}")
    power = 1 if observable == "H" else 2
    quantum = params.hbar * params.omega0
    if state.is_zero:
        return (0.5 * quantum) ** power
    if not 0.0 < rel_tol <= 1e-3:
        raise ValueError(f"rel_tol must be in (0, 1e-3], got {rel_tol}")

    # <f> = (1 - q) * sum_n f(E_n) q^n with q = exp(-hbar*omega0 / kB T);
    # the common factor exp(-E_0 / kB T) cancels against Z.
    q = math.exp(-quantum / (params.kB * state.temperature))
    total = 0.0
    for n in range(_BOLTZMANN_MAX_TERMS):
        term = ((n + 0.5) * quantum) ** power * q**n
        total += term
        # terms beyond n decay at least geometrically with ratio
        # q * ((n + 2.5) / (n + 1.5))^power
        ratio = q * ((n + 2.5) / (n + 1.5)) ** power
        if ratio < 1.0:
            next_term = ((n + 1.5) * quantum) ** power * q ** (n + 1)
            tail = next_term / (1.0 - ratio)
            if tail <= 0.5 * rel_tol * total:
                return (1.0 - q) * total
    raise ConvergenceError(
        f"Boltzmann sum did not reach rel_tol={rel_tol:g} within "
        f"{_BOLTZMANN_MAX_TERMS} terms (T={state.temperature:g})"
    )


def hamiltonian_value(x: float, p: float, params: OscillatorParams) -> float:
    """1-D oscillator energy p^2/2m + m omega0^2 x^2 / 2."""
    return p * p / (2.0 * params.m) + 0.5 * params.m * params.omega0**2 * x * x


def log_phase_density(
    x: float, p: float, params: OscillatorParams, state: ThermalState
) -> float:
    """log of phase_density; safe in the far tails."""
    energy_scale = 0.5 * params.hbar * params.omega0 * coth_theta(params, state)
    norm = params.omega0 / (2.0 * math.pi * energy_scale)
    return math.log(norm) - hamiltonian_value(x, p, params) / energy_scale


def phase_density(
    x: float, p: float, params: OscillatorParams, state: ThermalState
) -> float:
    """Equilibrium phase-space density of the radiation-driven oscillator.

    P_T(x, p) = [omega0 / (2 pi E)] exp(-H(x, p) / E) with
    E = (hbar*omega0/2) coth(hbar*omega0 / (2 kB T)); the prefactor is the
    one forced by normalization over the (x, p) plane.  At T = 0 this is
    exp(-2 H / hbar*omega0) / (pi hbar).
    """
    return math.exp(log_phase_density(x, p, params, state))


def log_ground_density_x(x: float, params: OscillatorParams) -> float:
    a = params.m * params.omega0 / params.hbar
    return 0.5 * math.log(a / math.pi) - a * x * x


def ground_density_x(x: float, params: OscillatorParams) -> float:
    """Quantum ground-state position density sqrt(m omega0/(pi hbar)) exp(-m omega0 x^2/hbar).

    Coincides pointwise with the p-marginal of the T = 0 phase-space density.
    """
    return math.exp(log_ground_density_x(x, params))


def reference_value(
    spec: QuantitySpec,
    side: TheorySide,
    params: OscillatorParams,
    state: ThermalState,
) -> float:
    """Analytic reference for an estimated quantity (classical side unless noted)."""
    if spec.kind == "x_moment":
        return gaussian_moment(spec.order, classical_variance_x(params, state))
    if spec.kind == "p_moment":
        return gaussian_moment(spec.order, classical_variance_p(params, state))
    if spec.kind == "var_x":
        return classical_variance_x(params, state)
    if spec.kind == "var_p":
        return classical_variance_p(params, state)
    if spec.kind == "cov_xp":
        return 0.0
    if spec.kind == "H":
        return energy_mean(side, params, state, dims=spec.dims)
    if spec.kind == "H2":
        if spec.dims != 1:
            raise ValueError("H2 reference implemented for dims = 1 only")
        return energy_second_moment(side, params, state)
    if spec.kind == "H2_over_H_sq":
        if spec.dims != 1:
            raise ValueError("H2_over_H_sq reference implemented for dims = 1 only")
        return energy_second_moment(side, params, state) / energy_mean(
            side, params, state
        ) ** 2
    if spec.kind == "L2":
        return L2_mean(side, params, state)
    if spec.kind in ("Lx2", "Ly2", "Lz2"):
        return L2_component_mean(side, params, state)
    if spec.kind == "partition_function":
        if side is not TheorySide.QUANTUM:
            raise ValueError("the partition function is a quantum-side quantity")
        return partition_function(params, state)
    raise ValueError(f"no reference for {spec.kind!r}")
