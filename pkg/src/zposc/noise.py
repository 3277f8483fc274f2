"""Stochastic radiation force models.

The oscillator couples to the surrounding radiation through a random force
whose only physically constrained property is its spectral density at the
oscillator frequency: in equilibrium the fluctuation strength and the
damping rate Gamma = tau*omega0^2 must balance at the per-mode energy
E(omega0, T).  Two force models share that resonant value:

* white:   <F(t) F(t')> = D delta(t - t') with D = 2 m Gamma E(omega0, T);
* colored: stationary Gaussian noise with one-sided angular-frequency PSD
           S_F(omega) = (2 m tau / pi) omega^2 E(omega, T), which satisfies
           pi * S_F(omega0) = D exactly.

Colored series are synthesized spectrally: independent complex Gaussian
amplitudes on the rFFT grid with the target PSD, inverse-transformed, so the
target is met by construction at every grid frequency.

Binary force-series file format (little endian):
    bytes 0..7    magic  b"ZPFORCE1"
    bytes 8..15   dt     float64
    bytes 16..23  length uint64
    bytes 24..31  seed   uint64
    bytes 32..    length float64 samples
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

from .errors import ValidityError
from .model import OscillatorParams, ThermalState, mode_energy

MAGIC = b"ZPFORCE1"
_HEADER = struct.Struct("<8sdQQ")

#: Required margin of the synthesis cutoff pi/dt above omega0.
MIN_CUTOFF_RATIO = 10.0


@dataclass(frozen=True)
class NoiseSpec:
    """Recipe for one force series."""

    mode: str  # "white" | "colored"
    temperature: float
    tau: float
    seed: int
    dt: float
    length: int

    def __post_init__(self) -> None:
        if self.mode not in ("white", "colored"):
            raise ValueError(f"mode must be 'white' or 'colored', got {self.mode!r}")
        if self.dt <= 0:
            raise ValueError(f"dt must be > 0, got {self.dt}")
        if self.length <= 0:
            raise ValueError(f"length must be > 0, got {self.length}")
        if self.tau < 0:
            raise ValueError(f"tau must be >= 0, got {self.tau}")


def white_noise_strength(params: OscillatorParams, state: ThermalState) -> float:
    """Delta-correlated force strength D = 2 m Gamma E(omega0, T).

    Chosen so the damped oscillator equilibrates to the thermal phase-space
    Gaussian.  Requires weak coupling (tau*omega0 below threshold); tau = 0
    gives D = 0 (no coupling, no fluctuation).
    """
    params.require_weak_coupling()
    if params.tau == 0.0:
        return 0.0
    energy = mode_energy(params.omega0, state, params, include_zero_point=True)
    return 2.0 * params.m * params.gamma * energy


def force_psd(omega: float, params: OscillatorParams, state: ThermalState) -> float:
    """One-sided angular-frequency PSD (2 m tau / pi) omega^2 E(omega, T).

    Continuous on omega >= 0 (zero at omega = 0) and tied to the white model
    by pi * force_psd(omega0) = white_noise_strength.
    """
    if omega < 0:
        raise ValueError(f"omega must be >= 0, got {omega}")
    if omega == 0.0:
        return 0.0
    energy = mode_energy(omega, state, params, include_zero_point=True)
    return 2.0 * params.m * params.tau / math.pi * omega**2 * energy


def _force_psd_grid(
    omegas: np.ndarray, params: OscillatorParams, state: ThermalState
) -> np.ndarray:
    """Vectorized force_psd over a frequency grid (omega = 0 maps to 0)."""
    energy = 0.5 * params.hbar * omegas
    if not state.is_zero:
        arg = params.hbar * omegas / (params.kB * state.temperature)
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            planck = params.hbar * omegas / np.expm1(arg)
        planck[~np.isfinite(planck)] = 0.0
        if omegas[0] == 0.0:
            planck[0] = 0.0
        energy = energy + planck
    return 2.0 * params.m * params.tau / math.pi * omegas**2 * energy


def synthesize_colored(spec: NoiseSpec, params: OscillatorParams) -> np.ndarray:
    """Generate a colored Gaussian force series matching force_psd.

    The length must be a power of two and the grid cutoff pi/dt must sit at
    least MIN_CUTOFF_RATIO above omega0.  Deterministic under the seed.
    """
    n = spec.length
    if n & (n - 1):
        raise ValueError(f"length must be a power of two, got {n}")
    omega_max = math.pi / spec.dt
    if omega_max < MIN_CUTOFF_RATIO * params.omega0:
        raise ValidityError(
            f"cutoff pi/dt = {omega_max:g} is below {MIN_CUTOFF_RATIO:g} * omega0; "
            "decrease dt"
        )
    sim_params = OscillatorParams(
        m=params.m, omega0=params.omega0, hbar=params.hbar, kB=params.kB, tau=spec.tau
    )
    state = ThermalState(spec.temperature)
    d_omega = 2.0 * math.pi / (n * spec.dt)
    omegas = d_omega * np.arange(n // 2 + 1)
    psd = _force_psd_grid(omegas, sim_params, state)

    rng = np.random.Generator(
        np.random.Philox(key=np.array([spec.seed & ((1 << 64) - 1), 0], dtype=np.uint64))
    )
    # E|F_k|^2 = n*pi*S(omega_k)/dt for interior bins reproduces the PSD
    # under the irfft normalization; DC is pinned to zero (zero mean).
    amp = np.sqrt(n * math.pi * psd / spec.dt)
    spectrum = np.empty(n // 2 + 1, dtype=np.complex128)
    re = rng.standard_normal(n // 2 + 1)
    im = rng.standard_normal(n // 2 + 1)
    spectrum[:] = (re + 1j * im) * (amp / math.sqrt(2.0))
    spectrum[0] = 0.0
    spectrum[-1] = re[-1] * amp[-1]  # Nyquist bin is real
    return np.fft.irfft(spectrum, n=n)


def periodogram_angular(
    series: np.ndarray, dt: float
) -> tuple[np.ndarray, np.ndarray]:
    """One-sided periodogram in angular frequency, unbiased for force_psd.

    Returns (omega, S_hat) with S_hat(omega_k) = dt |rfft(F)_k|^2 / (pi n).
    """
    n = series.size
    spectrum = np.fft.rfft(series)
    omegas = 2.0 * math.pi / (n * dt) * np.arange(n // 2 + 1)
    return omegas, dt * np.abs(spectrum) ** 2 / (math.pi * n)


# -- binary series files ------------------------------------------------------


def write_force_series(
    path: Union[str, Path], series: np.ndarray, dt: float, seed: int
) -> None:
    data = np.ascontiguousarray(series, dtype="<f8")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, dt, data.size, seed & ((1 << 64) - 1)))
        fh.write(data.tobytes())


def read_force_series(path: Union[str, Path]) -> tuple[np.ndarray, float, int]:
    """Read a force series file; returns (series, dt, seed)."""
    with open(path, "rb") as fh:
        header = fh.read(_HEADER.size)
        magic, dt, length, seed = _HEADER.unpack(header)
        if magic != MAGIC:
            raise ValueError(f"bad magic {magic!r}; not a force-series file")
        data = np.frombuffer(fh.read(8 * length), dtype="<f8")
        if data.size != length:
            raise ValueError(f"truncated series: expected {length} samples, got {data.size}")
    return data.copy(), dt, int(seed)
