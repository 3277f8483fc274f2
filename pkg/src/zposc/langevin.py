"""Langevin dynamics of the radiation-driven oscillator.

The third-derivative radiation-reaction force is never integrated directly
(it is ill-posed); at weak coupling it reduces to viscous damping with rate
Gamma = tau * omega0**2, giving the linear SDE per axis

    dx = (p/m) dt
    dp = (-m omega0^2 x - Gamma p) dt + sqrt(D) dW,     D = 2 m Gamma E.

The default integrator draws each step from the exact Gaussian transition
of this linear system (mean = matrix exponential of the drift, covariance =
the closed-form finite-time noise covariance), so equilibrium statistics
carry no step-size bias and acceptance tolerances can be purely
statistical.  Euler-Maruyama is retained as a cross-check, and a colored
noise mode drives the same propagator with a precomputed force series.

Axes of the 3-D oscillator are independent and integrated with per-axis
derived seeds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy import signal as ssig
from scipy import stats as sps

from .errors import ConfigError
from .estimates import EstimateRow, EstimateTable, fmt
from .model import OscillatorParams, ThermalState
from .noise import NoiseSpec, synthesize_colored, white_noise_strength
from .oracles import (
    TheorySide,
    classical_variance_p,
    classical_variance_x,
    energy_mean,
    L2_mean,
)
from .sampling import LawTestReport
from .stats import autocorrelation, bootstrap_se, relaxation_time

_CHUNK = 1 << 19
_MAX_STORED = 10**6
#: Blocked-error block length, in units of the relaxation time 1/Gamma.
_BLOCK_RELAX = 5.0
#: Decimation spacing for distribution tests, in relaxation times.
_DECIMATE_RELAX = 6.0


@dataclass(frozen=True)
class SimConfig:
    """Complete description of one simulation run."""

    params: OscillatorParams
    state: ThermalState
    dt: float
    steps: int
    burn_in_steps: int
    seed: int
    dims: int = 1
    integrator: str = "exact_gaussian"  # or "euler_maruyama"
    noise_mode: str = "white"  # or "colored"
    stride: int = 0  # 0 selects one that keeps <= 1e6 stored samples

    def validate(self) -> None:
        p = self.params
        if self.dims not in (1, 3):
            raise ConfigError(f"dims must be 1 or 3, got {self.dims}")
        if self.integrator not in ("exact_gaussian", "euler_maruyama"):
            raise ConfigError(f"unknown integrator {self.integrator!r}")
        if self.noise_mode not in ("white", "colored"):
            raise ConfigError(f"unknown noise mode {self.noise_mode!r}")
        if self.dt <= 0 or self.dt * p.omega0 > 0.1:
            raise ConfigError(
                f"need 0 < dt*omega0 <= 0.1, got {self.dt * p.omega0:g}"
            )
        if p.tau == 0.0:
            raise ConfigError("tau must be > 0: an uncoupled oscillator never equilibrates")
        if not p.weak_coupling_ok():
            raise ConfigError(
                f"tau*omega0 = {p.tau * p.omega0:g} violates the weak-coupling bound"
            )
        min_burn = 10.0 / (p.gamma * self.dt)
        if self.burn_in_steps < min_burn:
            raise ConfigError(
                f"burn_in_steps = {self.burn_in_steps} is below ten relaxation "
                f"times ({min_burn:.0f} steps)"
            )
        if self.steps <= self.burn_in_steps:
            raise ConfigError("steps must exceed burn_in_steps")
        if self.stride < 0:
            raise ConfigError("stride must be >= 0")
        if self.integrator == "euler_maruyama" and self.dt >= p.tau:
            # discrete stability of the weakly damped oscillator:
            # |1 + lambda dt| < 1 iff omega0^2 dt^2 < Gamma dt, i.e. dt < tau
            raise ConfigError(
                f"euler_maruyama is unstable for dt >= tau "
                f"(dt={self.dt:g}, tau={p.tau:g}); use the exact integrator "
                "or shrink dt"
            )

    def effective_stride(self) -> int:
        if self.stride:
            return self.stride
        recorded = self.steps - self.burn_in_steps
        return max(1, -(-recorded // _MAX_STORED))


@dataclass(frozen=True)
class Trajectory:
    """Recorded post-burn-in samples of one run."""

    dt: float
    stride: int
    x: np.ndarray  # (dims, n)
    p: np.ndarray  # (dims, n)
    seed: int
    config: SimConfig

    def __post_init__(self) -> None:
        if self.x.shape != self.p.shape:
            raise ValueError("x and p arrays must have identical shapes")
        if self.stride < 1:
            raise ValueError("stride must be >= 1")

    @property
    def dims(self) -> int:
        return self.x.shape[0]

    @property
    def n(self) -> int:
        return self.x.shape[1]

    @property
    def dt_effective(self) -> float:
        return self.dt * self.stride

    def times(self) -> np.ndarray:
        start = (self.config.burn_in_steps + self.stride) * self.dt
        return start + self.dt_effective * np.arange(self.n)


# -- exact one-step transition --------------------------------------------------


def _drift_matrix(params: OscillatorParams) -> np.ndarray:
    return np.array(
        [[0.0, 1.0 / params.m], [-params.m * params.omega0**2, -params.gamma]]
    )


def transition(
    dt: float, params: OscillatorParams, diffusion: float
) -> tuple[np.ndarray, np.ndarray]:
    """Exact one-step mean matrix M = exp(A dt) and noise covariance.

    Underdamped closed form.  For Gamma > 0 the covariance uses
    S(dt) = S_inf - M S_inf M^T with the stationary covariance S_inf; for
    Gamma = 0 the direct integral is used.  diffusion is the white-force
    strength D >= 0.
    """
    if diffusion < 0:
        raise ValueError(f"diffusion must be >= 0, got {diffusion}")
    m, w0, g = params.m, params.omega0, params.gamma
    lam = 0.5 * g
    w1 = math.sqrt(w0 * w0 - lam * lam)  # weak coupling: always real
    e = math.exp(-lam * dt)
    c, s = math.cos(w1 * dt), math.sin(w1 * dt)
    M = np.array(
        [
            [e * (c + lam / w1 * s), e * s / (m * w1)],
            [-e * m * w0 * w0 * s / w1, e * (c - lam / w1 * s)],
        ]
    )
    if diffusion == 0.0:
        return M, np.zeros((2, 2))
    if g > 0.0:
        s_inf = np.diag(
            [diffusion / (2.0 * m * m * g * w0 * w0), diffusion / (2.0 * g)]
        )
        cov = s_inf - M @ s_inf @ M.T
    else:
        sxx = diffusion / (m * m * w0 * w0) * (0.5 * dt - math.sin(2 * w0 * dt) / (4 * w0))
        spp = diffusion * (0.5 * dt + math.sin(2 * w0 * dt) / (4 * w0))
        sxp = diffusion * math.sin(w0 * dt) ** 2 / (2.0 * m * w0 * w0)
        cov = np.array([[sxx, sxp], [sxp, spp]])
    return M, 0.5 * (cov + cov.T)


def _chol2(cov: np.ndarray) -> np.ndarray:
    """Cholesky factor of a 2x2 PSD matrix, tolerating zeros."""
    sxx, sxp, spp = cov[0, 0], cov[0, 1], cov[1, 1]
    if sxx <= 0.0:
        return np.array([[0.0, 0.0], [0.0, math.sqrt(max(spp, 0.0))]])
    lx = math.sqrt(sxx)
    lpx = sxp / lx
    return np.array([[lx, 0.0], [lpx, math.sqrt(max(spp - lpx * lpx, 0.0))]])


def step_exact(
    x: float,
    p: float,
    dt: float,
    params: OscillatorParams,
    diffusion: float,
    rng: np.random.Generator | None = None,
) -> tuple[float, float]:
    """Advance one axis by dt with the exact Gaussian transition.

    With diffusion = 0 and tau = 0 this is the free phase-space rotation
    x -> x cos(w0 dt) + p sin(w0 dt)/(m w0), p -> -m w0 x sin + p cos.
    """
    M, cov = transition(dt, params, diffusion)
    mean = M @ np.array([x, p])
    if diffusion == 0.0:
        return float(mean[0]), float(mean[1])
    if rng is None:
        rng = np.random.default_rng()
    out = mean + _chol2(cov) @ rng.standard_normal(2)
    return float(out[0]), float(out[1])


def _euler_matrices(
    dt: float, params: OscillatorParams, diffusion: float
) -> tuple[np.ndarray, np.ndarray]:
    M = np.eye(2) + _drift_matrix(params) * dt
    L = np.array([[0.0, 0.0], [0.0, math.sqrt(diffusion * dt)]])
    return M, L


# -- trajectory integration -----------------------------------------------------


def _axis_rng(seed: int, axis: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(axis,)))


def _axis_noise_seed(seed: int, axis: int) -> int:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(axis, 1))
    return int(ss.generate_state(1, np.uint64)[0])


def _drive_axis(
    M: np.ndarray,
    gain: np.ndarray,
    steps: int,
    burn_in: int,
    stride: int,
    rng: np.random.Generator | None,
    forces: np.ndarray | None,
    initial: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Run z_{k+1} = M z_k + w_k and record strided post-burn-in samples.

    The 2x2 recursion is diagonalized and each eigencomponent is run as a
    complex IIR filter, chunked with carried filter state.  With white
    noise (rng given) w_k = gain @ xi_k for standard-normal pairs xi_k;
    with a force series w_k = gain * forces[k].
    """
    lam, V = np.linalg.eig(M.astype(complex))
    V_inv = np.linalg.inv(V)
    n_rec = (steps - burn_in) // stride
    xs = np.empty(n_rec)
    ps = np.empty(n_rec)
    u0 = V_inv @ (np.zeros(2) if initial is None else initial)
    zi = [lam[0] * u0[0] * np.ones(1), lam[1] * u0[1] * np.ones(1)]
    filled = 0
    for base in range(0, steps, _CHUNK):
        size = min(_CHUNK, steps - base)
        if forces is None:
            w = (V_inv @ gain) @ rng.standard_normal((2, size))
        else:
            w = (V_inv @ gain)[:, None] * forces[base : base + size][None, :]
        u = np.empty((2, size), dtype=complex)
        for j in (0, 1):
            u[j], zi[j] = ssig.lfilter([1.0], [1.0, -lam[j]], w[j], zi=zi[j])
        # u[:, t] is the state after step base + t + 1
        first = base + 1
        rel = np.arange(first, base + size + 1) - burn_in
        keep = (rel > 0) & (rel % stride == 0)
        if np.any(keep):
            z = V @ u[:, keep]
            count = int(keep.sum())
            xs[filled : filled + count] = z[0].real
            ps[filled : filled + count] = z[1].real
            filled += count
    return xs[:filled], ps[:filled]


def run(config: SimConfig, initial: tuple[float, float] | None = None) -> Trajectory:
    """Integrate to equilibrium and return the recorded trajectory.

    `initial` is an optional (x, p) start applied to every axis; the
    default starts from the origin.  Equilibrium statistics are
    independent of it (burn-in covers ten relaxation times).
    """
    config.validate()
    params, state = config.params, config.state
    diffusion = white_noise_strength(params, state)
    stride = config.effective_stride()

    if config.integrator == "exact_gaussian":
        M, cov = transition(config.dt, params, diffusion)
        gain_white = _chol2(cov)
    else:
        M, gain_white = _euler_matrices(config.dt, params, diffusion)

    z0 = None if initial is None else np.asarray(initial, dtype=float)
    forces = None
    if config.noise_mode == "colored":
        length = 1 << (config.steps - 1).bit_length()
        if config.integrator == "exact_gaussian":
            # piecewise-constant force over a step enters through
            # K = A^-1 (M - I) B, exactly
            A = _drift_matrix(params)
            gain_force = np.linalg.solve(A, (M - np.eye(2)) @ np.array([0.0, 1.0]))
        else:
            gain_force = np.array([0.0, config.dt])

    xs, ps = [], []
    for axis in range(config.dims):
        if config.noise_mode == "colored":
            spec = NoiseSpec(
                mode="colored",
                temperature=state.temperature,
                tau=params.tau,
                seed=_axis_noise_seed(config.seed, axis),
                dt=config.dt,
                length=length,
            )
            axis_force = synthesize_colored(spec, params)
            ax, ap = _drive_axis(
                M, gain_force, config.steps, config.burn_in_steps, stride,
                None, axis_force, initial=z0,
            )
        else:
            ax, ap = _drive_axis(
                M, gain_white, config.steps, config.burn_in_steps, stride,
                _axis_rng(config.seed, axis), None, initial=z0,
            )
        xs.append(ax)
        ps.append(ap)
    return Trajectory(
        dt=config.dt,
        stride=stride,
        x=np.vstack(xs),
        p=np.vstack(ps),
        seed=config.seed,
        config=config,
    )


# -- equilibrium statistics ------------------------------------------------------


def _per_point_series(traj: Trajectory, params: OscillatorParams) -> dict[str, np.ndarray]:
    x, p = traj.x, traj.p
    series = {
        "sum_x2": (x**2).sum(axis=0),
        "sum_p2": (p**2).sum(axis=0),
        "sum_xp": (x * p).sum(axis=0),
    }
    h = series["sum_p2"] / (2 * params.m) + (
        0.5 * params.m * params.omega0**2
    ) * series["sum_x2"]
    series["H"] = h
    series["H2"] = h**2
    if traj.dims == 3:
        lx = x[1] * p[2] - x[2] * p[1]
        ly = x[2] * p[0] - x[0] * p[2]
        lz = x[0] * p[1] - x[1] * p[0]
        series["L2"] = lx**2 + ly**2 + lz**2
    return series


def _block_length(traj: Trajectory, params: OscillatorParams) -> int:
    return max(1, math.ceil(_BLOCK_RELAX / (params.gamma * traj.dt_effective)))


def equilibrium_report(
    traj: Trajectory,
    params: OscillatorParams,
    state: ThermalState,
    replicates: int = 200,
) -> EstimateTable:
    """Trajectory statistics vs analytic references, with blocked errors.

    Standard errors come from a non-overlapping block bootstrap with block
    length >= 5 relaxation times; raises InsufficientDataError below 10
    blocks.
    """
    series = _per_point_series(traj, params)
    dims, n = traj.dims, traj.n
    block_len = _block_length(traj, params)

    def statistic(sums: dict[str, tuple[float, int]]) -> dict[str, float]:
        npts = sums["H"][1]
        h = sums["H"][0] / npts
        h2 = sums["H2"][0] / npts
        out = {
            "var_x": sums["sum_x2"][0] / (npts * dims),
            "var_p": sums["sum_p2"][0] / (npts * dims),
            "cov_xp": sums["sum_xp"][0] / (npts * dims),
            "H": h,
            "H2_over_H_sq": h2 / h**2,
        }
        if "L2" in sums:
            out["L2"] = sums["L2"][0] / npts
        return out

    ses = bootstrap_se(
        series,
        statistic,
        block_len,
        np.random.default_rng(np.random.SeedSequence(entropy=traj.seed, spawn_key=(7,))),
        replicates=replicates,
    )
    full = statistic({name: (arr.sum(), n) for name, arr in series.items()})
    n_blocks = n // block_len
    refs = {
        "var_x": classical_variance_x(params, state),
        "var_p": classical_variance_p(params, state),
        "cov_xp": 0.0,
        "H": energy_mean(TheorySide.CLASSICAL, params, state, dims=dims),
        "H2_over_H_sq": 2.0 if dims == 1 else 4.0 / 3.0,
    }
    if dims == 3:
        refs["L2"] = L2_mean(TheorySide.CLASSICAL, params, state)
    rows = [
        EstimateRow(name, full[name], ses[name], n_blocks, refs[name])
        for name in full
    ]
    return EstimateTable.build(rows)


def _decimation_step(traj: Trajectory, params: OscillatorParams) -> int:
    return max(1, round(_DECIMATE_RELAX / (params.gamma * traj.dt_effective)))


def marginal_ks_tests(
    traj: Trajectory,
    params: OscillatorParams,
    state: ThermalState,
    level: float = 1e-3,
) -> dict[str, LawTestReport]:
    """KS tests of decimated x and p samples against the analytic Gaussians."""
    step = _decimation_step(traj, params)
    out = {}
    for name, arr, var in (
        ("x", traj.x, classical_variance_x(params, state)),
        ("p", traj.p, classical_variance_p(params, state)),
    ):
        values = arr[:, ::step].ravel()
        result = sps.kstest(values, "norm", args=(0.0, math.sqrt(var)))
        out[name] = LawTestReport(
            f"{name}~normal", float(result.statistic), float(result.pvalue), level
        )
    return out


def energy_ks_test(
    traj: Trajectory,
    params: OscillatorParams,
    state: ThermalState,
    level: float = 1e-3,
) -> LawTestReport:
    """KS test of decimated energies: exponential (1-D) or gamma-3 (3-D)."""
    step = _decimation_step(traj, params)
    h = _per_point_series(traj, params)["H"][::step]
    scale = energy_mean(TheorySide.CLASSICAL, params, state)
    if traj.dims == 1:
        result = sps.kstest(h, "expon", args=(0.0, scale))
        law = "H~exponential"
    else:
        result = sps.kstest(h, "gamma", args=(3.0, 0.0, scale))
        law = "H~gamma3"
    return LawTestReport(law, float(result.statistic), float(result.pvalue), level)


def energy_autocorr_time(traj: Trajectory, params: OscillatorParams) -> float:
    """Relaxation time of the energy autocorrelation, in physical time units.

    At weak coupling the energy decorrelates at the single rate Gamma, so
    the decay time is estimated from the truncated area under the
    autocorrelation (see stats.relaxation_time).  For 3-D trajectories the
    per-axis energy autocorrelations are averaged first: the axes are
    independent, which cuts the estimator noise by sqrt(3).
    """
    x, p = traj.x, traj.p
    max_lag = traj.n // 4
    rho = np.zeros(max_lag + 1)
    for axis in range(traj.dims):
        h_axis = p[axis] ** 2 / (2 * params.m) + (
            0.5 * params.m * params.omega0**2
        ) * x[axis] ** 2
        rho += autocorrelation(h_axis, max_lag)
    return relaxation_time(rho / traj.dims) * traj.dt_effective


# -- export -----------------------------------------------------------------------


def trajectory_to_csv(traj: Trajectory, path) -> None:
    """Write (t, x, p per axis) rows with the configuration echoed in comments."""
    cfg = traj.config
    header_lines = [
        f"# dt={fmt(cfg.dt)}",
        f"# steps={cfg.steps}",
        f"# burn_in_steps={cfg.burn_in_steps}",
        f"# stride={traj.stride}",
        f"# seed={cfg.seed}",
        f"# dims={cfg.dims}",
        f"# integrator={cfg.integrator}",
        f"# noise_mode={cfg.noise_mode}",
        f"# temperature={fmt(cfg.state.temperature)}",
        f"# m={fmt(cfg.params.m)}",
        f"# omega0={fmt(cfg.params.omega0)}",
        f"# hbar={fmt(cfg.params.hbar)}",
        f"# kB={fmt(cfg.params.kB)}",
        f"# tau={fmt(cfg.params.tau)}",
    ]
    cols = ["t"]
    blocks = [traj.times()[None, :]]
    for axis in range(traj.dims):
        cols += [f"x{axis + 1}", f"p{axis + 1}"]
        blocks += [traj.x[axis][None, :], traj.p[axis][None, :]]
    data = np.concatenate(blocks, axis=0).T
    header = "\n".join(header_lines) + "\n" + ",".join(cols)
    np.savetxt(path, data, fmt="%.12g", delimiter=",", header=header, comments="")


def trajectory_to_binary(traj: Trajectory, directory) -> list:
    """Write each component as a force-series binary file (x1.bin, p1.bin, ...).

    Files use the radiation-noise container with dt set to the effective
    sampling step; see zposc.noise for the layout.
    """
    from pathlib import Path

    from .noise import write_force_series

    outdir = Path(directory)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    for axis in range(traj.dims):
        for name, arr in ((f"x{axis + 1}", traj.x[axis]), (f"p{axis + 1}", traj.p[axis])):
            path = outdir / f"{name}.bin"
            write_force_series(path, arr, traj.dt_effective, traj.seed)
            written.append(path)
    return written


def replica_config(config: SimConfig, replica: int) -> SimConfig:
    """Derive an independent replica: same physics, decorrelated seed."""
    ss = np.random.SeedSequence(entropy=config.seed, spawn_key=(replica, 2))
    return replace(config, seed=int(ss.generate_state(1, np.uint64)[0]))
