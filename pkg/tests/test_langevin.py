import math
from dataclasses import replace

import numpy as np
import pytest
from scipy.integrate import quad_vec
from scipy.linalg import expm

from zposc.errors import ConfigError, InsufficientDataError
from zposc.langevin import (
    SimConfig,
    Trajectory,
    _drift_matrix,
    energy_autocorr_time,
    energy_ks_test,
    equilibrium_report,
    marginal_ks_tests,
    replica_config,
    run,
    step_exact,
    trajectory_to_csv,
    transition,
)
from zposc.model import OscillatorParams, ThermalState
from zposc.noise import white_noise_strength
from zposc.oracles import QuantitySpec, classical_variance_x
from zposc.sampling import draw_phase_space, estimate


def _config(**kw):
    base = dict(
        params=OscillatorParams(tau=1e-3),
        state=ThermalState(0.0),
        dt=0.05,
        steps=4_000_000,
        burn_in_steps=200_000,
        seed=12345,
    )
    base.update(kw)
    return SimConfig(**base)


# -- configuration invariants ------------------------------------------------


def test_config_validation():
    _config().validate()
    with pytest.raises(ConfigError):
        _config(dt=0.2).validate()  # dt * omega0 > 0.1
    with pytest.raises(ConfigError):
        _config(burn_in_steps=1000).validate()  # < ten relaxation times
    with pytest.raises(ConfigError):
        _config(steps=100_000).validate()  # steps <= burn-in
    with pytest.raises(ConfigError):
        _config(params=OscillatorParams(tau=0.0)).validate()
    with pytest.raises(ConfigError):
        _config(params=OscillatorParams(tau=0.05)).validate()  # coupling too strong
    with pytest.raises(ConfigError):
        _config(dims=2).validate()
    with pytest.raises(ConfigError):
        _config(integrator="verlet").validate()
    with pytest.raises(ConfigError):
        # Euler-Maruyama is unstable unless dt < tau
        _config(integrator="euler_maruyama").validate()


def test_run_rejects_bad_config_before_stepping():
    with pytest.raises(ConfigError):
        run(_config(dt=0.5))


# -- exact one-step transition --------------------------------------------------


@pytest.mark.parametrize("tau,temperature,dt", [
    (1e-3, 0.0, 0.05),
    (1e-3, 1.0, 0.1),
    (4e-3, 0.3, 0.02),
])
def test_transition_against_expm_and_quadrature(tau, temperature, dt):
    # independent oracle: scipy matrix exponential and vector quadrature
    par = OscillatorParams(tau=tau)
    diffusion = white_noise_strength(par, ThermalState(temperature))
    M, S = transition(dt, par, diffusion)
    A = _drift_matrix(par)
    assert np.allclose(M, expm(A * dt), rtol=0, atol=1e-14)
    B = np.array([0.0, math.sqrt(diffusion)])

    def integrand(s):
        e = expm(A * s)
        return (e @ np.outer(B, B) @ e.T).ravel()

    S_ref = quad_vec(integrand, 0.0, dt, epsabs=1e-18, epsrel=1e-13)[0].reshape(2, 2)
    # the stationary-difference form loses ~eps * S_inf / S(dt) on the
    # smallest entry (~1e-8 relative here); harmless for noise injection
    assert np.allclose(S, S_ref, rtol=1e-6, atol=1e-20)
    assert abs(S[0, 1] - S_ref[0, 1]) < 1e-9 * S_ref.max()


def test_transition_zero_damping_covariance():
    # Gamma = 0 branch has its own closed form
    par = OscillatorParams(tau=0.0)
    M, S = transition(0.07, par, 2.0)
    A = _drift_matrix(par)
    B = np.array([0.0, math.sqrt(2.0)])

    def integrand(s):
        e = expm(A * s)
        return (e @ np.outer(B, B) @ e.T).ravel()

    S_ref = quad_vec(integrand, 0.0, 0.07, epsabs=1e-18, epsrel=1e-13)[0].reshape(2, 2)
    assert np.allclose(S, S_ref, rtol=1e-11, atol=1e-18)
    assert np.allclose(M, expm(A * 0.07), atol=1e-14)


def test_free_rotation_step():
    # no damping, no noise: quarter period maps (1, 0) -> (0, -m omega0)
    par = OscillatorParams(tau=0.0, m=2.0, omega0=1.0)
    x, p = step_exact(1.0, 0.0, math.pi / 2, par, 0.0)
    assert x == pytest.approx(0.0, abs=1e-12)
    assert p == pytest.approx(-2.0, rel=1e-12)


def test_pure_damping_contracts_energy():
    par = OscillatorParams(tau=1e-3)
    x, p = 1.0, 0.0
    energies = [0.5 * (p * p + x * x)]
    for _ in range(10):
        x, p = step_exact(x, p, 2 * math.pi / 10, par, 0.0)
        energies.append(0.5 * (p * p + x * x))
    assert energies[-1] < energies[0] * math.exp(-par.gamma * 2 * math.pi * 0.9)


def test_transition_against_euler_maruyama_cloud():
    # brute-force sub-stepping oracle with Richardson extrapolation over the
    # sub-step (plain Euler-Maruyama carries an O(h) bias well above the
    # Monte Carlo error at these sample counts)
    par = OscillatorParams(tau=1e-3)
    state = ThermalState(1.0)
    diffusion = white_noise_strength(par, state)
    dt = 0.05
    M, S = transition(dt, par, diffusion)
    z0 = np.array([1.0, 0.5])
    n = 200_000

    def cloud(n_sub, seed):
        rng = np.random.default_rng(seed)
        h = dt / n_sub
        x = np.full(n, z0[0])
        p = np.full(n, z0[1])
        for _ in range(n_sub):
            x, p = (
                x + p / par.m * h,
                p + (-par.m * par.omega0**2 * x - par.gamma * p) * h
                + math.sqrt(diffusion * h) * rng.standard_normal(n),
            )
        return x, p

    xa, pa = cloud(100, 1)
    xb, pb = cloud(200, 2)
    mean_ref = M @ z0
    for idx, (a, b) in enumerate(((xa, xb), (pa, pb))):
        extrap = 2 * b.mean() - a.mean()
        se = math.sqrt(4 * b.var() / n + a.var() / n)
        assert abs(extrap - mean_ref[idx]) < 3 * se
    cov_extrap = 2 * np.cov(xb, pb) - np.cov(xa, pa)
    for i, j in ((0, 0), (1, 1), (0, 1)):
        se = math.sqrt(
            (cov_extrap[i, i] * cov_extrap[j, j] + cov_extrap[i, j] ** 2) / n * 5
        )
        assert abs(cov_extrap[i, j] - S[i, j]) < 3 * se


# -- trajectories -----------------------------------------------------------------


def test_run_deterministic():
    cfg = _config(steps=500_000, burn_in_steps=200_000)
    a, b = run(cfg), run(cfg)
    assert np.array_equal(a.x, b.x) and np.array_equal(a.p, b.p)
    c = run(replace(cfg, seed=777))
    assert not np.array_equal(a.x, c.x)


def test_trajectory_shape_and_times():
    cfg = _config(steps=300_000, burn_in_steps=200_000, stride=10, dims=3)
    traj = run(cfg)
    assert traj.x.shape == (3, 10_000)
    times = traj.times()
    assert times[0] == pytest.approx((200_000 + 10) * 0.05)
    assert np.diff(times)[0] == pytest.approx(0.5)


def test_equilibrium_matches_analytic(warm):
    par = OscillatorParams(tau=1e-3)
    traj = run(_config(params=par, state=warm, seed=31))
    table = equilibrium_report(traj, par, warm)
    for name in ("var_x", "var_p", "H", "cov_xp"):
        assert abs(table.row(name).z) < 3, table.row(name)
    assert abs(table.row("H2_over_H_sq").estimate - 2) < 4 * table.row("H2_over_H_sq").se


def test_equilibrium_start_independence():
    # statistics must not remember the initial condition after burn-in;
    # run the two extreme starts on independent noise streams
    par = OscillatorParams(tau=4e-3)
    state = ThermalState(0.0)
    cfg = lambda seed: SimConfig(params=par, state=state, dt=0.05,
                                 steps=4_000_000, burn_in_steps=60_000, seed=seed)
    ta = equilibrium_report(run(cfg(5), initial=(0.0, 0.0)), par, state)
    tb = equilibrium_report(run(cfg(6), initial=(25.0, -25.0)), par, state)
    for name in ("var_x", "var_p", "H"):
        diff = abs(ta.row(name).estimate - tb.row(name).estimate)
        combined = math.hypot(ta.row(name).se, tb.row(name).se)
        assert diff < 3 * combined
        assert abs(tb.row(name).z) < 3


def test_coupling_independence_of_moments():
    # equilibrium must not depend on tau (the "small charge" independence)
    state = ThermalState(0.0)
    tables = []
    for tau, seed in ((1e-3, 1), (4e-3, 2)):
        par = OscillatorParams(tau=tau)
        burn = int(math.ceil(10 / (par.gamma * 0.05)))
        traj = run(SimConfig(params=par, state=state, dt=0.05, steps=4_000_000,
                             burn_in_steps=burn, seed=seed))
        tables.append(equilibrium_report(traj, par, state))
    for name in ("var_x", "var_p", "H"):
        a, b = tables[0].row(name), tables[1].row(name)
        assert abs(a.estimate - b.estimate) < 3 * math.hypot(a.se, b.se)


def test_relaxation_time_scales_inversely_with_gamma():
    state = ThermalState(0.0)
    times = {}
    for tau, steps, burn in ((1e-3, 8_000_000, 200_000), (4e-3, 4_000_000, 50_000)):
        par = OscillatorParams(tau=tau)
        traj = run(SimConfig(params=par, state=state, dt=0.05, steps=steps,
                             burn_in_steps=burn, seed=3, dims=3, stride=8))
        times[tau] = energy_autocorr_time(traj, par)
    ratio = times[1e-3] / times[4e-3]
    # noisy estimator at this length; the acceptance gate runs longer
    assert ratio == pytest.approx(4.0, rel=0.45)


def test_distribution_checks(cold):
    par = OscillatorParams(tau=1e-3)
    traj = run(_config(params=par, seed=8))
    marg = marginal_ks_tests(traj, par, cold)
    assert marg["x"].passed and marg["p"].passed
    energy = energy_ks_test(traj, par, cold)
    assert energy.law == "H~exponential" and energy.passed


def test_energy_law_3d_gamma(cold):
    par = OscillatorParams(tau=4e-3)
    traj = run(SimConfig(params=par, state=cold, dt=0.05, steps=1_500_000,
                         burn_in_steps=50_000, seed=9, dims=3))
    report = energy_ks_test(traj, par, cold)
    assert report.law == "H~gamma3" and report.passed


def test_trajectory_agrees_with_direct_sampling(cold):
    par = OscillatorParams(tau=1e-3)
    traj = run(_config(params=par, seed=21))
    table_sim = equilibrium_report(traj, par, cold)
    sample = draw_phase_space(1_000_000, 1, par, cold, seed=22)
    table_mc = estimate(sample, [QuantitySpec("x_moment", 2), QuantitySpec("H")], par)
    pairs = (("var_x", "x^2"), ("H", "H"))
    for sim_name, mc_name in pairs:
        a, b = table_sim.row(sim_name), table_mc.row(mc_name)
        assert abs(a.estimate - b.estimate) < 3 * math.hypot(a.se, b.se)


def _discrete_response_prediction(par, state, dt, length):
    """Frequency-domain oracle: exact steady-state (var_x, var_p) of the
    discrete propagator driven by the synthesized circular spectrum."""
    from zposc.noise import _force_psd_grid

    M, _ = transition(dt, par, 0.0)
    A = _drift_matrix(par)
    K = np.linalg.solve(A, (M - np.eye(2)) @ np.array([0.0, 1.0]))
    omegas = 2 * np.pi / (length * dt) * np.arange(length // 2 + 1)
    ampsq = length * np.pi * _force_psd_grid(omegas, par, state) / dt
    z = np.exp(1j * omegas * dt)
    det = (z - M[0, 0]) * (z - M[1, 1]) - M[0, 1] * M[1, 0]
    g_x = ((z - M[1, 1]) * K[0] + M[0, 1] * K[1]) / det
    g_p = (M[1, 0] * K[0] + (z - M[0, 0]) * K[1]) / det
    w = np.full(omegas.size, 2.0)
    w[0] = w[-1] = 1.0
    var_x = float(np.sum(w * np.abs(g_x) ** 2 * ampsq) / length**2)
    var_p = float(np.sum(w * np.abs(g_p) ** 2 * ampsq) / length**2)
    return var_x, var_p


def test_colored_noise_equilibrium():
    # the specified force spectrum grows as omega^2 E(omega), so its grid
    # tail adds an O(tau * omega_max^2) ultraviolet term to the momentum
    # sector (vanishing only as tau -> 0).  Position statistics and the
    # energy-fluctuation ratio agree with the white model; the momentum
    # variance is validated against the exact discrete-response oracle.
    par = OscillatorParams(tau=1e-3)
    state = ThermalState(0.0)
    burn = int(math.ceil(10 / (par.gamma * 0.05)))
    steps = burn + 4_800_000
    results = {}
    for mode, seed in (("white", 51), ("colored", 52)):
        cfg = SimConfig(params=par, state=state, dt=0.05, steps=steps,
                        burn_in_steps=burn, seed=seed, noise_mode=mode)
        results[mode] = equilibrium_report(run(cfg), par, state)
    # resonant physics: the position sector matches the white model
    a, b = results["white"].row("var_x"), results["colored"].row("var_x")
    assert abs(a.estimate - b.estimate) < 3 * math.hypot(a.se, b.se)
    assert abs(results["colored"].row("var_x").z) < 3

    # full quantitative account, including the ultraviolet term: every
    # moment matches the frequency-domain prediction
    length = 1 << (steps - 1).bit_length()
    pred_x, pred_p = _discrete_response_prediction(par, state, 0.05, length)
    assert pred_x == pytest.approx(classical_variance_x(par, state), rel=2e-3)
    pred_h = 0.5 * (pred_x + pred_p)  # natural units
    pred_ratio = 1 + 2 * ((0.5 * pred_x) ** 2 + (0.5 * pred_p) ** 2) / pred_h**2
    for name, pred in (("var_p", pred_p), ("H", pred_h),
                       ("H2_over_H_sq", pred_ratio)):
        row = results["colored"].row(name)
        assert abs(row.estimate - pred) < 3 * row.se, (name, row.estimate, pred)


def test_euler_maruyama_equilibrium_cross_check():
    # EM needs dt << tau; at dt = tau/10 its equilibrium bias ~ dt/tau = 10%
    # must sit inside the combined statistical + discretization allowance
    par = OscillatorParams(tau=8e-3)
    state = ThermalState(0.0)
    dt = 8e-4
    burn = int(math.ceil(10 / (par.gamma * dt)))
    cfg = SimConfig(params=par, state=state, dt=dt, steps=burn + 8_000_000,
                    burn_in_steps=burn, seed=6, integrator="euler_maruyama")
    table = equilibrium_report(run(cfg), par, state)
    for name in ("var_x", "var_p", "H"):
        row = table.row(name)
        assert abs(row.estimate - row.reference) < 3 * row.se + 0.15 * row.reference


def test_report_requires_blocks(cold):
    par = OscillatorParams(tau=1e-3)
    traj = run(_config(params=par, steps=300_000, burn_in_steps=200_000))
    with pytest.raises(InsufficientDataError):
        equilibrium_report(traj, par, cold)


def test_trajectory_csv_export(tmp_path, cold):
    par = OscillatorParams(tau=4e-3)
    cfg = SimConfig(params=par, state=cold, dt=0.05, steps=60_000,
                    burn_in_steps=50_000, seed=2, dims=3, stride=100)
    traj = run(cfg)
    path = tmp_path / "traj.csv"
    trajectory_to_csv(traj, path)
    lines = path.read_text().splitlines()
    header_comments = [ln for ln in lines if ln.startswith("#")]
    assert any("seed=2" in ln for ln in header_comments)
    assert any("tau=0.004" in ln for ln in header_comments)
    cols = next(ln for ln in lines if not ln.startswith("#"))
    assert cols == "t,x1,p1,x2,p2,x3,p3"
    data = np.loadtxt(path, delimiter=",", skiprows=len(header_comments) + 1)
    assert data.shape == (traj.n, 7)
    assert data[0, 1] == pytest.approx(traj.x[0, 0], rel=1e-10)


def test_replica_config_derivation():
    cfg = _config()
    r1, r2 = replica_config(cfg, 1), replica_config(cfg, 2)
    assert r1.seed != r2.seed != cfg.seed
    assert replica_config(cfg, 1).seed == r1.seed  # deterministic


def test_trajectory_binary_export(tmp_path, cold):
    from zposc.langevin import trajectory_to_binary
    from zposc.noise import read_force_series

    par = OscillatorParams(tau=4e-3)
    cfg = SimConfig(params=par, state=cold, dt=0.05, steps=60_000,
                    burn_in_steps=50_000, seed=13, stride=10)
    traj = run(cfg)
    files = trajectory_to_binary(traj, tmp_path)
    assert sorted(f.name for f in files) == ["p1.bin", "x1.bin"]
    data, dt, seed = read_force_series(tmp_path / "x1.bin")
    assert np.array_equal(data, traj.x[0])
    assert dt == pytest.approx(0.5) and seed == 13
