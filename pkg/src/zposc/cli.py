"""Command-line interface.

Subcommands:
    oracle    print one closed-form thermal expectation value
    compare   classical-vs-quantum table over a temperature list
    algebra   run the exact bracket/commutator identity suite
    simulate  Langevin run with equilibrium statistics vs references
    sample    direct Monte Carlo estimates vs references
    sweep     CSV of a quantity over a temperature grid

Exit codes: 0 success; 1 algebra identity failure; 2 usage/config error;
3 statistical acceptance failure (some |z| > 5).

Flags override values from an optional flat key=value config file
(`--config`), which override built-in defaults.  Fixed seeds give
byte-identical outputs.  ZPOSC_THREADS sets the worker-thread count used
for chunked sampling (results are independent of it).
"""

from __future__ import annotations

import argparse
import math
from fractions import Fraction
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .algebra import (
    CanonicalPolynomial,
    Coefficient,
    DIMENSIONLESS,
    I_HBAR,
    OperatorPolynomial,
    angular_momentum,
    angular_momentum_op,
    angular_momentum_squared,
    angular_momentum_squared_op,
    commutator,
    hamiltonian,
    hamiltonian_ladder_basis,
    hamiltonian_op,
    ladder,
    momentum,
    momentum_op,
    poisson_bracket,
    position,
    position_op,
    weyl_symmetrize,
)
from .config import load_config_file, merge_settings
from .errors import ZposcError
from .estimates import fmt
from .model import OscillatorParams, ThermalState, mode_energy
from .oracles import (
    TheorySide,
    QuantitySpec,
    classical_variance_p,
    classical_variance_x,
    energy_mean,
    energy_second_moment,
    gaussian_moment,
    L2_component_mean,
    L2_mean,
    partition_function,
)
from .langevin import (
    SimConfig,
    energy_ks_test,
    equilibrium_report,
    marginal_ks_tests,
    run as run_simulation,
    trajectory_to_csv,
)
from .sampling import energy_law_test, estimate_chunked, draw_phase_space

_SCHEMA = 1


def _thread_count() -> int:
    raw = os.environ.get("ZPOSC_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _params_from(settings: dict) -> OscillatorParams:
    return OscillatorParams(
        m=settings["m"],
        omega0=settings["omega0"],
        hbar=settings["hbar"],
        kB=settings["kB"],
        tau=settings.get("tau", 0.0),
    )


_PARAM_DEFAULTS = {"m": 1.0, "omega0": 1.0, "hbar": 1.0, "kB": 1.0}


def _add_param_flags(
    sub: argparse.ArgumentParser, tau: bool = False, fmt_flag: bool = True
) -> None:
    group = sub.add_argument_group("physical parameters (natural units default)")
    for name in ("m", "omega0", "hbar", "kB"):
        group.add_argument(f"--{name}", type=float, default=None)
    if tau:
        group.add_argument("--tau", type=float, default=None,
                           help="radiation damping time")
    sub.add_argument("--config", default=None, metavar="FILE",
                     help="flat key=value file; flags override it")
    if fmt_flag:
        sub.add_argument("--format", dest="fmt", choices=("text", "csv", "json"),
                         default=None, help="output format")
    sub.add_argument("--output", default=None, metavar="PATH",
                     help="write the document here instead of stdout")


def _settings(args: argparse.Namespace, defaults: dict) -> dict:
    file_values = load_config_file(args.config) if args.config else {}
    flags = {key: getattr(args, key, None) for key in defaults}
    return merge_settings(defaults, file_values, flags)


def _csv_table(header: list[str], rows: list[list[str]]) -> str:
    lines = [",".join(header)]
    lines += [",".join(row) for row in rows]
    return "\n".join(lines) + "\n"


def _text_table(header: list[str], rows: list[list[str]]) -> str:
    widths = [
        max(len(header[i]), *(len(r[i]) for r in rows)) if rows else len(header[i])
        for i in range(len(header))
    ]
    out = ["  ".join(h.ljust(w) for h, w in zip(header, widths))]
    out += ["  ".join(c.ljust(w) for c, w in zip(r, widths)) for r in rows]
    return "\n".join(out) + "\n"


def _json_doc(payload: dict) -> str:
    import json

    return json.dumps({"schema_version": _SCHEMA, **payload}, indent=2,
                      sort_keys=True) + "\n"


# -- oracle --------------------------------------------------------------------

_ORACLE_QUANTITIES = ("H", "H2", "L2", "Lx2", "x2", "p2", "var_x", "var_p",
                      "Z", "E", "EP")
_SIDED = {"H", "H2", "L2", "Lx2", "x2", "p2"}


def _oracle_value(quantity: str, side: str | None, params: OscillatorParams,
                  state: ThermalState) -> float:
    if quantity in _SIDED:
        if side is None:
            raise ZposcError(
                f"--quantity {quantity} needs --side classical|quantum"
            )
        side_val = TheorySide.parse(side)
        if quantity == "H":
            return energy_mean(side_val, params, state)
        if quantity == "H2":
            return energy_second_moment(side_val, params, state)
        if quantity == "L2":
            return L2_mean(side_val, params, state)
        if quantity == "Lx2":
            return L2_component_mean(side_val, params, state)
        # second moments of x and p coincide on the two sides
        if quantity == "x2":
            return gaussian_moment(2, classical_variance_x(params, state))
        return gaussian_moment(2, classical_variance_p(params, state))
    if quantity == "var_x":
        return classical_variance_x(params, state)
    if quantity == "var_p":
        return classical_variance_p(params, state)
    if quantity == "Z":
        if side not in (None, "quantum"):
            raise ZposcError("the partition function is defined for the quantum side only")
        return partition_function(params, state)
    if quantity == "E":
        return mode_energy(params.omega0, state, params, include_zero_point=True)
    if quantity == "EP":
        return mode_energy(params.omega0, state, params, include_zero_point=False)
    raise ZposcError(f"unknown quantity {quantity!r}")


def cmd_oracle(args: argparse.Namespace) -> int:
    defaults = {**_PARAM_DEFAULTS, "T": 0.0}
    settings = _settings(args, defaults)
    params = _params_from(settings)
    state = ThermalState(settings["T"])
    value = _oracle_value(args.quantity, args.side, params, state)
    fmt_kind = args.fmt or "text"
    if fmt_kind == "text":
        _emit(fmt(value) + "\n", args.output)
    elif fmt_kind == "csv":
        _emit(_csv_table(
            ["quantity", "side", "T", "value"],
            [[args.quantity, args.side or "", fmt(state.temperature), fmt(value)]],
        ), args.output)
    else:
        _emit(_json_doc({
            "quantity": args.quantity,
            "side": args.side,
            "T": state.temperature,
            "value": value,
        }), args.output)
    return 0


# -- compare ---------------------------------------------------------------------


def _compare_rows(temperatures: list[float], params: OscillatorParams) -> list[dict]:
    rows = []
    for t in temperatures:
        state = ThermalState(t)
        row = {
            "T": t,
            "H_classical": energy_mean(TheorySide.CLASSICAL, params, state),
            "H_quantum": energy_mean(TheorySide.QUANTUM, params, state),
            "H2_classical": energy_second_moment(TheorySide.CLASSICAL, params, state),
            "H2_quantum": energy_second_moment(TheorySide.QUANTUM, params, state),
            "L2_classical": L2_mean(TheorySide.CLASSICAL, params, state),
            "L2_quantum": L2_mean(TheorySide.QUANTUM, params, state),
        }
        row["H2_difference"] = row["H2_classical"] - row["H2_quantum"]
        row["L2_difference"] = row["L2_classical"] - row["L2_quantum"]
        rows.append(row)
    # the gaps are temperature independent; make the table self-checking
    h2_gap = (0.5 * params.hbar * params.omega0) ** 2
    l2_gap = 1.5 * params.hbar**2
    for row in rows:
        for key, gap in (("H2_difference", h2_gap), ("L2_difference", l2_gap)):
            if not math.isclose(row[key], gap, rel_tol=1e-9, abs_tol=1e-12):
                raise ZposcError(
                    f"difference column {key} drifted from {gap!r} at T={row['T']}"
                )
    return rows


_COMPARE_COLS = ["T", "H_classical", "H_quantum", "H2_classical", "H2_quantum",
                 "H2_difference", "L2_classical", "L2_quantum", "L2_difference"]


def cmd_compare(args: argparse.Namespace) -> int:
    defaults = {**_PARAM_DEFAULTS, "T": "0,1,10"}
    settings = _settings(args, defaults)
    params = _params_from(settings)
    try:
        temperatures = [float(tok) for tok in str(settings["T"]).split(",") if tok]
    except ValueError:
        raise ZposcError(f"--T expects a comma-separated list, got {settings['T']!r}")
    if any(t < 0 for t in temperatures) or not temperatures:
        raise ZposcError("temperatures must be a nonempty list of T >= 0")
    rows = _compare_rows(temperatures, params)
    str_rows = [[fmt(row[c]) for c in _COMPARE_COLS] for row in rows]
    fmt_kind = args.fmt or "text"
    if fmt_kind == "csv":
        _emit(_csv_table(_COMPARE_COLS, str_rows), args.output)
    elif fmt_kind == "json":
        _emit(_json_doc({"rows": rows}), args.output)
    else:
        _emit(_text_table(_COMPARE_COLS, str_rows), args.output)
    if args.figures:
        from . import plotting

        outdir = Path(args.figures)
        outdir.mkdir(parents=True, exist_ok=True)
        plotting.compare_figure(rows, outdir)
    return 0


# -- algebra ----------------------------------------------------------------------


def _algebra_checks() -> list[tuple[str, object]]:
    """(description, residual) pairs; a residual of zero means the identity holds."""
    x, px = position(1), momentum(1)
    l_cl = [angular_momentum(i) for i in (1, 2, 3)]
    l2_cl = angular_momentum_squared()
    h3 = hamiltonian(3)
    xh, ph = position_op(1), momentum_op(1)
    l_op = [angular_momentum_op(i) for i in (1, 2, 3)]
    l2_op = angular_momentum_squared_op()
    one = CanonicalPolynomial.scalar(1)

    checks: list[tuple[str, object]] = [
        ("{x, p_x} = 1", poisson_bracket(x, px) - one),
        ("[x^, p^_x] = i*hbar", commutator(xh, ph)
         - OperatorPolynomial.scalar(I_HBAR)),
    ]
    cyclic = ((1, 2, 3), (2, 3, 1), (3, 1, 2))
    for i, j, k in cyclic:
        checks.append((
            f"{{L_{i}, L_{j}}} = L_{k}",
            poisson_bracket(l_cl[i - 1], l_cl[j - 1]) - l_cl[k - 1],
        ))
    for i, j, k in cyclic:
        checks.append((
            f"[L^_{i}, L^_{j}] = i*hbar*L^_{k}",
            commutator(l_op[i - 1], l_op[j - 1]) - l_op[k - 1] * I_HBAR,
        ))
    for i in (1, 2, 3):
        checks.append((f"{{L^2, L_{i}}} = 0", poisson_bracket(l2_cl, l_cl[i - 1])))
    for i in (1, 2, 3):
        checks.append((f"[L^2, L^_{i}] = 0", commutator(l2_op, l_op[i - 1])))
    for i in (1, 2, 3):
        checks.append((f"{{H_3D, L_{i}}} = 0", poisson_bracket(h3, l_cl[i - 1])))
    checks.append(("{H_3D, L^2} = 0", poisson_bracket(h3, l2_cl)))
    for i, j, k in cyclic:
        checks.append((
            f"[L^_{i}, L^_{j}] = i*hbar*W({{L_{i}, L_{j}}})",
            commutator(l_op[i - 1], l_op[j - 1])
            - weyl_symmetrize(poisson_bracket(l_cl[i - 1], l_cl[j - 1])) * I_HBAR,
        ))
    checks.append(("W(H) = H^", weyl_symmetrize(hamiltonian(1)) - hamiltonian_op(1)))
    lower, raise_ = ladder("lower"), ladder("raise")
    checks.append(("[a, a+] = 1", commutator(lower, raise_)
                   - OperatorPolynomial.scalar(1, DIMENSIONLESS)))
    half = OperatorPolynomial.scalar(Fraction(1, 2), DIMENSIONLESS)
    h_ladder = (raise_ * lower + half) * Coefficient.make(1, hbar_power=1)
    checks.append(("H^ = hbar*omega0*(a+ a + 1/2)",
                   h_ladder - hamiltonian_ladder_basis()))
    return checks


def cmd_algebra(args: argparse.Namespace) -> int:
    checks = _algebra_checks()
    if args.checks:
        needle = args.checks.lower()
        checks = [c for c in checks if needle in c[0].lower()]
        if not checks:
            raise ZposcError(f"no identity matches {args.checks!r}")
    failures = 0
    lines = []
    for name, residual in checks:
        if residual.is_zero:
            lines.append(f"PASS  {name}")
        else:
            failures += 1
            lines.append(f"FAIL  {name}  residual: {residual.render()}")
    lines.append(f"{len(checks) - failures}/{len(checks)} identities hold")
    _emit("\n".join(lines) + "\n", args.output)
    return 1 if failures else 0


# -- simulate ------------------------------------------------------------------------


def cmd_simulate(args: argparse.Namespace) -> int:
    defaults = {
        **_PARAM_DEFAULTS,
        "tau": 1e-3,
        "T": 0.0,
        "dt": 0.05,
        "steps": 4_000_000,
        "burn_in": 0,
        "seed": 12345,
        "dims": 1,
        "integrator": "exact_gaussian",
        "noise": "white",
        "stride": 0,
        "traj_rows": 100_000,
    }
    settings = _settings(args, defaults)
    params = _params_from(settings)
    state = ThermalState(settings["T"])
    burn_in = settings["burn_in"]
    if burn_in == 0:
        burn_in = int(math.ceil(10.0 / (params.gamma * settings["dt"])))
    config = SimConfig(
        params=params,
        state=state,
        dt=settings["dt"],
        steps=settings["steps"],
        burn_in_steps=burn_in,
        seed=settings["seed"],
        dims=settings["dims"],
        integrator=settings["integrator"],
        noise_mode=settings["noise"],
        stride=settings["stride"],
    )
    config.validate()
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    traj = run_simulation(config)
    table = equilibrium_report(traj, params, state)
    (outdir / "estimates.csv").write_text(table.to_csv())
    (outdir / "estimates.json").write_text(table.to_json())
    if settings["traj_rows"]:
        export = traj
        extra = max(1, traj.n // settings["traj_rows"])
        if extra > 1:
            from dataclasses import replace as dc_replace

            export = dc_replace(
                traj,
                x=traj.x[:, ::extra],
                p=traj.p[:, ::extra],
                stride=traj.stride * extra,
            )
        trajectory_to_csv(export, outdir / "trajectory.csv")

    marginals = marginal_ks_tests(traj, params, state)
    energy_law = energy_ks_test(traj, params, state)

    lines = [table.render_text()]
    for name, rep in (*marginals.items(), ("H", energy_law)):
        status = "pass" if rep.passed else "FAIL"
        lines.append(
            f"KS {rep.law}: statistic={fmt(rep.statistic)} "
            f"p={fmt(rep.pvalue)} [{status} at {rep.level:g}]"
        )
    lines.append(f"artifacts written to {outdir}")
    _emit("\n".join(lines) + "\n", args.output)

    if args.figures:
        from . import plotting

        figdir = Path(args.figures)
        figdir.mkdir(parents=True, exist_ok=True)
        h = (traj.p**2).sum(axis=0) / (2 * params.m) + (
            0.5 * params.m * params.omega0**2
        ) * (traj.x**2).sum(axis=0)
        plotting.trajectory_figure(traj.x[0], h, params, state, figdir)
        plotting.estimates_figure(table, figdir, "simulate")
    return 3 if table.max_abs_z() > 5.0 else 0


# -- sample ---------------------------------------------------------------------------


def _sample_specs(dims: int) -> list[QuantitySpec]:
    specs = [
        QuantitySpec("x_moment", 2, dims),
        QuantitySpec("p_moment", 2, dims),
        QuantitySpec("H", dims=dims),
    ]
    if dims == 1:
        specs += [QuantitySpec("H2", dims=1), QuantitySpec("H2_over_H_sq", dims=1)]
    else:
        specs += [
            QuantitySpec("Lx2", dims=3),
            QuantitySpec("Ly2", dims=3),
            QuantitySpec("Lz2", dims=3),
            QuantitySpec("L2", dims=3),
        ]
    return specs


def cmd_sample(args: argparse.Namespace) -> int:
    defaults = {
        **_PARAM_DEFAULTS,
        "T": 0.0,
        "n": 1_000_000,
        "dims": 1,
        "seed": 12345,
        "chunks": 1,
    }
    settings = _settings(args, defaults)
    params = _params_from(settings)
    state = ThermalState(settings["T"])
    if settings["n"] < 1 or settings["dims"] not in (1, 3):
        raise ZposcError("need n >= 1 and dims in {1, 3}")
    specs = _sample_specs(settings["dims"])
    table = estimate_chunked(
        settings["n"], settings["dims"], params, state, settings["seed"],
        specs, chunks=settings["chunks"], max_workers=_thread_count(),
    )
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "estimates.csv").write_text(table.to_csv())
    (outdir / "estimates.json").write_text(table.to_json())

    lines = [table.render_text()]
    if settings["n"] >= 1000:
        law_sample = draw_phase_space(
            min(settings["n"], 200_000), settings["dims"], params, state,
            settings["seed"],
        )
        rep = energy_law_test(law_sample, params, state)
        status = "pass" if rep.passed else "FAIL"
        lines.append(
            f"KS {rep.law}: statistic={fmt(rep.statistic)} p={fmt(rep.pvalue)} "
            f"[{status} at {rep.level:g}]"
        )
    lines.append(f"artifacts written to {outdir}")
    _emit("\n".join(lines) + "\n", args.output)

    if args.figures:
        from . import plotting

        figdir = Path(args.figures)
        figdir.mkdir(parents=True, exist_ok=True)
        plotting.estimates_figure(table, figdir, "sample")
    return 3 if table.max_abs_z() > 5.0 else 0


# -- sweep ------------------------------------------------------------------------------

_SWEEP_QUANTITIES = ("H", "H2", "L2", "E", "EP", "Z")


def cmd_sweep(args: argparse.Namespace) -> int:
    defaults = {
        **_PARAM_DEFAULTS,
        "T_min": 0.0,
        "T_max": 100.0,
        "points": 21,
        "log": False,
    }
    settings = _settings(args, defaults)
    params = _params_from(settings)
    quantity, side = args.quantity, args.side
    if settings["points"] < 2:
        raise ZposcError("--points must be >= 2")
    if settings["T_min"] < 0 or settings["T_max"] <= settings["T_min"]:
        raise ZposcError("need 0 <= T_min < T_max")
    if settings["log"]:
        if settings["T_min"] <= 0:
            raise ZposcError("--log needs T_min > 0")
        grid = np.geomspace(settings["T_min"], settings["T_max"], settings["points"])
    else:
        grid = np.linspace(settings["T_min"], settings["T_max"], settings["points"])
    if quantity == "Z" and grid[0] == 0.0:
        raise ZposcError("the partition function needs T > 0; raise T_min")

    sided = quantity in ("H", "H2", "L2")
    if sided and side is None:
        raise ZposcError(f"--quantity {quantity} needs --side")
    header = ["T", "value"]
    if quantity in ("H2", "L2"):
        other = "quantum" if side == "classical" else "classical"
        header += [f"value_{other}", "difference"]
    rows = []
    values, counterpart = [], []
    for t in grid:
        state = ThermalState(float(t))
        value = _oracle_value(quantity, side if sided else None, params, state)
        row = [fmt(float(t)), fmt(value)]
        values.append(value)
        if quantity in ("H2", "L2"):
            other_side = "quantum" if side == "classical" else "classical"
            cval = _oracle_value(quantity, other_side, params, state)
            counterpart.append(cval)
            row += [fmt(cval), fmt(value - cval)]
        rows.append(row)
    fmt_kind = args.fmt or "csv"
    if fmt_kind == "json":
        _emit(_json_doc({
            "quantity": quantity,
            "side": side,
            "rows": [dict(zip(header, [float(c) for c in r])) for r in rows],
        }), args.output)
    elif fmt_kind == "text":
        _emit(_text_table(header, rows), args.output)
    else:
        _emit(_csv_table(header, rows), args.output)

    if args.figures:
        from . import plotting

        figdir = Path(args.figures)
        figdir.mkdir(parents=True, exist_ok=True)
        plotting.sweep_figure(
            [float(t) for t in grid], values, quantity, side or "",
            figdir, counterpart=counterpart or None, log_t=bool(settings["log"]),
        )
    return 0


# -- parser ------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zposc",
        description="Classical vs quantum oscillator statistics in thermal "
                    "and zero-point radiation",
    )
    parser.add_argument("--version", action="version", version=f"zposc {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    oracle = subs.add_parser("oracle", help="print one closed-form value")
    oracle.add_argument("--quantity", required=True, choices=_ORACLE_QUANTITIES)
    oracle.add_argument("--side", choices=("classical", "quantum"), default=None)
    oracle.add_argument("--T", type=float, default=None)
    _add_param_flags(oracle)
    oracle.set_defaults(func=cmd_oracle)

    compare = subs.add_parser("compare", help="classical vs quantum table")
    compare.add_argument("--T", default=None,
                         help="comma-separated temperature list, e.g. 0,1,10")
    compare.add_argument("--figures", default=None, metavar="DIR",
                         help="also render figures into DIR")
    _add_param_flags(compare)
    compare.set_defaults(func=cmd_compare)

    algebra = subs.add_parser("algebra", help="exact identity suite")
    algebra.add_argument("--checks", default=None,
                         help="only run identities whose name contains this")
    algebra.add_argument("--output", default=None)
    algebra.set_defaults(func=cmd_algebra)

    simulate = subs.add_parser("simulate", help="Langevin equilibrium run")
    simulate.add_argument("--T", type=float, default=None)
    simulate.add_argument("--dt", type=float, default=None)
    simulate.add_argument("--steps", type=int, default=None)
    simulate.add_argument("--burn-in", dest="burn_in", type=int, default=None,
                          help="0 selects ten relaxation times")
    simulate.add_argument("--seed", type=int, default=None)
    simulate.add_argument("--dims", type=int, choices=(1, 3), default=None)
    simulate.add_argument("--integrator",
                          choices=("exact_gaussian", "euler_maruyama"), default=None)
    simulate.add_argument("--noise", choices=("white", "colored"), default=None)
    simulate.add_argument("--stride", type=int, default=None)
    simulate.add_argument("--traj-rows", dest="traj_rows", type=int, default=None,
                          help="max trajectory CSV rows (0 disables the file)")
    simulate.add_argument("--outdir", default=".", metavar="DIR")
    simulate.add_argument("--figures", default=None, metavar="DIR")
    _add_param_flags(simulate, tau=True, fmt_flag=False)
    simulate.set_defaults(func=cmd_simulate)

    sample = subs.add_parser("sample", help="direct Monte Carlo estimates")
    sample.add_argument("--T", type=float, default=None)
    sample.add_argument("--n", type=int, default=None)
    sample.add_argument("--dims", type=int, choices=(1, 3), default=None)
    sample.add_argument("--seed", type=int, default=None)
    sample.add_argument("--chunks", type=int, default=None)
    sample.add_argument("--outdir", default=".", metavar="DIR")
    sample.add_argument("--figures", default=None, metavar="DIR")
    _add_param_flags(sample, fmt_flag=False)
    sample.set_defaults(func=cmd_sample)

    sweep = subs.add_parser("sweep", help="quantity over a temperature grid")
    sweep.add_argument("--quantity", required=True, choices=_SWEEP_QUANTITIES)
    sweep.add_argument("--side", choices=("classical", "quantum"), default=None)
    sweep.add_argument("--T-min", dest="T_min", type=float, default=None)
    sweep.add_argument("--T-max", dest="T_max", type=float, default=None)
    sweep.add_argument("--points", type=int, default=None)
    sweep.add_argument("--log", action="store_const", const=True, default=None,
                       help="log-spaced temperature grid")
    sweep.add_argument("--figures", default=None, metavar="DIR")
    _add_param_flags(sweep)
    sweep.set_defaults(func=cmd_sweep)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ZposcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())
