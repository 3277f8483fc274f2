import json

import pytest

from zposc.cli import main
from zposc.estimates import EstimateRow, EstimateTable


def run_cli(capsys, *argv):
    rc = main(list(argv))
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


# -- oracle ---------------------------------------------------------------------


@pytest.mark.parametrize("argv,expected", [
    (["oracle", "--quantity", "L2", "--side", "classical", "--T", "0"], "1.5"),
    (["oracle", "--quantity", "L2", "--side", "quantum", "--T", "0"], "0"),
    (["oracle", "--quantity", "H2", "--side", "quantum", "--T", "0"], "0.25"),
    (["oracle", "--quantity", "H2", "--side", "classical", "--T", "0"], "0.5"),
    (["oracle", "--quantity", "H", "--side", "classical", "--T", "0"], "0.5"),
    (["oracle", "--quantity", "Z", "--T", "1"], "0.959517375667"),
    (["oracle", "--quantity", "E", "--T", "0"], "0.5"),
    (["oracle", "--quantity", "EP", "--T", "0"], "0"),
    (["oracle", "--quantity", "Lx2", "--side", "classical", "--T", "0"], "0.5"),
])
def test_oracle_values(capsys, argv, expected):
    rc, out, _ = run_cli(capsys, *argv)
    assert rc == 0
    assert out.strip() == expected


def test_oracle_twelve_significant_digits(capsys):
    rc, out, _ = run_cli(capsys, "oracle", "--quantity", "H",
                         "--side", "quantum", "--T", "1")
    assert rc == 0
    assert out.strip() == "1.08197670687"


@pytest.mark.parametrize("argv", [
    ["oracle", "--quantity", "Z", "--side", "classical", "--T", "1"],
    ["oracle", "--quantity", "Z", "--T", "0"],
    ["oracle", "--quantity", "L2", "--T", "0"],          # side required
    ["oracle", "--quantity", "bogus", "--T", "0"],       # argparse choice
    ["oracle", "--quantity", "H", "--side", "newton", "--T", "0"],
    ["oracle", "--quantity", "H", "--side", "classical", "--T", "-2"],
])
def test_oracle_invalid_combinations_exit_2(capsys, argv):
    rc, _, err = run_cli(capsys, *argv)
    assert rc == 2


def test_oracle_formats(capsys, tmp_path):
    rc, out, _ = run_cli(capsys, "oracle", "--quantity", "H2", "--side",
                         "quantum", "--T", "0", "--format", "csv")
    assert rc == 0
    assert out.splitlines()[0] == "quantity,side,T,value"
    assert out.splitlines()[1] == "H2,quantum,0,0.25"

    out_path = tmp_path / "doc.json"
    rc, _, _ = run_cli(capsys, "oracle", "--quantity", "H2", "--side",
                       "quantum", "--T", "0", "--format", "json",
                       "--output", str(out_path))
    assert rc == 0
    doc = json.loads(out_path.read_text())
    assert doc["schema_version"] == 1 and doc["value"] == 0.25


def test_oracle_si_parameters(capsys):
    rc, out, _ = run_cli(capsys, "oracle", "--quantity", "H", "--side",
                         "classical", "--T", "0", "--hbar", "2", "--omega0", "3")
    assert rc == 0
    assert out.strip() == "3"  # hbar*omega0/2


# -- compare -----------------------------------------------------------------------


def test_compare_table(capsys):
    rc, out, _ = run_cli(capsys, "compare", "--T", "0,1,10", "--format", "csv")
    assert rc == 0
    lines = out.strip().splitlines()
    assert lines[0].split(",")[0] == "T"
    rows = [ln.split(",") for ln in lines[1:]]
    idx = lines[0].split(",").index
    assert [r[idx("H2_difference")] for r in rows] == ["0.25", "0.25", "0.25"]
    assert [r[idx("L2_difference")] for r in rows] == ["1.5", "1.5", "1.5"]
    assert rows[0][idx("L2_quantum")] == "0"


def test_compare_rejects_negative_temperature(capsys):
    rc, _, err = run_cli(capsys, "compare", "--T", "0,-1")
    assert rc == 2
    assert "T >= 0" in err


def test_compare_json_roundtrip(capsys):
    rc, out, _ = run_cli(capsys, "compare", "--T", "0,2.5", "--format", "json")
    assert rc == 0
    doc = json.loads(out)
    assert doc["schema_version"] == 1
    assert doc["rows"][0]["L2_classical"] == 1.5


# -- algebra -----------------------------------------------------------------------


def test_algebra_all_pass(capsys):
    rc, out, _ = run_cli(capsys, "algebra")
    assert rc == 0
    lines = out.strip().splitlines()
    assert all(ln.startswith("PASS") for ln in lines[:-1])
    assert lines[-1] == "24/24 identities hold"


def test_algebra_filter(capsys):
    rc, out, _ = run_cli(capsys, "algebra", "--checks", "casimir")
    assert rc == 2  # no identity carries that name
    rc, out, _ = run_cli(capsys, "algebra", "--checks", "L^2")
    assert rc == 0
    assert "PASS" in out


# -- sweep --------------------------------------------------------------------------


def test_sweep_high_temperature_limit(capsys):
    rc, out, _ = run_cli(capsys, "sweep", "--quantity", "L2", "--side",
                         "classical", "--T-min", "1", "--T-max", "100",
                         "--points", "5", "--log")
    assert rc == 0
    lines = out.strip().splitlines()
    assert lines[0] == "T,value,value_quantum,difference"
    last = lines[-1].split(",")
    value = float(last[1])
    assert abs(value / 60000.0 - 1) < 1.7e-5 * 1.01
    assert float(last[3]) == 1.5
    temps = [float(ln.split(",")[0]) for ln in lines[1:]]
    assert temps == sorted(temps)


def test_sweep_energy_to_zero_temperature(capsys):
    rc, out, _ = run_cli(capsys, "sweep", "--quantity", "H", "--side",
                         "classical", "--T-min", "0", "--T-max", "1",
                         "--points", "3")
    assert rc == 0
    first = out.strip().splitlines()[1].split(",")
    assert first == ["0", "0.5"]


def test_sweep_planck_spectrum_vanishes_at_low_temperature(capsys):
    rc, out, _ = run_cli(capsys, "sweep", "--quantity", "EP", "--T-min",
                         "0.01", "--T-max", "1", "--points", "4", "--log")
    assert rc == 0
    rows = [ln.split(",") for ln in out.strip().splitlines()[1:]]
    values = [float(r[1]) for r in rows]
    assert values[0] < 1e-40
    assert values == sorted(values)


@pytest.mark.parametrize("argv", [
    ["sweep", "--quantity", "L2", "--side", "classical", "--points", "1"],
    ["sweep", "--quantity", "L2", "--T-min", "0", "--T-max", "1"],  # no side
    ["sweep", "--quantity", "Z", "--T-min", "0", "--T-max", "1"],
    ["sweep", "--quantity", "H", "--side", "classical", "--T-min", "5",
     "--T-max", "1"],
    ["sweep", "--quantity", "H", "--side", "classical", "--T-min", "0",
     "--T-max", "1", "--log"],
])
def test_sweep_invalid_usage(capsys, argv):
    rc, _, _ = run_cli(capsys, *argv)
    assert rc == 2


def test_sweep_figures(capsys, tmp_path):
    figdir = tmp_path / "figs"
    rc, _, _ = run_cli(capsys, "sweep", "--quantity", "H2", "--side",
                       "classical", "--T-min", "0.1", "--T-max", "10",
                       "--points", "4", "--log", "--figures", str(figdir))
    assert rc == 0
    assert (figdir / "sweep_H2.png").stat().st_size > 1000


# -- sample -------------------------------------------------------------------------


def test_sample_writes_artifacts_and_passes(capsys, tmp_path):
    rc, out, _ = run_cli(capsys, "sample", "--dims", "3", "--T", "0", "--n",
                         "200000", "--seed", "7", "--outdir", str(tmp_path))
    assert rc == 0
    assert "L2" in out and "KS" in out
    table = EstimateTable.from_csv((tmp_path / "estimates.csv").read_text())
    assert table.row("L2").reference == 1.5
    doc = json.loads((tmp_path / "estimates.json").read_text())
    assert doc["schema_version"] == 1
    assert table.max_abs_z() < 5


def test_sample_byte_identical_under_chunking_and_threads(capsys, tmp_path, monkeypatch):
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    rc, stdout_a, _ = run_cli(capsys, "sample", "--dims", "1", "--T", "1",
                              "--n", "100000", "--seed", "3", "--chunks", "1",
                              "--outdir", str(out_a))
    assert rc == 0
    monkeypatch.setenv("ZPOSC_THREADS", "4")
    rc, stdout_b, _ = run_cli(capsys, "sample", "--dims", "1", "--T", "1",
                              "--n", "100000", "--seed", "3", "--chunks", "16",
                              "--outdir", str(out_b))
    assert rc == 0
    assert (out_a / "estimates.csv").read_bytes() == (out_b / "estimates.csv").read_bytes()
    assert (out_a / "estimates.json").read_bytes() == (out_b / "estimates.json").read_bytes()
    assert stdout_a.replace(str(out_a), "") == stdout_b.replace(str(out_b), "")


def test_sample_statistical_failure_exit_3(capsys, tmp_path, monkeypatch):
    import zposc.cli as cli_mod

    bad = EstimateTable.build([EstimateRow("x^2", 99.0, 0.001, 10, 0.5)])
    monkeypatch.setattr(cli_mod, "estimate_chunked",
                        lambda *a, **k: bad)
    rc, _, _ = run_cli(capsys, "sample", "--n", "2000", "--outdir", str(tmp_path))
    assert rc == 3


def test_sample_figures(capsys, tmp_path):
    figdir = tmp_path / "figs"
    rc, _, _ = run_cli(capsys, "sample", "--n", "50000", "--seed", "2",
                       "--outdir", str(tmp_path), "--figures", str(figdir))
    assert rc == 0
    assert (figdir / "sample_z.png").stat().st_size > 1000


def test_sample_invalid_usage(capsys, tmp_path):
    rc, _, _ = run_cli(capsys, "sample", "--n", "0", "--outdir", str(tmp_path))
    assert rc == 2
    rc, _, _ = run_cli(capsys, "sample", "--dims", "2", "--outdir", str(tmp_path))
    assert rc == 2


# -- simulate ------------------------------------------------------------------------


def test_simulate_run(capsys, tmp_path):
    rc, out, _ = run_cli(
        capsys, "simulate", "--T", "0", "--tau", "4e-3", "--dt", "0.05",
        "--steps", "2000000", "--seed", "11", "--outdir", str(tmp_path),
        "--figures", str(tmp_path / "figs"),
    )
    assert rc == 0
    assert "var_x" in out and "KS" in out
    table = EstimateTable.from_csv((tmp_path / "estimates.csv").read_text())
    assert table.row("H").reference == 0.5
    assert table.max_abs_z() < 5
    traj_lines = (tmp_path / "trajectory.csv").read_text().splitlines()
    assert any(ln.startswith("# seed=11") for ln in traj_lines)
    assert (tmp_path / "figs" / "simulate_diagnostics.png").exists()
    assert (tmp_path / "figs" / "simulate_z.png").exists()


def test_simulate_rejects_bad_config(capsys, tmp_path):
    rc, _, err = run_cli(capsys, "simulate", "--dt", "0.5",
                         "--outdir", str(tmp_path))
    assert rc == 2
    rc, _, _ = run_cli(capsys, "simulate", "--tau", "0.2",
                       "--outdir", str(tmp_path))
    assert rc == 2


# -- config files ---------------------------------------------------------------------


def test_config_file_with_flag_override(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("T = 1\nomega0 = 2.0  # rad/s\n")
    rc, out, _ = run_cli(capsys, "oracle", "--quantity", "H", "--side",
                         "classical", "--config", str(cfg))
    assert rc == 0
    # hbar*omega0/2 * coth(hbar*omega0/2kT) with omega0=2, T=1
    import math

    assert float(out) == pytest.approx(1.0 / math.tanh(1.0), rel=1e-12)
    rc, out, _ = run_cli(capsys, "oracle", "--quantity", "H", "--side",
                         "classical", "--config", str(cfg), "--T", "0")
    assert rc == 0
    assert float(out) == 1.0  # flag T=0 overrides the file


def test_config_file_unknown_key(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("temperature = 1\n")
    rc, _, err = run_cli(capsys, "oracle", "--quantity", "H", "--side",
                         "classical", "--config", str(cfg))
    assert rc == 2
    assert "unknown config key" in err


def test_config_file_type_error(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("T = warm\n")
    rc, _, _ = run_cli(capsys, "oracle", "--quantity", "H", "--side",
                       "classical", "--config", str(cfg))
    assert rc == 2


# -- misc ---------------------------------------------------------------------------


def test_version(capsys):
    rc, out, _ = run_cli(capsys, "--version")
    assert rc == 0


def test_no_command_exits_2(capsys):
    rc, _, _ = run_cli(capsys)
    assert rc == 2


def test_outputs_deterministic(capsys, tmp_path):
    args = ["compare", "--T", "0,0.5,2", "--format", "csv"]
    rc1, out1, _ = run_cli(capsys, *args)
    rc2, out2, _ = run_cli(capsys, *args)
    assert rc1 == rc2 == 0
    assert out1 == out2


def test_compare_figures(capsys, tmp_path):
    figdir = tmp_path / "figs"
    rc, _, _ = run_cli(capsys, "compare", "--T", "0.5,1,10",
                       "--figures", str(figdir))
    assert rc == 0
    assert (figdir / "compare.png").stat().st_size > 1000


def test_simulate_colored_mode(capsys, tmp_path):
    rc, out, _ = run_cli(
        capsys, "simulate", "--T", "0", "--tau", "4e-3", "--noise", "colored",
        "--steps", "2000000", "--seed", "19", "--outdir", str(tmp_path),
        "--traj-rows", "0",
    )
    # the z gate fires: the colored spectrum's ultraviolet tail shifts the
    # momentum sector away from the white-noise references (real physics of
    # the omega^2 E(omega) shape, reported honestly)
    assert rc == 3
    table = EstimateTable.from_csv((tmp_path / "estimates.csv").read_text())
    # the position sector is resonance-dominated and matches the analytic value
    assert abs(table.row("var_x").z) < 4
    assert table.row("var_p").z > 5
    assert not (tmp_path / "trajectory.csv").exists()


def test_algebra_failure_lists_residual(capsys, monkeypatch):
    import zposc.cli as cli_mod
    from zposc.algebra import position

    good = cli_mod._algebra_checks()[:2]
    broken = good + [("{x, x} = 1 (deliberately wrong)", position(1))]
    monkeypatch.setattr(cli_mod, "_algebra_checks", lambda: broken)
    rc, out, _ = run_cli(capsys, "algebra")
    assert rc == 1
    assert "FAIL" in out and "residual: x1" in out
    assert "2/3 identities hold" in out
