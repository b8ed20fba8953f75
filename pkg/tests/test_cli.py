"""Tests for the experiment CLI: flags, CSV contracts, exit codes."""

import math

import pytest

from cavity_schwarz.cli import (
    ExperimentConfig,
    UsageError,
    _propagating_count,
    main,
)
from cavity_schwarz.rational import read_table_file

K9 = ["--wavenumber", "9", "--height", "0.5",
      "--excitation-modes", "2", "--max-modes", "4"]


def run_cli(capsys, *argv, expect=0):
    code = main(list(argv))
    captured = capsys.readouterr()
    assert code == expect, (code, captured.err)
    return captured


def csv_rows(text):
    lines = [line for line in text.strip().splitlines() if line]
    header = lines[0].split(",")
    return header, [dict(zip(header, line.split(","))) for line in lines[1:]]


def sig3(x: float) -> float:
    return float(f"{x:.3g}")


# --- experiment configuration ----------------------------------------------------------

def test_propagating_count_rules():
    assert _propagating_count(157.085, 0.5) == 25
    assert _propagating_count(9.0, 0.5) == 1
    # a mode exactly at cutoff does not count as propagating
    assert _propagating_count(2 * math.pi, 0.5) == 0
    assert _propagating_count(1.0, 0.5) == 0


def test_config_wavenumber_resolution():
    cfg = ExperimentConfig(length=1.0, l_over_lambda=25.0009)
    assert math.isclose(cfg.resolved_wavenumber(), 2 * math.pi * 25.0009)
    with pytest.raises(UsageError):
        ExperimentConfig(wavenumber=9.0, l_over_lambda=5.0).resolved_wavenumber()
    with pytest.raises(UsageError):
        ExperimentConfig().resolved_wavenumber()


def test_config_benchmark_mode_sizing():
    cavity = ExperimentConfig(wavenumber=157.085, height=0.5).cavity()
    assert cavity.excitation_modes == 50
    assert cavity.max_modes == 100


# --- pade-table -------------------------------------------------------------------------

def test_pade_table_first_order_row(capsys):
    out = run_cli(capsys, "pade-table", "--n", "1")
    header, rows = csv_rows(out.out)
    assert header == ["n", "i", "c0", "a_i", "b_i", "sqrt_b_i"]
    row = rows[0]
    assert sig3(float(row["c0"])) == 6.00e0
    assert sig3(float(row["a_i"])) == 7.50e1
    assert sig3(float(row["b_i"])) == 1.50e1


def test_pade_table_third_order_first_pole(capsys):
    out = run_cli(capsys, "pade-table", "--n", "3")
    _, rows = csv_rows(out.out)
    assert sig3(float(rows[0]["c0"])) == 2.80e1
    assert sig3(float(rows[0]["b_i"])) == 9.87e0


def test_pade_table_requires_orders(capsys):
    run_cli(capsys, "pade-table", expect=2)


def test_pade_table_writes_reusable_file(capsys, tmp_path):
    table = tmp_path / "coeffs.txt"
    run_cli(capsys, "pade-table", "--n", "2", "--n", "1",
            "--table-file", str(table))
    stored = read_table_file(table)
    assert set(stored) == {1, 2}
    assert sig3(stored[2].c0) == 1.50e1


# --- nmin and symbols ---------------------------------------------------------------------

def test_nmin_benchmark_geometry(capsys):
    out = run_cli(capsys, "nmin", "--length", "1", "--subdomains", "8",
                  "--wavenumber", "157.085")
    _, rows = csv_rows(out.out)
    assert rows[0]["n_min"] == "44"
    assert math.isclose(float(rows[0]["l_ij"]), 0.875)


def test_symbols_grid_includes_cutoff(capsys):
    out = run_cli(capsys, "symbols", "--wavenumber", "9", "--operator", "dtn-c",
                  "--operator", "oo0-u", "--points", "9")
    header, rows = csv_rows(out.out)
    assert header == ["s", "s_over_k", "re", "im", "branch", "operator"]
    cutoff = [r for r in rows if r["branch"] == "cutoff"]
    assert len(cutoff) == 2  # one per operator, at s = k exactly
    assert all(float(r["s_over_k"]) == 1.0 for r in cutoff)
    dtn_cut = next(r for r in cutoff if r["operator"] == "dtn-c")
    assert math.isclose(float(dtn_cut["re"]), 2.0)  # 1/l at l = 1/2


# --- radius ---------------------------------------------------------------------------------

def test_radius_exact_operator_all_zero(capsys):
    out = run_cli(capsys, "radius", *K9, "--operator", "dtn-c")
    header, rows = csv_rows(out.out)
    assert header == ["s", "s_over_k", "rho_abs", "branch", "operator"]
    assert len(rows) == 4
    assert all(r["rho_abs"] == "0" for r in rows)


def test_radius_max_over_modes_reduction(capsys):
    out = run_cli(capsys, "radius", *K9, "--operator", "oo0-u",
                  "--operator", "dtn-c", "--max-over-modes")
    _, rows = csv_rows(out.out)
    assert [r["operator"] for r in rows] == ["oo0-u", "dtn-c"]
    assert math.isclose(float(rows[0]["rho_abs"]), 1.0)
    assert float(rows[1]["rho_abs"]) == 0.0


def test_radius_with_overlap_shrinks_evanescent(capsys):
    flat = run_cli(capsys, "radius", *K9, "--operator", "oo0-u")
    wide = run_cli(capsys, "radius", *K9, "--operator", "oo0-u",
                   "--overlap", "0.01")
    _, rows0 = csv_rows(flat.out)
    _, rows1 = csv_rows(wide.out)
    for r0, r1 in zip(rows0, rows1):
        if r0["branch"] == "evanescent":
            assert float(r1["rho_abs"]) < float(r0["rho_abs"])


# --- run --------------------------------------------------------------------------------------

def test_run_exact_operator_summary(capsys):
    out = run_cli(capsys, "run", *K9, "--operator", "dtn-c", "--tol", "1e-10")
    header, rows = csv_rows(out.out)
    assert header == ["iter", "relative_residual", "operator"]
    assert rows[0]["iter"] == "0" and rows[0]["relative_residual"] == "1"
    # the zero-incoming right-hand side is already the fixed point for the
    # exact operator, so GMRES needs a single step: the two-sweep nilpotency
    # bound is an upper bound and this right-hand side saturates the shortcut
    assert len(rows) <= 3
    assert float(rows[-1]["relative_residual"]) <= 1e-10
    summary = out.err.strip().splitlines()[-1]
    assert "operator=dtn-c" in summary and "D=2" in summary
    assert "converged=yes" in summary
    error = float(summary.split("error_l2=")[1].split()[0])
    assert error <= 1e-10


def test_run_trivial_tolerance(capsys):
    out = run_cli(capsys, "run", *K9, "--operator", "dtn-c", "--tol", "1")
    _, rows = csv_rows(out.out)
    assert len(rows) == 1
    assert rows[0]["iter"] == "0"
    assert "iterations=0" in out.err and "converged=yes" in out.err


def test_run_benchmark_operator_comparison(capsys):
    out = run_cli(capsys, "run", "--wavenumber", "157.085",
                  "--operator", "pade-c:32", "--operator", "pade-u:32",
                  "--tol", "1e-6")
    counts = {}
    errors = {}
    for line in out.err.strip().splitlines():
        name = line.split("operator=")[1].split()[0]
        counts[name] = int(line.split("iterations=")[1].split()[0])
        errors[name] = float(line.split("error_l2=")[1].split()[0])
        assert "converged=yes" in line
    assert errors["pade-c:32"] <= 1e-5
    assert counts["pade-c:32"] < counts["pade-u:32"]


# --- sweeps ------------------------------------------------------------------------------------

def test_sweep_d_rows_in_input_order(capsys):
    out = run_cli(capsys, "sweep-d", *K9, "--operator", "pade-c:8",
                  "--operator", "oo0-c", "--d", "2", "--d", "4", "--tol", "1e-8")
    header, rows = csv_rows(out.out)
    assert header == ["D", "operator", "iterations"]
    assert [(r["D"], r["operator"]) for r in rows] == [
        ("2", "pade-c:8"), ("2", "oo0-c"), ("4", "pade-c:8"), ("4", "oo0-c")]
    assert all(r["iterations"].isdigit() for r in rows)
    assert int(rows[0]["iterations"]) <= int(rows[2]["iterations"])


def test_sweep_d_requires_values(capsys):
    run_cli(capsys, "sweep-d", *K9, "--operator", "dtn-c", expect=2)


def test_sweep_k_single_ratio(capsys):
    out = run_cli(capsys, "sweep-k", "--operator", "pade-c:16",
                  "--operator", "dtn-c", "--ratio", "3.0009")
    header, rows = csv_rows(out.out)
    assert header == ["l_over_lambda", "operator", "iterations"]
    assert len(rows) == 2
    assert {r["operator"] for r in rows} == {"pade-c:16", "dtn-c"}


def test_sweep_k_resonant_cell_is_na(capsys):
    resonant = math.sqrt(2.0)  # k = 2*pi*sqrt(2) puts mode 1 on a cavity eigenvalue
    with pytest.warns(UserWarning):
        out = run_cli(capsys, "sweep-k", "--operator", "dtn-c",
                      "--ratio", "3.0009", "--ratio", str(resonant))
    _, rows = csv_rows(out.out)
    assert rows[0]["iterations"].isdigit()
    assert rows[1]["iterations"] == "NA"


# --- spectrum -----------------------------------------------------------------------------------

def test_spectrum_csv_contract(capsys):
    out = run_cli(capsys, "spectrum", *K9, "--operator", "dtn-c")
    header, rows = csv_rows(out.out)
    assert header == ["mode_index", "re", "im", "operator", "D"]
    assert len(rows) == 8
    assert {r["mode_index"] for r in rows} == {"1", "2", "3", "4"}
    for r in rows:
        assert abs(float(r["re"]) - 1.0) <= 1e-8
        assert abs(float(r["im"])) <= 1e-8
        assert r["D"] == "2"


# --- config files, determinism, exit codes ------------------------------------------------------

def test_config_file_with_flag_override(capsys, tmp_path):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text(
        "# benchmark setup\n"
        "wavenumber = 9.0\n"
        "height = 0.5\n"
        "excitation-modes = 2\n"
        "max-modes = 4\n"
        "operators = dtn-c, pade-c:8\n"
        "tol = 1e-10\n")
    out = run_cli(capsys, "run", "--config", str(cfg))
    _, rows = csv_rows(out.out)
    assert {r["operator"] for r in rows} == {"dtn-c", "pade-c:8"}
    # flags override the file: swap the operator list
    out = run_cli(capsys, "run", "--config", str(cfg), "--operator", "oo0-u",
                  "--tol", "1e-2")
    _, rows = csv_rows(out.out)
    assert {r["operator"] for r in rows} == {"oo0-u"}


def test_config_file_rejects_unknown_keys(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("wobble = 3\n")
    out = run_cli(capsys, "run", "--config", str(cfg), expect=2)
    assert "unknown key" in out.err


def test_config_file_missing(capsys):
    out = run_cli(capsys, "run", "--config", "/nonexistent/exp.cfg", expect=2)
    assert "cannot read" in out.err


def test_identical_invocations_identical_bytes(capsys, tmp_path):
    argv = ["spectrum", *K9, "--operator", "oo0-u", "--operator", "pade-c:8"]
    first = tmp_path / "a.csv"
    second = tmp_path / "b.csv"
    run_cli(capsys, *argv, "-o", str(first))
    run_cli(capsys, *argv, "-o", str(second))
    assert first.read_bytes() == second.read_bytes()
    run_cli(capsys, *argv)
    assert capsys.readouterr() == ("", "")  # already consumed by run_cli


def test_output_file_matches_stdout(capsys, tmp_path):
    path = tmp_path / "radius.csv"
    to_stdout = run_cli(capsys, "radius", *K9, "--operator", "oo0-c")
    run_cli(capsys, "radius", *K9, "--operator", "oo0-c", "-o", str(path))
    assert path.read_text() == to_stdout.out


def test_exit_codes(capsys):
    run_cli(capsys, "no-such-command", expect=2)
    run_cli(capsys, "run", *K9, expect=2)  # operator missing
    resonant_k = str(math.sqrt((2 * math.pi) ** 2 + math.pi ** 2))
    out = run_cli(capsys, "run", "--wavenumber", resonant_k,
                  "--excitation-modes", "1", "--operator", "dtn-c", expect=3)
    assert "numerical failure" in out.err
    assert "m=1" in out.err  # offending mode named


def test_help_exits_clean(capsys):
    assert main(["--help"]) == 0
    assert main(["run", "--help"]) == 0
    capsys.readouterr()
