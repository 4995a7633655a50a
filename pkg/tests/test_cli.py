import subprocess
import sys
from pathlib import Path

import pandas as pd
import pytest

import run

ROOT = Path(__file__).resolve().parents[1]


def test_poly_smoke(tmp_path):
    output = tmp_path / "p3.csv"
    result = subprocess.run(
        [sys.executable, "run.py", "poly", "--n", "3", "--output", str(output)],
        check=True,
        cwd=ROOT,
        capture_output=True,
        text=True,
    )
    assert "-e^6 + 6 x e^4 - 5 x^2 e^2 + x^3" in result.stdout
    table = pd.read_csv(output)
    assert list(table["coefficient"]) == [-1, 6, -5, 1]


def test_missing_required_flag_is_a_usage_error(tmp_path):
    result = subprocess.run(
        [sys.executable, "run.py", "spectrum", "--n", "1", "--epsilon", "0.5", "--output", str(tmp_path / "s.csv")],
        cwd=ROOT,
        capture_output=True,
        text=True,
    )
    assert result.returncode == 2
    assert "omega" in result.stderr


def test_spectrum_output_is_deterministic(tmp_path, capsys):
    args = ["spectrum", "--n", "1", "--omega", "1", "--gamma", "0.1", "--epsilon", "0.5"]
    assert run.main(args + ["--output", str(tmp_path / "a.csv")]) == 0
    assert run.main(args + ["--output", str(tmp_path / "b.csv")]) == 0
    assert "unbroken" in capsys.readouterr().out
    first = (tmp_path / "a.csv").read_bytes()
    assert first == (tmp_path / "b.csv").read_bytes()
    assert first.count(b"\n") == 5
    assert b"\r" not in first


def test_broken_spectrum(tmp_path, capsys):
    args = ["spectrum", "--n", "4", "--omega", "1", "--gamma", "0.1", "--epsilon", "0.3"]
    assert run.main(args + ["--output", str(tmp_path / "s.csv")]) == 0
    out = capsys.readouterr().out
    assert "broken" in out.replace("unbroken", "")
    assert "unbroken epsilon interval: empty" in out


def test_planar_five_regions(tmp_path, capsys):
    args = ["planar", "--omega", "0.8", "--gamma", "0.10", "--eps1", "0.10", "--eps2-max", "0.70"]
    assert run.main(args + ["--output", str(tmp_path / "planar.csv")]) == 0
    assert "regions: 5" in capsys.readouterr().out


def test_saved_config_reproduces_the_run(tmp_path):
    saved = tmp_path / "scan.json"
    args = ["scan", "--n", "2", "--points", "40", "--refine-tol", "1e-8"]
    assert run.main(args + ["--output", str(tmp_path / "a.csv"), "--save-config", str(saved)]) == 0
    assert run.main(["scan", "--config", str(saved), "--output", str(tmp_path / "b.csv")]) == 0
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    assert b"# start,end,phase,refined" in (tmp_path / "a.csv").read_bytes()


def test_json_output(tmp_path):
    output = tmp_path / "impurity.json"
    assert run.main(["impurity", "--points", "101", "--format", "json", "--output", str(output)]) == 0
    text = output.read_text()
    assert '"checks"' in text
    assert text.endswith("\n")


def test_simulate_gauge(tmp_path, capsys):
    output = tmp_path / "sim.csv"
    args = ["simulate", "--t-end", "5", "--dt", "0.01", "--rep", "gauge", "--gauge-scale", "0.5", "--save-every", "10"]
    assert run.main(args + ["--seed", "4", "--output", str(output)]) == 0
    out = capsys.readouterr().out
    assert "energy drift" in out
    assert "peaks: not extracted" in out
    assert len(pd.read_csv(output)) == 51


def test_overflow_is_a_numerical_failure(tmp_path):
    assert run.main(["poly", "--n", "200", "--output", str(tmp_path / "p.csv")]) == 3


def test_invalid_parameter_exit_code(tmp_path):
    assert run.main(["impurity", "--Omega", "3", "--output", str(tmp_path / "i.csv")]) == 2


@pytest.mark.parametrize(
    "args",
    [
        ["planar", "--mode", "bogus"],
        ["simulate", "--rep", "bogus"],
        ["spectrum", "--n", "1", "--omega", "1", "--epsilon", "0.5", "--profile", "bogus"],
        ["spectrum", "--n", "1", "--omega", "1", "--epsilon", "0.5", "--parity", "bogus"],
    ],
)
def test_unknown_option_value_exit_code(tmp_path, args):
    assert run.main(args + ["--output", str(tmp_path / "out.csv")]) == 2
    assert not (tmp_path / "out.csv").exists()


def test_planar_diagram_window(tmp_path, capsys):
    output = tmp_path / "diagram.csv"
    args = ["planar", "--mode", "diagram", "--omega", "0.9", "--resolution", "32"]
    args += ["--eps1-min", "0.1", "--eps1-max", "0.5", "--eps2-min", "0.2", "--eps2-max", "0.4"]
    assert run.main(args + ["--output", str(output)]) == 0
    assert "unbroken cells" in capsys.readouterr().out
    table = pd.read_csv(output)
    assert len(table) == 32 * 32
    assert table["eps1"].min() == pytest.approx(0.1)
    assert table["eps1"].max() == pytest.approx(0.5)
    assert table["eps2"].min() == pytest.approx(0.2)
    assert table["eps2"].max() == pytest.approx(0.4)


def test_unwritable_output_is_an_io_error(tmp_path):
    blocker = tmp_path / "file.txt"
    blocker.write_text("")
    assert run.main(["poly", "--n", "2", "--output", str(blocker / "p.csv")]) == 4


def test_config_for_another_command_rejected(tmp_path):
    path = tmp_path / "poly.json"
    path.write_text('{"command": "poly", "params": {"n": 2}}')
    assert run.main(["scan", "--config", str(path)]) == 2


def test_help_lists_commands():
    with pytest.raises(SystemExit) as info:
        run.main(["--help"])
    assert info.value.code == 0
