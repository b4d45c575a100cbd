import numpy as np
import pytest

from mixedness import __version__
from mixedness.cli import EXIT_CONFIG, EXIT_FAILURE, EXIT_OK, build_parser, collect_overrides, main
from mixedness.run_store import load_table


@pytest.fixture(autouse=True)
def quiet_environment(monkeypatch, tmp_path):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("MIXEDNESS_WORKERS", raising=False)
    monkeypatch.delenv("MIXEDNESS_LOG_LEVEL", raising=False)


def test_list_prints_every_experiment(capsys):
    assert main(["list"]) == EXIT_OK
    out = capsys.readouterr().out
    for experiment in ("fig1", "fig5", "fig7", "custom"):
        assert f"• {experiment}:" in out


def test_version(capsys):
    with pytest.raises(SystemExit):
        main(["--version"])
    assert __version__ in capsys.readouterr().out


def test_field_flags_and_params_become_overrides():
    args = build_parser().parse_args(["fig2", "--steps", "12", "--param", "r=0.5", "--emit-plot"])
    overrides = collect_overrides(args)
    assert overrides == {"r": "0.5", "steps": "12", "emit_plot": True}


def test_run_writes_csv(tmp_path, capsys):
    out = tmp_path / "results" / "fig2.csv"
    code = main(["fig2", "--steps", "8", "--omega-values", "1,10", "--theta-values", "pi/4",
                 "--out", str(out), "--workers", "2"])
    assert code == EXIT_OK
    assert "✓ fig2: 16 rows" in capsys.readouterr().out
    frame = load_table(str(out))
    assert len(frame) == 16
    assert sorted(frame["omega_over_gamma"].unique()) == [1.0, 10.0]


def test_default_output_goes_to_working_directory(tmp_path):
    assert main(["fig6", "--mesh", "3"]) == EXIT_OK
    assert (tmp_path / "fig6.csv").is_file()


def test_config_file_and_plot(tmp_path, capsys):
    config = tmp_path / "run.toml"
    config.write_text('experiment = "fig1"\nmesh = 16\nomega_values = [1.0]\n')
    assert main(["fig1", "--config", str(config), "--emit-plot"]) == EXIT_OK
    assert (tmp_path / "fig1.gp").is_file()
    assert "plot script" in capsys.readouterr().out


@pytest.mark.parametrize("argv", [
    ["fig9"],
    ["fig2", "--steps", "many"],
    ["fig2", "--r", "2"],
    ["fig2", "--param", "nonsense"],
    ["fig2", "--param", "radius=1"],
    ["fig2", "--config", "missing.json"],
    ["fig2", "--log-level", "chatty"],
])
def test_configuration_errors_exit_one(argv, capsys):
    assert main(argv) == EXIT_CONFIG
    assert "✗" in capsys.readouterr().err


def test_numerical_failures_exit_two(tmp_path, capsys):
    np.save(tmp_path / "rho.npy", np.eye(4) / 4)
    np.save(tmp_path / "h.npy", np.eye(2))
    code = main(["custom", "--model", "matrix", "--state-file", "rho.npy", "--hamiltonian-file", "h.npy",
                 "--steps", "3"])
    assert code == EXIT_FAILURE
    assert "DimensionMismatchError" in capsys.readouterr().err
