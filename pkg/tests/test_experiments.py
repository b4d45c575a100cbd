import logging
import math
import time

import numpy as np
import pytest

from mixedness.config import ExperimentConfig, resolve_config
from mixedness.dynamics import central_derivative
from mixedness.errors import ConfigError, DimensionMismatchError
from mixedness.experiments import (
    get_experiment,
    run_custom,
    run_fig1,
    run_fig2,
    run_fig3,
    run_fig4,
    run_fig5,
    run_fig6,
    run_fig7,
)
from mixedness.experiments.spin_chain import CHAIN_COLUMNS
from mixedness.states import BlochParams
from mixedness.sweep import SweepExecutor
from mixedness.timescales import qubit_coefficients
from tests.conftest import random_generator, random_mixed_state

SERIAL = SweepExecutor(1)

# Documented in README.md (Performance)
NINE_SPIN_BUDGET_SECONDS = 180.0


def _rows(table, **conditions):
    """Rows of a result table as dicts, filtered on exact column values."""
    out = []
    for row in table.rows:
        record = dict(zip(table.columns, row))
        if all(record[name] == value for name, value in conditions.items()):
            out.append(record)
    return out


def _data_lines(path):
    return [line for line in path.read_text().splitlines() if not line.startswith("#")]


class TestTwoLevelFigures:
    def test_fig1_map_matches_closed_forms(self, store):
        config = resolve_config("fig1", None, {"mesh": 16, "omega_values": "1"})
        table = run_fig1(config, store, SERIAL).table
        assert table.columns == ["omega_over_gamma", "r", "theta", "t1_inv_dimless", "t2_inv_sq_dimless"]
        assert len(table.rows) == 16 * 16
        for record in _rows(table)[::17]:
            b = BlochParams(record["r"], record["theta"], config.phi)
            assert (record["t1_inv_dimless"], record["t2_inv_sq_dimless"]) == qubit_coefficients(b, 1.0)

    def test_fig1_sweep_does_not_depend_on_workers(self, store):
        config = resolve_config("fig1", None, {"mesh": 16})
        config.out = "serial.csv"
        serial = run_fig1(config, store, SweepExecutor(1)).csv_path.read_bytes()
        config.out = "threaded.csv"
        threaded = run_fig1(config, store, SweepExecutor(3)).csv_path.read_bytes()
        assert serial == threaded

    def test_fig2_curves_start_together(self, store):
        config = resolve_config("fig2", None, {"steps": 20})
        result = run_fig2(config, store, SERIAL)
        assert len(result.table.rows) == 3 * 2 * 20
        for record in _rows(result.table, gamma_t=0.0):
            for name in ("sl_lindblad", "sl_nonhermitian_exact", "sl_short_time"):
                assert record[name] == pytest.approx(1.0 - 0.25 ** 2, abs=1e-12)
        assert all(value == pytest.approx(0.9375) for value in result.table.column("sl_const"))
        assert result.csv_path.name == "fig2.csv"

    @pytest.mark.parametrize("omega, lower, upper", [(0.1, 1e-8, 1e-3), (1.0, 1e-8, 1e-3), (10.0, 1e-7, 1e-2)])
    def test_fig2_short_time_error_band(self, store, omega, lower, upper):
        config = resolve_config("fig2", None, {"omega_values": [omega], "theta_values": "pi/4"})
        table = run_fig2(config, store, SERIAL).table
        window = [r for r in _rows(table) if 0.01 <= r["gamma_t"] <= 0.1]
        errors = [abs(r["sl_nonhermitian_exact"] - r["sl_short_time"]) / abs(r["sl_nonhermitian_exact"])
                  for r in window]
        assert lower <= min(errors)
        assert max(errors) <= upper
        assert errors[-1] > errors[0]

    def test_fig2_lindblad_and_nonhermitian_differ(self, store):
        config = resolve_config("fig2", None, {"steps": 50, "omega_values": "1", "theta_values": "pi/4"})
        table = run_fig2(config, store, SERIAL).table
        last = _rows(table)[-1]
        assert abs(last["sl_lindblad"] - last["sl_nonhermitian_exact"]) > 1e-4

    def test_fig6_columns_match_first_order_formula(self, store):
        config = resolve_config("fig6", None, {"mesh": 11})
        table = run_fig6(config, store, SERIAL).table
        assert len(table.rows) == 11
        for record in _rows(table):
            assert abs(record["deriv_unitary"]) <= 1e-8
            assert abs(record["deriv_nonhermitian"] - record["timescale_formula"]) <= 1e-6

    def test_fig7_columns_match_second_order_formula(self, store):
        config = resolve_config("fig7", None, {"mesh": 11})
        assert config.fd_step == 1e-3
        table = run_fig7(config, store, SERIAL).table
        assert len(table.rows) == 3 * 11
        for record in _rows(table):
            assert abs(record["deriv_unitary"]) <= 1e-8
            assert abs(record["deriv_nonhermitian"] - record["timescale_formula"]) <= 1e-6

    def test_every_derivative_column_uses_the_stencil(self, store, monkeypatch):
        import mixedness.experiments.two_level as two_level

        calls = []

        def counting(fn, step, order):
            calls.append((step, order))
            return central_derivative(fn, step, order)

        monkeypatch.setattr(two_level, "central_derivative", counting)
        config = resolve_config("fig6", None, {"mesh": 2})
        run_fig6(config, store, SERIAL)
        assert calls == [(1e-4, 1)] * 3 * 2

    def test_plot_script_on_request(self, store):
        config = resolve_config("fig2", None, {"steps": 5, "emit_plot": True})
        result = run_fig2(config, store, SERIAL)
        assert result.plot_path is not None and result.plot_path.suffix == ".gp"
        assert "pause -1" in result.plot_path.read_text()


class TestSpinChainFigures:
    SMALL = {"spins": 4, "subsystem_sizes": "2,3", "steps": 20, "t_max": 0.1}

    def test_fig3_small_chain(self, store, caplog):
        config = resolve_config("fig3", None, self.SMALL)
        with caplog.at_level(logging.WARNING):
            table = run_fig3(config, store, SERIAL).table
        assert not [r for r in caplog.records if "closed form" in r.getMessage()]
        assert table.columns == CHAIN_COLUMNS
        assert len(table.rows) == 2 * 20
        for record in _rows(table, J_t=0.0):
            assert record["sl_exact"] == pytest.approx(record["sl_short_time"], abs=1e-12)

    @pytest.mark.slow
    def test_fig3_error_band(self, store):
        table = run_fig3(resolve_config("fig3"), store, SERIAL).table
        for k in range(2, 8):
            window = [r for r in _rows(table, k=k) if 0.01 <= r["J_t"] <= 0.1]
            errors = [abs(r["sl_exact"] - r["sl_short_time"]) / abs(r["sl_exact"]) for r in window]
            assert 1e-7 <= min(errors), k
            assert max(errors) <= 1e-2, k

    def test_fig4_hermitian_predictor_is_flat_for_one_site_environment(self, store):
        config = resolve_config("fig4", None, dict(self.SMALL, subsystem_sizes="3"))
        table = run_fig4(config, store, SERIAL).table
        assert table.columns == ["J_t", "k", "p", "sl_short_time", "sl_short_time_hermitian"]
        flat = table.column("sl_short_time_hermitian")
        assert max(flat) - min(flat) <= 1e-12

    def test_fig4_with_exact_adds_columns(self, store):
        config = resolve_config("fig4", None, dict(self.SMALL, with_exact=True))
        table = run_fig4(config, store, SERIAL).table
        assert table.columns[-2:] == ["sl_exact", "sl_exact_hermitian"]
        for record in _rows(table, J_t=0.0):
            assert record["sl_exact"] == pytest.approx(record["sl_short_time"], abs=1e-12)
            assert record["sl_exact_hermitian"] == pytest.approx(record["sl_short_time_hermitian"], abs=1e-12)

    def test_fig5_pure_input_predictors_coincide(self, store):
        config = resolve_config("fig5", None, dict(self.SMALL, subsystem_sizes="2", mixing_values="0.5,1"))
        table = run_fig5(config, store, SERIAL).table
        assert sorted(set(table.column("p"))) == [0.5, 1.0]
        for record in _rows(table, p=1.0):
            assert record["sl_short_time"] == pytest.approx(record["sl_short_time_hermitian"], abs=1e-12)


class TestCustomRuns:
    def test_two_level_model_reproduces_fig2_rows(self, store):
        overrides = {"steps": 20, "omega_values": "1", "theta_values": "pi/4"}
        figure = run_fig2(resolve_config("fig2", None, overrides), store, SERIAL)
        custom = run_custom(resolve_config("custom", None, overrides), store, SERIAL)
        assert _data_lines(custom.csv_path) == _data_lines(figure.csv_path)

        figure_header = [l for l in figure.csv_path.read_text().splitlines() if l.startswith("#")]
        custom_header = [l for l in custom.csv_path.read_text().splitlines() if l.startswith("#")]
        differing = [(a, b) for a, b in zip(figure_header, custom_header) if a != b]
        assert differing == [("# experiment = fig2", "# experiment = custom")]

    def test_spin_chain_model(self, store):
        config = resolve_config("custom", None, {"model": "spin_chain", "spins": 3, "subsystem_sizes": "1",
                                                 "steps": 5, "t_max": 0.1})
        table = run_custom(config, store, SERIAL).table
        assert table.columns == CHAIN_COLUMNS
        assert len(table.rows) == 5

    @pytest.mark.slow
    def test_nine_spin_sweep_meets_runtime_budget(self, store):
        config = resolve_config("custom", None, {
            "model": "spin_chain", "spins": 9, "subsystem_sizes": "2,5,8", "mixing_values": "0.5",
            "t_max": 0.25, "steps": 400,
        })
        start = time.perf_counter()
        table = run_custom(config, store, SERIAL).table
        elapsed = time.perf_counter() - start
        assert len(table.rows) == 3 * 400
        assert elapsed < NINE_SPIN_BUDGET_SECONDS, f"{elapsed:.1f} s"

    @pytest.mark.parametrize("stacked", [False, True])
    def test_matrix_model(self, store, rng, tmp_path, stacked):
        rho = random_mixed_state(rng, 4)
        h = random_generator(rng, 4)
        np.save(tmp_path / "rho.npy", rho.matrix)
        np.save(tmp_path / "h.npy", np.stack([h.h1, h.h2]) if stacked else h.matrix)
        config = resolve_config("custom", None, {
            "model": "matrix", "state_file": str(tmp_path / "rho.npy"),
            "hamiltonian_file": str(tmp_path / "h.npy"), "steps": 30, "t_max": 0.01,
        })
        table = run_custom(config, store, SERIAL).table
        assert table.columns == ["t", "sl_exact", "sl_short_time"]
        exact = np.array(table.column("sl_exact"))
        predicted = np.array(table.column("sl_short_time"))
        assert exact[0] == pytest.approx(predicted[0], abs=1e-12)
        assert np.max(np.abs(exact - predicted)) < 1e-4

    def test_matrix_model_on_a_marginal(self, store, rng, tmp_path):
        np.save(tmp_path / "psi.npy", rng.normal(size=4) + 1j * rng.normal(size=4))
        np.save(tmp_path / "h.npy", random_generator(rng, 4).matrix)
        config = resolve_config("custom", None, {
            "model": "matrix", "state_file": str(tmp_path / "psi.npy"),
            "hamiltonian_file": str(tmp_path / "h.npy"), "subsystem_dims": "2,2", "steps": 5, "t_max": 0.01,
        })
        table = run_custom(config, store, SERIAL).table
        exact = table.column("sl_exact")
        assert exact[0] == pytest.approx(table.column("sl_short_time")[0], abs=1e-12)

    def test_matrix_model_dimension_mismatch(self, store, rng, tmp_path):
        np.save(tmp_path / "rho.npy", random_mixed_state(rng, 4).matrix)
        np.save(tmp_path / "h.npy", random_generator(rng, 2).matrix)
        config = resolve_config("custom", None, {"model": "matrix", "state_file": str(tmp_path / "rho.npy"),
                                                 "hamiltonian_file": str(tmp_path / "h.npy")})
        with pytest.raises(DimensionMismatchError):
            run_custom(config, store, SERIAL)

    def test_missing_matrix_file(self, store, tmp_path):
        config = resolve_config("custom", None, {"model": "matrix", "state_file": str(tmp_path / "none.npy"),
                                                 "hamiltonian_file": str(tmp_path / "none.npy")})
        with pytest.raises(ConfigError):
            run_custom(config, store, SERIAL)


def test_runner_refuses_another_experiment(store):
    with pytest.raises(ConfigError):
        run_fig2(resolve_config("fig3", None, {"spins": 3, "subsystem_sizes": "1"}), store, SERIAL)
    with pytest.raises(ConfigError):
        get_experiment(ExperimentConfig(experiment="fig9"))


def test_fig2_output_is_reproducible(store):
    config = resolve_config("fig2", None, {"steps": 10, "omega_values": "10", "out": "a.csv"})
    first = run_fig2(config, store, SERIAL).csv_path.read_bytes()
    config.out = "b.csv"
    assert run_fig2(config, store, SERIAL).csv_path.read_bytes() == first
    assert not math.isnan(float(first.decode().splitlines()[-1].split(",")[-1]))
