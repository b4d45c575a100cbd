from pathlib import Path

import pytest

from mixedness import __version__
from mixedness.config import resolve_config
from mixedness.run_store import PlotSpec, ResultTable, RunStore, load_table, render_gnuplot


@pytest.fixture
def table():
    return ResultTable(["x", "g", "y"], [(0.0, 1, 0.1), (1.0, 1, 0.2), (0.0, 2, 0.3), (1.0, 2, 0.4)])


def test_default_path_is_experiment_name(tmp_path):
    store = RunStore(out_dir=str(tmp_path))
    assert store.resolve_path("", "fig2") == tmp_path / "fig2.csv"
    assert store.resolve_path("sub/a.csv", "fig2") == tmp_path / "sub" / "a.csv"
    absolute = tmp_path / "elsewhere.csv"
    assert store.resolve_path(str(absolute), "fig2") == absolute


def test_save_writes_header_and_rows(store, table, tmp_path):
    config = resolve_config("fig2", None, {"steps": 10, "out": "nested/run.csv"})
    path = store.save(config, table)
    assert path == tmp_path / "nested" / "run.csv"

    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == f"# mixedness {__version__}"
    assert lines[1] == "# experiment = fig2"
    assert "# steps = 10" in lines
    assert not any(line.startswith("# out =") for line in lines)
    assert lines[len(config.header_items()) + 1] == "x,g,y"
    assert lines[-1] == "1,2,0.40000000000000002"

    frame = load_table(str(path))
    assert list(frame.columns) == ["x", "g", "y"]
    assert frame["y"].tolist() == [0.1, 0.2, 0.3, 0.4]


def test_identical_configs_give_identical_bytes(store, table):
    config = resolve_config("fig2", None, {"out": "a.csv"})
    first = store.save(config, table).read_bytes()
    config.out = "b.csv"
    assert store.save(config, table).read_bytes() == first


def test_gnuplot_script_filters_groups(table):
    script = render_gnuplot("run.csv", table, PlotSpec(x="x", y=["y"], groups=["g"]), title="demo")
    assert "set title 'demo'" in script
    assert "column('g')==1" in script and "column('g')==2" in script
    assert script.count("with lines") == 2
    assert script.rstrip().endswith("pause -1")


def test_surface_plot_uses_splot(table):
    script = render_gnuplot("run.csv", table, PlotSpec(x="x", y=["y"], surface=True, surface_y="g"))
    assert "splot 'run.csv'" in script
    assert "set ylabel 'g'" in script


def test_plot_script_sits_next_to_csv(store, table, tmp_path):
    csv_path = tmp_path / "run.csv"
    script = store.save_plot_script(csv_path, table, PlotSpec(x="x", y=["y"]))
    assert script == Path(tmp_path / "run.gp")
    assert "'run.csv'" in script.read_text()
