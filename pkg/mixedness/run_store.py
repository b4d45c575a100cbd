#!/usr/bin/env python3
"""
Run Store for persisting experiment results to flat files.

Writes one CSV per run:

    # mixedness 1.0.0
    # experiment = fig2
    # <field> = <value>        (every resolved config field)
    omega_over_gamma,theta,gamma_t,...
    0.10000000000000001,0.78539816339744828,0,...

Floats carry 17 significant digits, so identical configs give byte-identical
files and every value round-trips. An optional gnuplot script can be written
next to the CSV.
"""

import logging
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path
from typing import List, Optional, Sequence

import pandas as pd

from mixedness.config import ExperimentConfig, format_value

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


@dataclass
class ResultTable:
    """Column names plus ordered data rows of one run."""

    columns: List[str]
    rows: List[Sequence] = field(default_factory=list)

    def frame(self) -> pd.DataFrame:
        return pd.DataFrame(list(self.rows), columns=self.columns)

    def column(self, name: str) -> List:
        i = self.columns.index(name)
        return [row[i] for row in self.rows]


@dataclass(frozen=True)
class PlotSpec:
    """
    How to draw a result table.

    Attributes:
        x: Abscissa column.
        y: Ordinate columns, one curve each.
        groups: Columns whose distinct values split the rows into panels/curves.
        surface: Draw a surface over (x, surface_y) instead of curves.
        surface_y: Second coordinate of a surface plot.
    """

    x: str
    y: Sequence[str]
    groups: Sequence[str] = ()
    surface: bool = False
    surface_y: str = ""


class RunStore:
    """
    Writes result tables under an output directory.

    Handles the metadata header, the column row, the data rows and the
    optional gnuplot script.
    """

    def __init__(self, out_dir: str = "."):
        """
        Initialize run store.

        Args:
            out_dir: Directory used for relative output paths
        """
        self.out_dir = Path(out_dir)

    def resolve_path(self, out: str, experiment: str) -> Path:
        path = Path(out) if out else Path(f"{experiment}.csv")
        if not path.is_absolute():
            path = self.out_dir / path
        return path

    @staticmethod
    def header_lines(config: ExperimentConfig) -> List[str]:
        from mixedness import __version__

        lines = [f"# mixedness {__version__}"]
        lines += [f"# {name} = {value}" for name, value in config.header_items()]
        return lines

    def save(self, config: ExperimentConfig, table: ResultTable) -> Path:
        """
        Write the table as CSV.

        Args:
            config: Resolved config, recorded in the header
            table: Columns and rows

        Returns:
            Path of the written file

        Raises:
            OSError: If the file cannot be written
        """
        path = self.resolve_path(config.out, config.experiment)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="") as handle:
            handle.write("\n".join(self.header_lines(config)) + "\n")
            table.frame().to_csv(handle, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        logger.info(f"wrote {len(table.rows)} rows to {path}")
        return path

    def save_plot_script(self, csv_path: Path, table: ResultTable, spec: PlotSpec,
                         title: Optional[str] = None) -> Path:
        """Write ``<csv stem>.gp`` drawing the table with gnuplot."""
        script_path = csv_path.with_suffix(".gp")
        script_path.write_text(render_gnuplot(csv_path.name, table, spec, title), encoding="utf-8")
        logger.info(f"wrote plot script {script_path}")
        return script_path


def load_table(path: str) -> pd.DataFrame:
    """Read a CSV written by RunStore back into a DataFrame."""
    return pd.read_csv(path, comment="#")


def _distinct(values: List) -> List:
    seen = []
    for v in values:
        if v not in seen:
            seen.append(v)
    return seen


def render_gnuplot(csv_name: str, table: ResultTable, spec: PlotSpec, title: Optional[str] = None) -> str:
    """
    Gnuplot script for one result table.

    Group values are matched exactly against the CSV text, which holds the
    same 17-digit representation.
    """
    lines = [
        "# gnuplot script generated by mixedness",
        "set datafile separator ','",
        "set datafile commentschars '#'",
        "set datafile columnheaders",
        "set key outside right",
        f"set xlabel '{spec.x}'",
    ]
    if title:
        lines.append(f"set title '{title}'")

    group_values = [_distinct(table.column(g)) for g in spec.groups]
    clauses = []
    for combo in product(*group_values) if spec.groups else [()]:
        condition = " && ".join(f"column('{g}')=={format_value(v)}" for g, v in zip(spec.groups, combo))
        label = ", ".join(f"{g}={format_value(v)}" for g, v in zip(spec.groups, combo))
        for y in spec.y:
            x_expr = f"({condition} ? column('{spec.x}') : 1/0)" if condition else f"(column('{spec.x}'))"
            curve = f"{y} ({label})" if label else y
            if spec.surface:
                clauses.append(f"'{csv_name}' using {x_expr}:(column('{spec.surface_y}')):(column('{y}')) "
                               f"with points title '{curve}'")
            else:
                clauses.append(f"'{csv_name}' using {x_expr}:(column('{y}')) with lines title '{curve}'")

    command = "splot" if spec.surface else "plot"
    if spec.surface:
        lines.append(f"set ylabel '{spec.surface_y}'")
    lines.append(f"{command} " + ", \\\n     ".join(clauses))
    lines.append("pause -1")
    return "\n".join(lines) + "\n"
