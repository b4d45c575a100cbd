#!/usr/bin/env python3
"""
Base experiment class defining the interface of the figure runners.
Every runner turns a resolved ExperimentConfig into one ordered result table.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from mixedness.config import ExperimentConfig
from mixedness.run_store import PlotSpec, ResultTable, RunStore
from mixedness.sweep import SweepExecutor
from mixedness.templates import get_figure_template

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunResult:
    """Files written by one run plus the table they hold."""

    csv_path: Path
    table: ResultTable
    plot_path: Optional[Path] = None


class BaseExperiment(ABC):
    """
    Abstract base class for experiment runners.
    All figure and custom runners must inherit from this class.
    """

    def __init__(self, config: ExperimentConfig, store: Optional[RunStore] = None,
                 executor: Optional[SweepExecutor] = None):
        """
        Initialize experiment.

        Args:
            config: Validated experiment configuration
            store: Where results are written (defaults to the working directory)
            executor: Sweep executor (defaults to MIXEDNESS_WORKERS threads)
        """
        self.config = config
        self.store = store or RunStore()
        self.executor = executor or SweepExecutor()
        self.template = get_figure_template(config.experiment)

    @abstractmethod
    def build_table(self) -> ResultTable:
        """
        Evaluate every sweep point.

        Returns:
            Ordered result table
        """
        pass

    @abstractmethod
    def plot_spec(self) -> PlotSpec:
        """Describe how the table is drawn."""
        pass

    def time_grid(self) -> np.ndarray:
        """Uniform grid over [0, t_max] with ``steps`` points."""
        return np.linspace(0.0, self.config.t_max, self.config.steps)

    def run(self) -> RunResult:
        """
        Build the table and write it, plus a plot script when requested.

        Returns:
            RunResult with the written paths
        """
        logger.info(f"running {self.config.experiment} ({type(self).__name__})")
        table = self.build_table()
        csv_path = self.store.save(self.config, table)
        plot_path = None
        if self.config.emit_plot:
            plot_path = self.store.save_plot_script(csv_path, table, self.plot_spec(),
                                                    title=self.template.get("name"))
        return RunResult(csv_path, table, plot_path)
