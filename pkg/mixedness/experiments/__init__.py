#!/usr/bin/env python3
"""
Experiment runners for the figure reproductions and custom runs.

Each ``run_*`` function takes a resolved ExperimentConfig, writes the CSV
(and the plot script when ``emit_plot`` is set) and returns a RunResult.
"""

from functools import partial
from typing import Optional

from mixedness.config import ExperimentConfig
from mixedness.errors import ConfigError
from mixedness.experiments.base_experiment import BaseExperiment, RunResult
from mixedness.experiments.custom import MatrixExperiment, custom_experiment
from mixedness.experiments.spin_chain import SpinChainExperiment
from mixedness.experiments.two_level import (
    DerivativeComparisonExperiment,
    EntropyCurveExperiment,
    TimescaleMapExperiment,
)
from mixedness.run_store import RunStore
from mixedness.sweep import SweepExecutor

EXPERIMENTS = {
    "fig1": TimescaleMapExperiment,
    "fig2": EntropyCurveExperiment,
    "fig3": SpinChainExperiment,
    "fig4": SpinChainExperiment,
    "fig5": SpinChainExperiment,
    "fig6": partial(DerivativeComparisonExperiment, order=1),
    "fig7": partial(DerivativeComparisonExperiment, order=2),
    "custom": custom_experiment,
}


def get_experiment(config: ExperimentConfig, store: Optional[RunStore] = None,
                   executor: Optional[SweepExecutor] = None) -> BaseExperiment:
    """
    Instantiate the runner for ``config.experiment``.

    Raises:
        ConfigError: For an unknown experiment id
    """
    factory = EXPERIMENTS.get(config.experiment)
    if factory is None:
        raise ConfigError(f"unknown experiment '{config.experiment}'", field="experiment")
    return factory(config, store=store, executor=executor)


def _runner(experiment: str):
    def run(config: ExperimentConfig, store: Optional[RunStore] = None,
            executor: Optional[SweepExecutor] = None) -> RunResult:
        if config.experiment != experiment:
            raise ConfigError(f"config is for '{config.experiment}', not '{experiment}'", field="experiment")
        return get_experiment(config, store, executor).run()

    run.__name__ = f"run_{experiment}"
    run.__doc__ = f"Run {experiment} and write its CSV."
    return run


run_fig1 = _runner("fig1")
run_fig2 = _runner("fig2")
run_fig3 = _runner("fig3")
run_fig4 = _runner("fig4")
run_fig5 = _runner("fig5")
run_fig6 = _runner("fig6")
run_fig7 = _runner("fig7")
run_custom = _runner("custom")

__all__ = [
    'BaseExperiment',
    'RunResult',
    'TimescaleMapExperiment',
    'EntropyCurveExperiment',
    'DerivativeComparisonExperiment',
    'SpinChainExperiment',
    'MatrixExperiment',
    'EXPERIMENTS',
    'get_experiment',
    'run_fig1',
    'run_fig2',
    'run_fig3',
    'run_fig4',
    'run_fig5',
    'run_fig6',
    'run_fig7',
    'run_custom',
]
