"""Experiment orchestration: configuration, sweeps, analytic comparison, plots and CLI."""

from .analytic_compare import run_analytic_compare
from .config import ExperimentConfig
from .plots import PlotKind, emit_plots
from .sweep import SweepResult, run_sweep

__all__ = ["ExperimentConfig", "PlotKind", "SweepResult", "emit_plots", "run_analytic_compare", "run_sweep"]
