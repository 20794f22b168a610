"""Experiment metrics, staged pipeline, and report building."""

from .metrics import (EmptyOutputs, MetricsReport, NO_TESTS_CATEGORY,
                      evasion_success_rate, evasion_verdicts, render_report,
                      resolve_workers, transformation_success_rate,
                      transformation_verdicts, WORKERS_ENV)
from .pipeline import (ConfigError, StageFailure, build_report, parse_config,
                       run_experiment)

__all__ = [
    "ConfigError",
    "EmptyOutputs",
    "MetricsReport",
    "NO_TESTS_CATEGORY",
    "StageFailure",
    "WORKERS_ENV",
    "build_report",
    "evasion_success_rate",
    "evasion_verdicts",
    "parse_config",
    "render_report",
    "resolve_workers",
    "run_experiment",
    "transformation_success_rate",
    "transformation_verdicts",
]
