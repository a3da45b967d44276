"""Fixtures, classifiers and bound-checking suites built on the core modules."""

from .classify import ErrorReport, ExperimentConfig, run_directional_experiment
from .verify import SUITES, SuiteReport, verify_theorem_suite

__all__ = ["SUITES", "ErrorReport", "ExperimentConfig", "SuiteReport", "run_directional_experiment",
           "verify_theorem_suite"]
