"""Experiment runner and command line interface."""
from .config import ConfigError, ExperimentConfig
from .experiments import Report, build_experiment
from .records import TrialRecord, derive_seed
from .runner import replay_trial, run_experiment, save_run
