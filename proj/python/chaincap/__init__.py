"""Blockchain capacity simulation and scenario suitability assessment."""

import json
import os

from . import _core
from ._core import (
    CalibrationError,
    CampaignError,
    ClusterConfig,
    ConfigError,
    ConflictError,
    ContractViolation,
    DomainError,
    Error,
    InputError,
    ParseError,
    __version__,
    arrival_times,
    default_cluster,
    find_max_lambda,
    interarrivals,
    lambda_read,
    lambda_write,
    run_cli,
)

__all__ = [
    "CalibrationError", "CampaignError", "ClusterConfig", "ConfigError", "ConflictError",
    "ContractViolation", "DomainError", "Error", "InputError", "ParseError", "__version__",
    "arrival_times", "assess", "default_cluster", "find_capacity", "find_max_lambda",
    "interarrivals", "lambda_read", "lambda_write", "run_cli", "scenarios", "simulate",
    "trial", "workload",
]


def _overrides_text(overrides):
    if overrides is None:
        return ""
    if os.path.exists(overrides):
        with open(overrides, encoding="utf-8") as f:
            return f.read()
    return overrides


def scenarios(overrides=None):
    """Scenario catalog as a list of dicts; `overrides` is a path or document text."""
    return json.loads(_core._scenarios_json(_overrides_text(overrides)))


def workload(scenario, eta, use_case=None, overrides=None):
    """Read/write arrival rates for a scenario, aggregated unless `use_case` is given."""
    return json.loads(
        _core._workload_json(scenario, eta, use_case or "", _overrides_text(overrides)))


def simulate(cluster=None, kind="write", rate=1000.0, duration=60.0, seed=1,
             arrival="poisson", payload=256):
    """One simulation run; returns per-window metrics and run totals."""
    cluster = cluster or default_cluster()
    return json.loads(
        _core._simulate_json(cluster, kind, rate, duration, seed, arrival, payload))


def trial(cluster=None, kind="write", rate=1000.0, duration=60.0, seed=1, arrival="poisson"):
    """Post-warm-up means of one run and whether it reached steady state."""
    cluster = cluster or default_cluster()
    return json.loads(_core._trial_json(cluster, kind, rate, duration, seed, arrival))


def find_capacity(cluster=None, arrival="poisson", tolerance=0.01, duration=60.0, seed=1):
    """Maximum steady read and write rates, as a capacity-file dict."""
    cluster = cluster or default_cluster()
    return json.loads(_core._capacity_json(cluster, arrival, tolerance, duration, seed))


def assess(scenario, capacity, eta=None, overrides=None):
    """Methodology report for one scenario against a capacity dict or capacity file path."""
    if isinstance(capacity, (str, os.PathLike)):
        with open(capacity, encoding="utf-8") as f:
            capacity = json.load(f)
    return json.loads(
        _core._assess_json(scenario, json.dumps(capacity), eta, _overrides_text(overrides)))
