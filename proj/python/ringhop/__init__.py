"""Energy-optimal hop planning for ring-structured LPWAN uplinks.

Scenarios and results are plain dicts in the same JSON layout the
``ringhop`` command-line tool reads and writes.
"""

import json as _json

from ._core import (
    GuardError,
    InfeasibleError,
    IoError,
    ParseError,
    RinghopError,
    ValidationError,
    hop_combination_count,
    hop_combinations,
    max_range,
    path_loss,
    payloads,
    ring_distances,
    transceivers,
)
from . import _core

__all__ = [
    "GuardError",
    "InfeasibleError",
    "IoError",
    "ParseError",
    "RinghopError",
    "ValidationError",
    "catalog",
    "hop_combination_count",
    "hop_combinations",
    "load_scenario",
    "max_range",
    "path_loss",
    "payloads",
    "ring_distances",
    "run",
    "run_csv",
    "sweep",
    "transceivers",
]


def catalog():
    """Built-in transceiver tables as a list of dicts."""
    return _json.loads(_core.catalog_json())


def load_scenario(path):
    """Read and validate a scenario file; returns the fully populated dict."""
    return _json.loads(_core.load_scenario_json(str(path)))


def run(scenario, *, exhaustive=False, threads=1, override_guards=False):
    """Run every requested routing model; returns the result bundle as a dict."""
    return _json.loads(
        _core.run_json(_json.dumps(scenario), exhaustive, threads, override_guards)
    )


def run_csv(scenario, *, threads=1):
    return _core.run_csv(_json.dumps(scenario), threads)


def sweep(spec, *, threads=1):
    """One dict per (value, transceiver) grid point."""
    return _json.loads(_core.sweep_json(_json.dumps(spec), threads))
