"""Simulation and verification lab for the elephant random walk with stops."""

__version__ = "1.0.0"

from .params import DerivedConstants, Regime, WalkParams, validate, validate_params  # noqa: E402,F401
from .simulator import PathRecord, WalkState, init_walk, simulate_path, step_law  # noqa: E402,F401
from .ensemble import EnsembleStats, run_ensemble  # noqa: E402,F401
