"""Shared test configuration."""
import os

from hypothesis import HealthCheck, Verbosity, settings

# numba JIT warmup on first kernel call breaks hypothesis deadlines.
settings.register_profile(
    "default",
    deadline=None,
    derandomize=True,
    max_examples=50,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("debug", max_examples=10, verbosity=Verbosity.verbose)
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "default"))
