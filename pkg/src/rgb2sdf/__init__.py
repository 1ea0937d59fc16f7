"""RGB-only tabletop reconstruction and collision-aware arm control.

Pipeline stages: synthetic scene + posed images -> trained density/color
field -> marching-cubes mesh -> Euclidean signed distance grid -> sampling
based model-predictive arm control, with volumetric and episode metrics
against the analytic scene oracle.
"""

__version__ = "0.1.0"


class InputError(Exception):
    """Missing, malformed, or inconsistent input artifact (CLI exit code 2)."""


class NumericalError(Exception):
    """Non-finite value reached a hard-error contract (CLI exit code 3)."""
