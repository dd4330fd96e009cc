"""Exception types shared across the package.

Input problems (bad files, bad dimensions, bad flags) raise ValueError or
StateFormatError; numerical failures (non-convergence, loss of positivity)
raise NumericError. The CLI maps the former to exit code 2 and the latter
to exit code 3.
"""


class StateFormatError(ValueError):
    """A state file is malformed or violates its declared invariants."""


class NumericError(RuntimeError):
    """A numerical routine failed (non-convergence, invalid spectrum)."""
