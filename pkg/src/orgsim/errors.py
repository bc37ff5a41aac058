"""Exception types shared across the package."""


class ConfigError(Exception):
    """A scenario, matrix file, or parameter combination is invalid.

    Raised before any simulation work starts; the CLI maps it to exit code 2.
    """


class InvariantViolation(Exception):
    """A model invariant broke mid-run (partition, capacity, bounds).

    This always indicates a bug or a corrupted state, never bad user input;
    the CLI maps it to exit code 3.
    """
