"""Exception types shared across the toolkit.

The CLI maps DataError to exit code 3 and ComputeError to exit code 4;
argparse usage errors exit with 2.
"""


class DataError(ValueError):
    """Malformed or invalid input data (files, matrices, segmentations)."""


class ComputeError(RuntimeError):
    """A computation cannot proceed (guard violated, bound undefined)."""
