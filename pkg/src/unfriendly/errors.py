"""Exception hierarchy shared by every module.

Each class carries the CLI exit code it maps to.
"""


class WorkbenchError(Exception):
    exit_code = 1


class InputError(WorkbenchError, ValueError):
    """Malformed or inconsistent input (unknown vertex, bad JSON shape, ...)."""

    exit_code = 2


class PreconditionError(InputError):
    """An operation was called outside its documented domain."""


class CapacityError(WorkbenchError):
    """A configured exhaustive-search or size bound was exceeded."""

    exit_code = 3


class UnsatError(WorkbenchError):
    """A search finished without finding an admissible assignment."""

    exit_code = 1


class InvariantViolation(WorkbenchError, AssertionError):
    """An internal guarantee failed. Always a bug, never a user error."""

    exit_code = 1
