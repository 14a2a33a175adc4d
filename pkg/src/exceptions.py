"""
Error hierarchy
Input errors map to CLI exit code 2, resource-cap failures to exit code 3.
"""


class TreeCoverError(Exception):
    """Base class for every error raised by the estimator."""

    exit_code = 1


class InputError(TreeCoverError, ValueError):
    """Malformed or inconsistent input."""

    exit_code = 2


class TreeFormatError(InputError):
    """A tree or targets file line could not be parsed."""

    def __init__(self, message, line_number=None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class TreeStructureError(InputError):
    """The edge list does not describe a tree (cycle, disconnected, empty)."""


class UnknownVertexError(InputError):
    """A start, target or hitting-time label is not a vertex of the tree."""

    def __init__(self, label, role="vertex"):
        self.label = label
        super().__init__(f"unknown {role} label: {label!r}")


class ConfigurationError(InputError):
    """Invalid parameter combination (epsilon and N both missing, bad probabilities, N = 0)."""


class ResourceCapError(TreeCoverError, RuntimeError):
    """A configured resource cap was exceeded."""

    exit_code = 3


class TruncationError(ResourceCapError):
    """The truncation search exceeded MAX_TRUNCATION_N."""


class SubdivisionCapError(ResourceCapError):
    """Scaling resistances to integers needs a factor beyond SUBDIVISION_SCALE_CAP."""


class StateCapError(ResourceCapError):
    """The exact solver was asked for a tree above its vertex cap."""
