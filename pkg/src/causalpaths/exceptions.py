"""Exception types shared across the package."""


class CausalPathsError(Exception):
    """Base class for all errors raised by causalpaths."""


class InputError(CausalPathsError, ValueError):
    """Bad arguments: unknown vertices, overlapping sets, malformed files."""


class GraphClassError(InputError):
    """A graph violates the mark rules or acyclicity of its declared class."""


class ResourceError(CausalPathsError, RuntimeError):
    """A search or enumeration exceeded its configured budget.

    ``partial`` carries whatever the computation had produced so far
    (search statistics, best-so-far results) so callers can report it.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class InvariantError(CausalPathsError, RuntimeError):
    """An internal construction produced an object that fails its own checks."""
