"""Exception types shared across the package.

ValueError is reserved for malformed inputs (bad grammar, bad grids, domain
violations); subclasses of ComputationError mean the inputs were well formed
but the numerics could not deliver an answer.
"""


class ComputationError(Exception):
    """Numeric failure on a well-formed problem."""


class DegenerateDensityError(ComputationError):
    """The weight density carries no mass where the operation needs some."""


class NoStatesError(ComputationError):
    """The microcanonical shell is empty below the requested total energy."""


class NoSaddleError(ComputationError):
    """The saddle equations have no root in the admissible energy strip."""
