"""Exception types shared across the package.

The CLI maps these onto process exit codes (see ``crackwave.cli``):
config 2, domain 3, capability 4, non-convergence 5.
"""


class CrackwaveError(Exception):
    """Base class for all package errors."""


class ConfigError(CrackwaveError):
    """Invalid run configuration (unknown field, bad value, missing file)."""


class DomainError(CrackwaveError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class CapabilityError(CrackwaveError):
    """A kernel provider was asked for something it cannot evaluate."""


class TableFormatError(ConfigError):
    """A kernel table file failed to parse or violates its invariants."""


class NonConvergenceError(CrackwaveError):
    """Iterative root search failed; carries the last iterate for diagnosis."""

    def __init__(self, message, last_iterate=None, residual=None, iterations=None):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.residual = residual
        self.iterations = iterations


class BoundaryContactError(CrackwaveError):
    """A winding-number contour passed too close to a zero."""

    def __init__(self, message, sample=None, value=None):
        super().__init__(message)
        self.sample = sample
        self.value = value


class ReferenceKernelUnavailable(CrackwaveError, NotImplementedError):
    """The closed-form reference kernel symbols are not bundled."""


class SynthesisError(CrackwaveError):
    """A modal front could not be synthesized or measured."""
