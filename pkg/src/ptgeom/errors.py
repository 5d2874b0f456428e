"""Exception taxonomy shared across the package.

Numerical routines distinguish structural misuse (wrong shapes), failed
input validation (non-positive metric, broken normalization), truncation
problems, integrator failures, under-resolved grids, and cross-route
numerical inconsistencies, so callers can react differently to each.
"""


class PtgeomError(Exception):
    """Base class for all package errors."""


class StructuralError(PtgeomError):
    """Inputs are structurally malformed (dimension or shape mismatch)."""


class ValidationError(PtgeomError):
    """Inputs violate a mathematical precondition (e.g. W not positive)."""


class PreconditionError(PtgeomError):
    """An operation was called on data that does not satisfy its contract
    (open path where a closed one is required, non-cyclic record, ...)."""


class TruncationError(PtgeomError):
    """Fock-space truncation too small for the requested amplitudes."""

    def __init__(self, message, suggested_dim=None):
        super().__init__(message)
        self.suggested_dim = suggested_dim


class IntegrationError(PtgeomError):
    """Time integration failed to meet its accuracy contract."""


class ResolutionError(PtgeomError):
    """Grid too coarse: phase increments between samples exceed the
    trustworthy window for incremental unwrapping."""


class NumericalConsistencyError(PtgeomError):
    """Two redundant evaluation routes disagree far beyond tolerance."""
