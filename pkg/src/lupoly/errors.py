"""Exception hierarchy shared by all lupoly modules.

The split mirrors the CLI exit codes: ValidationError -> 1,
NumericalError -> 2, InternalInvariantError -> 3.
"""

from __future__ import annotations


class LupolyError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(LupolyError, ValueError):
    """Malformed or out-of-domain input (bad shape, bad norm, non-member point)."""


class NumericalError(LupolyError, RuntimeError):
    """A numerical procedure failed: non-convergence or ill-conditioning."""


class ConvergenceError(NumericalError):
    """An iterative solver exhausted its restart budget without converging."""


class InternalInvariantError(LupolyError):
    """A guaranteed internal invariant was violated; indicates a bug."""
