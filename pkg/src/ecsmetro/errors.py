"""Exception types shared across the package.

Input-domain problems derive from ``ValueError`` and map to CLI exit code 2;
numerical failures (truncation, convergence, formula domain) derive from
:class:`NumericalError` and map to exit code 3.
"""


class EcsError(Exception):
    """Base class for all package errors."""


class ConfigError(EcsError, ValueError):
    """Malformed user configuration (grids, flags, config files)."""


class DegenerateStateError(EcsError, ValueError):
    """The requested probe or output decomposition is undefined at alpha == beta."""


class UnreachableEnergyError(EcsError, ValueError):
    """No probe of the requested family reaches the requested mean photon number."""


class NumericalError(EcsError, ArithmeticError):
    """A numerical procedure failed or left its validated regime."""


class TruncationError(NumericalError):
    """The Fock-space cutoff is too small for the requested accuracy."""


class DerivativeMismatchError(NumericalError):
    """Analytic and finite-difference phase derivatives disagree."""


class FormulaDomainError(NumericalError):
    """A closed form was evaluated outside the domain where it is real-valued.

    ``details`` carries the intermediate quantities and, when available, a
    reference value from the brute-force oracle.
    """

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details
