"""Exception hierarchy shared by all engines."""


class MQTError(Exception):
    """Base class for every error raised by :mod:`modalqt`."""


class FieldMismatchError(MQTError, ValueError):
    """Operands live in different fields."""


class DomainError(MQTError, ValueError):
    """Input is outside the domain an operation is defined on."""


class DimensionError(MQTError, ValueError):
    """Shapes or ambient dimensions do not agree."""


class PreconditionError(MQTError, ValueError):
    """A documented precondition does not hold.

    ``witness`` carries whatever object demonstrates the violation
    (a dependency, a polynomial root, ...), or ``None``.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InvalidStateError(MQTError, ValueError):
    """The zero vector was supplied where a state is required."""


class InvalidEvolutionError(MQTError, ValueError):
    """A singular operator was supplied as a time evolution."""


class NoCloningError(PreconditionError):
    """The n-copy inputs of a cloning task are linearly dependent."""


class ResourceError(MQTError, RuntimeError):
    """A search exceeded its configured cap."""
